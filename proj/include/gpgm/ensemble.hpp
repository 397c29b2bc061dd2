#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gpgm/linalg.hpp"
#include "gpgm/random.hpp"

namespace gpgm {

/// A block of a finite partition of the parameter points, by index.
struct OutcomeCell {
  std::vector<std::size_t> indices;

  friend bool operator==(const OutcomeCell&, const OutcomeCell&) = default;
};

using Partition = std::vector<OutcomeCell>;

Partition singleton_partition(std::size_t r);
Partition whole_partition(std::size_t r);
/// Throws PreconditionError unless cells are non-empty, disjoint and cover {0..r-1}.
void check_partition(const Partition& cells, std::size_t r, const char* context);
bool is_singleton_partition(const Partition& cells);

/// A finite quantum ensemble: parameter points x_i in R^N with probability
/// weights mu_i and density operators rho_i on a common d-dimensional space.
///
/// Continuous ensembles are represented by grids with mass-at-node weights.
/// When N = 0 the points carry no geometry and serve only as labels.
class Ensemble {
 public:
  /// Validates every invariant and throws ValidationError naming the first
  /// violation and its index.
  Ensemble(std::string label, std::size_t param_dim, std::vector<RVector> points, std::vector<double> weights,
           std::vector<HermitianOperator> states, double rank_tol = kDefaultRankTol);

  const std::string& label() const noexcept { return label_; }
  std::size_t param_dim() const noexcept { return param_dim_; }
  std::size_t size() const noexcept { return weights_.size(); }
  Eigen::Index dim() const noexcept { return states_.front().dim(); }

  const std::vector<RVector>& points() const noexcept { return points_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::vector<HermitianOperator>& states() const noexcept { return states_; }
  const RVector& point(std::size_t i) const { return points_.at(i); }
  double weight(std::size_t i) const { return weights_.at(i); }
  const HermitianOperator& state(std::size_t i) const { return states_.at(i); }

 private:
  std::string label_;
  std::size_t param_dim_;
  std::vector<RVector> points_;
  std::vector<double> weights_;
  std::vector<HermitianOperator> states_;
};

/// rho = sum_i mu_i rho_i.
HermitianOperator average_state(const Ensemble& e);
/// rho_E = sum_{i in E} mu_i rho_i.
HermitianOperator partial_state(const Ensemble& e, const OutcomeCell& cell);
/// mu(E).
double cell_mass(const Ensemble& e, const OutcomeCell& cell);
/// E_{mu,2} = sum_i mu_i ||x_i||^2. Requires N >= 1.
double second_moment(const Ensemble& e);

/// Maps a parameter point to a density operator.
struct StateFamily {
  std::string name;
  std::size_t param_dim;
  std::function<HermitianOperator(const RVector&)> state_at;
};

inline constexpr std::size_t kDefaultGridCap = 4096;

/// Regular grid on [-half_width, half_width]^N with weights proportional to
/// the N(0, sigma_prior^2 I) density at the nodes, renormalized.
Ensemble discretize_gaussian_prior(std::size_t param_dim, double sigma_prior, double grid_half_width,
                                   std::size_t points_per_axis, const StateFamily& family,
                                   std::size_t max_points = kDefaultGridCap);

enum class StateKind { pure, mixed };

/// Haar-random pure states or normalized complex Wishart states, random
/// positive weights, standard-normal points in R^N. Deterministic per seed.
/// With subspace_dim in [1, d) every state lives in one common random
/// subspace of that dimension, so the average state is rank deficient.
Ensemble random_ensemble(std::size_t d, std::size_t r, std::size_t param_dim, std::uint64_t seed, StateKind kind,
                         std::size_t subspace_dim = 0);

CVector random_unit_vector(Eigen::Index d, Rng& rng);
/// Haar-random unitary (QR of a complex Ginibre matrix with phase fix).
CMatrix random_unitary(Eigen::Index d, Rng& rng);
/// G G^dagger for a d x rank complex Ginibre matrix G (not normalized).
HermitianOperator random_wishart(Eigen::Index d, Eigen::Index rank, Rng& rng);

}  // namespace gpgm
