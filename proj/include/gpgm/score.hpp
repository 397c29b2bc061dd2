#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gpgm/ensemble.hpp"

namespace gpgm {

/// Quadrature nodes and weights over the factorization space Y.
struct Quadrature {
  std::vector<RVector> nodes;
  std::vector<double> weights;
  /// Indices of nodes on the boundary of the integration box (empty for
  /// exact finite measures).
  std::vector<std::size_t> boundary;
};

/// Settings for building a Lebesgue quadrature box.
struct QuadratureSpec {
  std::size_t nodes_per_axis = 400;
  /// 0 means automatic: max(6 sigma, max|x| + 6 sigma) with sigma the factor's width.
  double half_width = 0.0;
};

/// Witness of S = P *_pi P: the factor P(x, y) and a way to integrate over
/// (Y, pi) for a set of query points.
struct FactorWitness {
  std::function<double(const RVector&, const RVector&)> factor;
  /// Builds a quadrature for pi covering the given query points.
  std::function<Quadrature(const std::vector<RVector>&, const QuadratureSpec&)> quadrature;
};

/// A score function S(x, xhat) in [0, 1] on R^N.
class ScoreFunction {
 public:
  using Kernel = std::function<double(const RVector&, const RVector&)>;

  ScoreFunction(std::string kind, std::size_t param_dim, Kernel eval, std::optional<FactorWitness> witness = {})
      : kind_(std::move(kind)), param_dim_(param_dim), eval_(std::move(eval)), witness_(std::move(witness)) {}

  const std::string& kind() const noexcept { return kind_; }
  std::size_t param_dim() const noexcept { return param_dim_; }
  double operator()(const RVector& x, const RVector& xhat) const { return eval_(x, xhat); }
  const std::optional<FactorWitness>& witness() const noexcept { return witness_; }

 private:
  std::string kind_;
  std::size_t param_dim_;
  Kernel eval_;
  std::optional<FactorWitness> witness_;
};

/// Materialized score S(x_i, x_j) for the points of a finite ensemble.
/// Construction checks entries in [0, 1], symmetry, and
/// min eigenvalue >= -1e-9 * r; violations throw ScoreValidityError.
class ScoreMatrix {
 public:
  explicit ScoreMatrix(RMatrix entries, std::string kind = "matrix");

  const RMatrix& entries() const noexcept { return entries_; }
  double operator()(std::size_t i, std::size_t j) const {
    return entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  std::size_t size() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
  const std::string& kind() const noexcept { return kind_; }
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  RMatrix entries_;
  std::string kind_;
  double min_eigenvalue_;
};

/// Identity score matrix: exact identification.
ScoreMatrix delta_score(std::size_t r);
/// Pointwise delta: 1 when x == xhat exactly, else 0.
ScoreFunction delta_function(std::size_t param_dim);

ScoreFunction constant_score(double a, std::size_t param_dim);

/// S_Sigma(x, y) = exp(-(x - y)^T Sigma^{-1} (x - y) / 2).
ScoreFunction gaussian_score(const RMatrix& sigma);

/// exp(-t |x - y|^2 / 2), the isotropic kernel used to approach the mean
/// square error as t -> 0. Equal to gaussian_score(I / t).
ScoreFunction precision_gaussian_score(double t, std::size_t param_dim);

struct GaussianFactor {
  std::function<double(const RVector&, const RVector&)> factor;
  double scale;  // ((2 pi)^N det(Sigma / 4))^{-1/4}
};

/// P_Sigma = scale * S_{Sigma/2}, satisfying S_Sigma = P_Sigma *_Lebesgue P_Sigma.
GaussianFactor gaussian_factor(const RMatrix& sigma);

/// Composite trapezoid rule on [-h, h]^N (N <= 2), n nodes per axis.
Quadrature trapezoid_box(std::size_t param_dim, double half_width, std::size_t nodes_per_axis);

struct ConvolutionReport {
  double max_deviation = 0.0;
  double tail_mass = 0.0;
  bool pass = false;
};

inline constexpr double kConvolutionTol = 1e-6;
inline constexpr double kTailMassTol = 1e-8;

/// Integrates sum_y P(x, y) P(x', y) pi(y) for each pair and compares with
/// S(x, x'). Throws CoverageError when the boundary nodes of the box carry
/// more than 1e-8 of integrand mass.
ConvolutionReport verify_convolution(const ScoreFunction& s,
                                     const std::vector<std::pair<RVector, RVector>>& sample_pairs,
                                     const QuadratureSpec& quad = {});

/// S(x_i, x_j) over the ensemble's points.
ScoreMatrix score_matrix(const ScoreFunction& s, const Ensemble& e);

}  // namespace gpgm
