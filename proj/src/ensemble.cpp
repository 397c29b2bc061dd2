#include "gpgm/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "gpgm/errors.hpp"

namespace gpgm {

namespace {

void normalize_weights(std::vector<double>& weights) {
  double z = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (auto& w : weights) w /= z;
  // Renormalization can leave the sum an ulp or so off; fold that into the largest weight.
  double residual = 1.0 - std::accumulate(weights.begin(), weights.end(), 0.0);
  *std::max_element(weights.begin(), weights.end()) += residual;
}

}  // namespace

Partition singleton_partition(std::size_t r) {
  Partition cells(r);
  for (std::size_t i = 0; i < r; ++i) cells[i].indices = {i};
  return cells;
}

Partition whole_partition(std::size_t r) {
  OutcomeCell all;
  all.indices.resize(r);
  std::iota(all.indices.begin(), all.indices.end(), std::size_t{0});
  return {all};
}

void check_partition(const Partition& cells, std::size_t r, const char* context) {
  std::vector<bool> seen(r, false);
  std::size_t covered = 0;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (cells[c].indices.empty()) {
      std::ostringstream os;
      os << context << ": cell " << c << " is empty";
      throw PreconditionError(os.str());
    }
    for (auto i : cells[c].indices) {
      if (i >= r || seen[i]) {
        std::ostringstream os;
        os << context << ": cell " << c << " contains index " << i
           << (i >= r ? " out of range" : " already used by another cell");
        throw PreconditionError(os.str());
      }
      seen[i] = true;
      ++covered;
    }
  }
  if (covered != r) {
    std::ostringstream os;
    os << context << ": cells cover " << covered << " of " << r << " indices";
    throw PreconditionError(os.str());
  }
}

bool is_singleton_partition(const Partition& cells) {
  return std::all_of(cells.begin(), cells.end(), [](const OutcomeCell& c) { return c.indices.size() == 1; });
}

Ensemble::Ensemble(std::string label, std::size_t param_dim, std::vector<RVector> points, std::vector<double> weights,
                   std::vector<HermitianOperator> states, double rank_tol)
    : label_(std::move(label)),
      param_dim_(param_dim),
      points_(std::move(points)),
      weights_(std::move(weights)),
      states_(std::move(states)) {
  auto fail = [](const std::string& msg) { throw ValidationError(msg); };
  if (weights_.empty()) fail("ensemble has no points");
  if (points_.size() != weights_.size() || states_.size() != weights_.size()) {
    std::ostringstream os;
    os << "ensemble length mismatch: " << points_.size() << " points, " << weights_.size() << " weights, "
       << states_.size() << " states";
    fail(os.str());
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (static_cast<std::size_t>(points_[i].size()) != param_dim_) {
      std::ostringstream os;
      os << "points[" << i << "] has dimension " << points_[i].size() << ", expected param_dim " << param_dim_;
      fail(os.str());
    }
  }
  double total = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i])) {
      std::ostringstream os;
      os << "weights[" << i << "] = " << weights_[i] << " is not strictly positive";
      fail(os.str());
    }
    total += weights_[i];
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream os;
    os.precision(17);
    os << "weights sum to " << total << ", expected 1 within 1e-12";
    fail(os.str());
  }
  const auto d = states_.front().dim();
  for (std::size_t i = 0; i < states_.size(); ++i) {
    if (states_[i].dim() != d) {
      std::ostringstream os;
      os << "states[" << i << "] has dimension " << states_[i].dim() << ", expected " << d;
      fail(os.str());
    }
    double tr = states_[i].trace();
    if (std::abs(tr - 1.0) > 1e-10) {
      std::ostringstream os;
      os.precision(17);
      os << "states[" << i << "] has trace " << tr << ", expected 1 within 1e-10";
      fail(os.str());
    }
    auto eig = eigh(states_[i]);
    if (eig.values(0) < -rank_cutoff(eig, rank_tol)) {
      std::ostringstream os;
      os << "states[" << i << "] is not positive semidefinite (eigenvalue " << eig.values(0) << ")";
      fail(os.str());
    }
  }
  if (param_dim_ > 0) {
    for (std::size_t i = 0; i < points_.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (points_[i] == points_[j]) {
          std::ostringstream os;
          os << "points[" << i << "] duplicates points[" << j << "]";
          fail(os.str());
        }
  }
}

HermitianOperator average_state(const Ensemble& e) {
  CMatrix acc = CMatrix::Zero(e.dim(), e.dim());
  for (std::size_t i = 0; i < e.size(); ++i) acc += e.weight(i) * e.state(i).matrix();
  return HermitianOperator(acc);
}

HermitianOperator partial_state(const Ensemble& e, const OutcomeCell& cell) {
  if (cell.indices.empty()) throw PreconditionError("partial_state: empty cell");
  CMatrix acc = CMatrix::Zero(e.dim(), e.dim());
  for (auto i : cell.indices) {
    if (i >= e.size()) throw PreconditionError("partial_state: cell index out of range");
    acc += e.weight(i) * e.state(i).matrix();
  }
  return HermitianOperator(acc);
}

double cell_mass(const Ensemble& e, const OutcomeCell& cell) {
  double m = 0.0;
  for (auto i : cell.indices) m += e.weight(i);
  return m;
}

double second_moment(const Ensemble& e) {
  if (e.param_dim() == 0) throw PreconditionError("second_moment requires param_dim >= 1");
  double m = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) m += e.weight(i) * e.point(i).squaredNorm();
  return m;
}

Ensemble discretize_gaussian_prior(std::size_t param_dim, double sigma_prior, double grid_half_width,
                                   std::size_t points_per_axis, const StateFamily& family, std::size_t max_points) {
  if (param_dim == 0) throw PreconditionError("discretize_gaussian_prior: param_dim must be >= 1");
  if (points_per_axis < 2) throw PreconditionError("discretize_gaussian_prior: points_per_axis must be >= 2");
  if (!(sigma_prior > 0.0)) throw PreconditionError("discretize_gaussian_prior: sigma_prior must be > 0");
  if (!(grid_half_width > 0.0)) throw PreconditionError("discretize_gaussian_prior: grid_half_width must be > 0");
  if (family.param_dim != param_dim) throw PreconditionError("discretize_gaussian_prior: state family dimension mismatch");
  double count = std::pow(static_cast<double>(points_per_axis), static_cast<double>(param_dim));
  if (count > static_cast<double>(max_points)) {
    std::ostringstream os;
    os << "grid of " << points_per_axis << "^" << param_dim << " points exceeds the cap of " << max_points;
    throw SizeError(os.str());
  }
  const auto total = static_cast<std::size_t>(count);
  RVector axis = RVector::LinSpaced(static_cast<Eigen::Index>(points_per_axis), -grid_half_width, grid_half_width);

  std::vector<RVector> points;
  std::vector<double> weights;
  std::vector<HermitianOperator> states;
  points.reserve(total);
  weights.reserve(total);
  states.reserve(total);
  std::vector<std::size_t> digit(param_dim, 0);
  for (std::size_t n = 0; n < total; ++n) {
    RVector x(static_cast<Eigen::Index>(param_dim));
    for (std::size_t k = 0; k < param_dim; ++k) x(static_cast<Eigen::Index>(k)) = axis(static_cast<Eigen::Index>(digit[k]));
    weights.push_back(std::exp(-0.5 * x.squaredNorm() / (sigma_prior * sigma_prior)));
    states.push_back(family.state_at(x));
    points.push_back(std::move(x));
    for (std::size_t k = param_dim; k-- > 0;) {
      if (++digit[k] < points_per_axis) break;
      digit[k] = 0;
    }
  }
  normalize_weights(weights);

  std::ostringstream label;
  label << "gaussian_grid(N=" << param_dim << ",sigma=" << sigma_prior << ",hw=" << grid_half_width
        << ",n=" << points_per_axis << "," << family.name << ")";
  return Ensemble(label.str(), param_dim, std::move(points), std::move(weights), std::move(states));
}

CVector random_unit_vector(Eigen::Index d, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CVector v(d);
  for (Eigen::Index k = 0; k < d; ++k) v(k) = Complex(g(rng), g(rng));
  return v / v.norm();
}

CMatrix random_unitary(Eigen::Index d, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix z(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) z(i, j) = Complex(g(rng), g(rng));
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < d; ++k) {
    double a = std::abs(r(k, k));
    if (a > 0.0) q.col(k) *= r(k, k) / a;
  }
  return q;
}

HermitianOperator random_wishart(Eigen::Index d, Eigen::Index rank, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix z(d, rank);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < rank; ++j) z(i, j) = Complex(g(rng), g(rng));
  return HermitianOperator(CMatrix(z * z.adjoint()));
}

Ensemble random_ensemble(std::size_t d, std::size_t r, std::size_t param_dim, std::uint64_t seed, StateKind kind,
                         std::size_t subspace_dim) {
  if (d < 1 || r < 1) throw PreconditionError("random_ensemble requires d >= 1 and r >= 1");
  if (subspace_dim > d) throw PreconditionError("random_ensemble: subspace_dim exceeds d");
  Rng rng(seed);
  const auto dd = static_cast<Eigen::Index>(d);
  const auto k = static_cast<Eigen::Index>(subspace_dim == 0 ? d : subspace_dim);
  // Columns of `embed` span the common support of all states.
  CMatrix embed = random_unitary(dd, rng).leftCols(k);

  std::uniform_real_distribution<double> uw(0.1, 1.0);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<RVector> points;
  std::vector<double> weights;
  std::vector<HermitianOperator> states;
  for (std::size_t i = 0; i < r; ++i) {
    HermitianOperator local = kind == StateKind::pure ? HermitianOperator::outer(random_unit_vector(k, rng))
                                                      : random_wishart(k, k, rng);
    local *= 1.0 / local.trace();
    states.emplace_back(CMatrix(embed * local.matrix() * embed.adjoint()));
    weights.push_back(uw(rng));
    RVector x(static_cast<Eigen::Index>(param_dim));
    for (auto& c : x) c = g(rng);
    points.push_back(std::move(x));
  }
  normalize_weights(weights);

  std::ostringstream label;
  label << "random(d=" << d << ",r=" << r << ",N=" << param_dim << ",seed=" << seed << ","
        << (kind == StateKind::pure ? "pure" : "mixed");
  if (subspace_dim) label << ",support=" << subspace_dim;
  label << ")";
  return Ensemble(label.str(), param_dim, std::move(points), std::move(weights), std::move(states));
}

}  // namespace gpgm
