#include "gpgm/score.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gpgm/errors.hpp"

namespace gpgm {

ScoreMatrix::ScoreMatrix(RMatrix entries, std::string kind) : entries_(std::move(entries)), kind_(std::move(kind)) {
  const auto r = entries_.rows();
  if (r == 0 || entries_.cols() != r) throw ScoreValidityError("score matrix must be square and non-empty");
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < r; ++j) {
      double v = entries_(i, j);
      if (!(v >= -1e-15 && v <= 1.0 + 1e-15)) {
        std::ostringstream os;
        os << "score entry (" << i << ", " << j << ") = " << v << " lies outside [0, 1]";
        throw ScoreValidityError(os.str());
      }
      if (std::abs(v - entries_(j, i)) > 1e-12) {
        std::ostringstream os;
        os << "score matrix is not symmetric at (" << i << ", " << j << ")";
        throw ScoreValidityError(os.str());
      }
    }
  entries_ = 0.5 * (entries_ + entries_.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<RMatrix> eig(entries_, Eigen::EigenvaluesOnly);
  min_eigenvalue_ = eig.eigenvalues()(0);
  if (min_eigenvalue_ < -1e-9 * static_cast<double>(r)) {
    std::ostringstream os;
    os << kind_ << " score is not positive semidefinite on this grid (min eigenvalue " << min_eigenvalue_ << ")";
    throw ScoreValidityError(os.str());
  }
}

ScoreMatrix delta_score(std::size_t r) {
  if (r < 1) throw PreconditionError("delta_score requires r >= 1");
  const auto n = static_cast<Eigen::Index>(r);
  return ScoreMatrix(RMatrix::Identity(n, n), "delta");
}

ScoreFunction delta_function(std::size_t param_dim) {
  return ScoreFunction("delta", param_dim, [](const RVector& x, const RVector& y) { return x == y ? 1.0 : 0.0; });
}

namespace {

Quadrature single_node(std::size_t param_dim) {
  return {{RVector::Zero(static_cast<Eigen::Index>(param_dim))}, {1.0}, {}};
}

double max_abs_coordinate(const std::vector<RVector>& pts) {
  double m = 0.0;
  for (const auto& p : pts)
    if (p.size()) m = std::max(m, p.cwiseAbs().maxCoeff());
  return m;
}

struct SpdInfo {
  RMatrix inverse;
  double determinant;
  double min_eig;
  double max_eig;
};

SpdInfo analyse_spd(const RMatrix& sigma, const char* context) {
  if (sigma.rows() == 0 || sigma.rows() != sigma.cols()) {
    throw PreconditionError(std::string(context) + ": Sigma must be square and non-empty");
  }
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, sigma.cwiseAbs().maxCoeff())) {
    throw PreconditionError(std::string(context) + ": Sigma is not symmetric");
  }
  RMatrix sym = 0.5 * (sigma + sigma.transpose());
  Eigen::SelfAdjointEigenSolver<RMatrix> eig(sym);
  double lo = eig.eigenvalues()(0);
  if (!(lo > 0.0)) {
    std::ostringstream os;
    os << context << ": Sigma is not positive definite (min eigenvalue " << lo << ")";
    throw PreconditionError(os.str());
  }
  return {eig.eigenvectors() * eig.eigenvalues().cwiseInverse().asDiagonal() * eig.eigenvectors().transpose(),
          eig.eigenvalues().prod(), lo, eig.eigenvalues().maxCoeff()};
}

}  // namespace

ScoreFunction constant_score(double a, std::size_t param_dim) {
  if (!(a >= 0.0 && a <= 1.0)) {
    std::ostringstream os;
    os << "constant_score: a = " << a << " lies outside [0, 1]";
    throw PreconditionError(os.str());
  }
  const double root = std::sqrt(a);
  FactorWitness w{[root](const RVector&, const RVector&) { return root; },
                  [param_dim](const std::vector<RVector>&, const QuadratureSpec&) { return single_node(param_dim); }};
  std::ostringstream kind;
  kind << "constant(" << a << ")";
  return ScoreFunction(kind.str(), param_dim, [a](const RVector&, const RVector&) { return a; }, std::move(w));
}

ScoreFunction gaussian_score(const RMatrix& sigma) {
  const auto info = analyse_spd(sigma, "gaussian_score");
  const auto n = static_cast<std::size_t>(sigma.rows());
  auto kernel = [inv = info.inverse](const RVector& x, const RVector& y) {
    RVector d = x - y;
    return std::exp(-0.5 * d.dot(inv * d));
  };
  auto factor = gaussian_factor(sigma);
  // Standard deviation of the factor S_{Sigma/2} along its widest axis.
  const double width = std::sqrt(0.5 * info.max_eig);
  FactorWitness w{factor.factor, [n, width](const std::vector<RVector>& pts, const QuadratureSpec& spec) {
                    double h = spec.half_width > 0.0 ? spec.half_width
                                                     : std::max(6.0 * width, max_abs_coordinate(pts) + 6.0 * width);
                    return trapezoid_box(n, h, spec.nodes_per_axis);
                  }};
  return ScoreFunction("gaussian", n, std::move(kernel), std::move(w));
}

ScoreFunction precision_gaussian_score(double t, std::size_t param_dim) {
  if (!(t > 0.0)) throw PreconditionError("precision_gaussian_score: t must be > 0");
  if (param_dim == 0) throw PreconditionError("precision_gaussian_score: param_dim must be >= 1");
  const auto n = static_cast<Eigen::Index>(param_dim);
  auto s = gaussian_score(RMatrix::Identity(n, n) / t);
  std::ostringstream kind;
  kind << "gaussian_t(" << t << ")";
  return ScoreFunction(kind.str(), param_dim,
                       [t](const RVector& x, const RVector& y) { return std::exp(-0.5 * t * (x - y).squaredNorm()); },
                       s.witness());
}

GaussianFactor gaussian_factor(const RMatrix& sigma) {
  const auto info = analyse_spd(sigma, "gaussian_factor");
  const double n = static_cast<double>(sigma.rows());
  const double det_quarter = info.determinant * std::pow(0.25, n);
  const double scale = std::pow(std::pow(2.0 * std::numbers::pi, n) * det_quarter, -0.25);
  // S_{Sigma/2}(x, y) = exp(-(x - y)^T Sigma^{-1} (x - y)).
  auto factor = [inv = info.inverse, scale](const RVector& x, const RVector& y) {
    RVector d = x - y;
    return scale * std::exp(-d.dot(inv * d));
  };
  return {std::move(factor), scale};
}

Quadrature trapezoid_box(std::size_t param_dim, double half_width, std::size_t nodes_per_axis) {
  if (param_dim < 1 || param_dim > 2) throw PreconditionError("trapezoid_box supports N = 1 or N = 2");
  if (nodes_per_axis < 2) throw PreconditionError("trapezoid_box needs at least 2 nodes per axis");
  const auto n = static_cast<Eigen::Index>(nodes_per_axis);
  RVector axis = RVector::LinSpaced(n, -half_width, half_width);
  RVector w1 = RVector::Constant(n, 2.0 * half_width / static_cast<double>(n - 1));
  w1(0) *= 0.5;
  w1(n - 1) *= 0.5;
  Quadrature q;
  if (param_dim == 1) {
    for (Eigen::Index i = 0; i < n; ++i) {
      q.nodes.push_back(RVector::Constant(1, axis(i)));
      q.weights.push_back(w1(i));
    }
    q.boundary = {0, static_cast<std::size_t>(n - 1)};
    return q;
  }
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == 0 || j == 0 || i == n - 1 || j == n - 1) q.boundary.push_back(q.nodes.size());
      RVector z(2);
      z << axis(i), axis(j);
      q.nodes.push_back(z);
      q.weights.push_back(w1(i) * w1(j));
    }
  return q;
}

ConvolutionReport verify_convolution(const ScoreFunction& s,
                                     const std::vector<std::pair<RVector, RVector>>& sample_pairs,
                                     const QuadratureSpec& spec) {
  if (!s.witness()) throw PreconditionError("verify_convolution: score function has no factorization witness");
  const auto& w = *s.witness();
  std::vector<RVector> pts;
  for (const auto& [x, y] : sample_pairs) {
    pts.push_back(x);
    pts.push_back(y);
  }
  const Quadrature q = w.quadrature(pts, spec);
  ConvolutionReport rep;
  for (const auto& [x, y] : sample_pairs) {
    double integral = 0.0;
    for (std::size_t k = 0; k < q.nodes.size(); ++k) integral += q.weights[k] * w.factor(x, q.nodes[k]) * w.factor(y, q.nodes[k]);
    double tail = 0.0;
    for (auto k : q.boundary) tail += q.weights[k] * std::abs(w.factor(x, q.nodes[k]) * w.factor(y, q.nodes[k]));
    rep.tail_mass = std::max(rep.tail_mass, tail);
    rep.max_deviation = std::max(rep.max_deviation, std::abs(integral - s(x, y)));
  }
  if (rep.tail_mass > kTailMassTol) {
    std::ostringstream os;
    os << "quadrature box does not cover the factor's support (boundary mass " << rep.tail_mass << ")";
    throw CoverageError(os.str(), rep.tail_mass);
  }
  rep.pass = rep.max_deviation <= kConvolutionTol;
  return rep;
}

ScoreMatrix score_matrix(const ScoreFunction& s, const Ensemble& e) {
  if (s.param_dim() != e.param_dim()) {
    std::ostringstream os;
    os << "score_matrix: score has param_dim " << s.param_dim() << ", ensemble has " << e.param_dim();
    throw PreconditionError(os.str());
  }
  const auto r = static_cast<Eigen::Index>(e.size());
  RMatrix m(r, r);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) {
      double v = s(e.point(static_cast<std::size_t>(i)), e.point(static_cast<std::size_t>(j)));
      m(i, j) = v;
      m(j, i) = v;
    }
  return ScoreMatrix(std::move(m), s.kind());
}

}  // namespace gpgm
