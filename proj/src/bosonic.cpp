#include "gpgm/bosonic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gpgm/errors.hpp"

namespace gpgm {

namespace {

Complex amplitude(const RVector& x) {
  if (x.size() == 1) return Complex(x(0), 0.0) / std::sqrt(2.0);
  if (x.size() == 2) return Complex(x(0), x(1)) / std::sqrt(2.0);
  throw PreconditionError("bosonic displacement needs a point in R^1 or R^2 (single mode)");
}

}  // namespace

CMatrix annihilation_operator(Eigen::Index dim) {
  CMatrix a = CMatrix::Zero(dim, dim);
  for (Eigen::Index n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

HermitianOperator vacuum_state(Eigen::Index fock_cutoff) {
  RVector p = RVector::Zero(fock_cutoff);
  p(0) = 1.0;
  return HermitianOperator::diagonal(p);
}

HermitianOperator thermal_state(Eigen::Index fock_cutoff, double mean_photons) {
  if (!(mean_photons >= 0.0)) throw PreconditionError("thermal_state: mean photon number must be >= 0");
  RVector p(fock_cutoff);
  double ratio = mean_photons / (1.0 + mean_photons);
  for (Eigen::Index n = 0; n < fock_cutoff; ++n) p(n) = std::pow(ratio, static_cast<double>(n));
  p /= p.sum();
  return HermitianOperator::diagonal(p);
}

CMatrix displacement_operator(const RVector& x, Eigen::Index fock_cutoff) {
  const Complex alpha = amplitude(x);
  const double n_bar = std::norm(alpha);
  // Room above the cutoff for the coherent tail: the truncated generator's
  // boundary error then never reaches the returned block.
  const auto big = 2 * fock_cutoff + 4 * static_cast<Eigen::Index>(std::ceil(n_bar)) + 40;
  CMatrix a = annihilation_operator(big);
  CMatrix generator = alpha * a.adjoint() - std::conj(alpha) * a;  // anti-Hermitian
  // exp(G) = exp(-i H) with H = i G Hermitian.
  auto eig = eigh(HermitianOperator(CMatrix(Complex(0.0, 1.0) * generator)));
  CVector phases = (Complex(0.0, -1.0) * eig.values.cast<Complex>()).array().exp();
  CMatrix d = eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
  return d.topLeftCorner(fock_cutoff, fock_cutoff);
}

DisplacedState displaced_state(const RVector& x, const HermitianOperator& base) {
  const auto cutoff = base.dim();
  // base is supported on the first `cutoff` levels, so only that block of D matters.
  CMatrix d = displacement_operator(x, cutoff);
  CMatrix out = d * base.matrix() * d.adjoint();
  double tr = out.trace().real();
  double loss = std::max(0.0, 1.0 - tr / base.trace());
  return {HermitianOperator(CMatrix(out / tr)), loss};
}

StateFamily displaced_family(const HermitianOperator& base, std::size_t param_dim, double trunc_tol) {
  if (param_dim != 1 && param_dim != 2) throw PreconditionError("displaced_family supports N = 1 or N = 2");
  std::ostringstream name;
  name << "displaced(cutoff=" << base.dim() << ")";
  return {name.str(), param_dim, [base, trunc_tol](const RVector& x) {
            auto ds = displaced_state(x, base);
            if (ds.truncation_loss > trunc_tol) {
              std::ostringstream os;
              os << "displaced state at |x| = " << x.norm() << " loses " << ds.truncation_loss
                 << " of its trace at cutoff " << base.dim() << " (tolerance " << trunc_tol << ")";
              throw TruncationError(os.str(), 0, ds.truncation_loss);
            }
            return ds.state;
          }};
}

Ensemble bosonic_displaced_ensemble(const HermitianOperator& base, const std::vector<RVector>& points,
                                    const std::vector<double>& weights, double trunc_tol, std::size_t n_modes) {
  if (n_modes != 1) throw PreconditionError("bosonic_displaced_ensemble: only a single mode is supported");
  if (std::abs(base.trace() - 1.0) > 1e-10 || min_eigenvalue(base) < -1e-10)
    throw PreconditionError("bosonic_displaced_ensemble: base state is not a density operator");
  std::vector<HermitianOperator> states;
  states.reserve(points.size());
  std::size_t worst = 0;
  double worst_loss = -1.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != 2) throw PreconditionError("bosonic_displaced_ensemble: points must lie in R^2");
    auto ds = displaced_state(points[i], base);
    if (ds.truncation_loss > worst_loss) {
      worst_loss = ds.truncation_loss;
      worst = i;
    }
    states.push_back(std::move(ds.state));
  }
  if (worst_loss > trunc_tol) {
    std::ostringstream os;
    os << "truncation loss " << worst_loss << " at points[" << worst << "] exceeds " << trunc_tol
       << " (fock cutoff " << base.dim() << ")";
    throw TruncationError(os.str(), worst, worst_loss);
  }
  std::ostringstream label;
  label << "bosonic(cutoff=" << base.dim() << ",r=" << points.size() << ")";
  return Ensemble(label.str(), 2, points, weights, std::move(states));
}

}  // namespace gpgm
