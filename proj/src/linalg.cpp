#include "gpgm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gpgm/errors.hpp"

namespace gpgm {

HermitianOperator::HermitianOperator(const CMatrix& m) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    std::ostringstream os;
    os << "HermitianOperator requires a non-empty square matrix, got " << m.rows() << "x" << m.cols();
    throw PreconditionError(os.str());
  }
  m_ = 0.5 * (m + m.adjoint());
}

HermitianOperator HermitianOperator::identity(Eigen::Index dim) {
  return HermitianOperator(CMatrix::Identity(dim, dim));
}

HermitianOperator HermitianOperator::zero(Eigen::Index dim) {
  return HermitianOperator(CMatrix::Zero(dim, dim));
}

HermitianOperator HermitianOperator::diagonal(const RVector& values) {
  return HermitianOperator(CMatrix(values.cast<Complex>().asDiagonal()));
}

HermitianOperator HermitianOperator::outer(const CVector& v) {
  return HermitianOperator(CMatrix(v * v.adjoint()));
}

HermitianOperator& HermitianOperator::operator+=(const HermitianOperator& o) {
  if (o.dim() != dim()) throw PreconditionError("dimension mismatch in operator sum");
  m_ += o.m_;
  return *this;
}

HermitianOperator& HermitianOperator::operator-=(const HermitianOperator& o) {
  if (o.dim() != dim()) throw PreconditionError("dimension mismatch in operator difference");
  m_ -= o.m_;
  return *this;
}

HermitianOperator& HermitianOperator::operator*=(double s) {
  m_ *= s;
  return *this;
}

HermitianOperator congruence(const CMatrix& a, const HermitianOperator& m) {
  return HermitianOperator(CMatrix(a.adjoint() * m.matrix() * a));
}

HermitianOperator sandwich(const HermitianOperator& b, const HermitianOperator& m) {
  return HermitianOperator(CMatrix(b.matrix() * m.matrix() * b.matrix()));
}

EigenDecomposition eigh(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    // Best-effort residual from whatever the solver left behind.
    double residual = std::numeric_limits<double>::infinity();
    if (solver.eigenvectors().size() == a.matrix().size()) {
      const CMatrix& v = solver.eigenvectors();
      residual = (v * solver.eigenvalues().cast<Complex>().asDiagonal() * v.adjoint() - a.matrix()).norm();
    }
    std::ostringstream os;
    os << "Hermitian eigensolver did not converge (dim " << a.dim() << ", residual " << residual << ")";
    throw ConvergenceError(os.str(), residual);
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

EigenDecomposition eigh_extended(const HermitianOperator& a) {
  using LMatrix = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::SelfAdjointEigenSolver<LMatrix> es(a.matrix().cast<std::complex<long double>>());
  if (es.info() != Eigen::Success) {
    std::ostringstream os;
    os << "extended-precision eigensolver did not converge (dim " << a.dim() << ")";
    throw ConvergenceError(os.str(), std::numeric_limits<double>::infinity());
  }
  return {es.eigenvalues().cast<double>(), es.eigenvectors().cast<Complex>()};
}

HermitianOperator spectral_map(const EigenDecomposition& eig, const std::function<double(double)>& f) {
  RVector mapped = eig.values.unaryExpr(f);
  return HermitianOperator(CMatrix(eig.vectors * mapped.cast<Complex>().asDiagonal() * eig.vectors.adjoint()));
}

double rank_cutoff(const EigenDecomposition& eig, double rank_tol) {
  double scale = eig.values.size() ? eig.values.cwiseAbs().maxCoeff() : 0.0;
  return rank_tol * std::max(1.0, scale);
}

double min_eigenvalue(const HermitianOperator& a) {
  return eigh(a).values(0);
}

double max_eigenvalue(const HermitianOperator& a) {
  auto eig = eigh(a);
  return eig.values(eig.values.size() - 1);
}

namespace {

EigenDecomposition checked_psd(const HermitianOperator& a, double tol, const char* op) {
  auto eig = eigh_extended(a);
  double cut = rank_cutoff(eig, tol);
  if (eig.values(0) < -cut) {
    std::ostringstream os;
    os << op << ": operator is not positive semidefinite (eigenvalue " << eig.values(0) << ")";
    throw NotPsdError(os.str(), eig.values(0));
  }
  return eig;
}

}  // namespace

HermitianOperator psd_sqrt(const HermitianOperator& a, double tol) {
  return psd_power(a, 0.5, tol);
}

HermitianOperator psd_power(const HermitianOperator& a, double p, double tol) {
  if (!(p > 0.0)) throw PreconditionError("psd_power requires a positive exponent");
  auto eig = checked_psd(a, tol, "psd_power");
  const double cut = rank_cutoff(eig, tol);
  return spectral_map(eig, [p, cut](double q) { return q > cut ? std::pow(q, p) : 0.0; });
}

HermitianOperator pinv(const HermitianOperator& a, double rank_tol) {
  auto eig = eigh_extended(a);
  double cut = rank_cutoff(eig, rank_tol);
  return spectral_map(eig, [cut](double q) { return std::abs(q) > cut ? 1.0 / q : 0.0; });
}

HermitianOperator pinv_sqrt(const HermitianOperator& a, double rank_tol) {
  auto eig = checked_psd(a, rank_tol, "pinv_sqrt");
  double cut = rank_cutoff(eig, rank_tol);
  return spectral_map(eig, [cut](double q) { return q > cut ? 1.0 / std::sqrt(q) : 0.0; });
}

HermitianOperator support_projector(const HermitianOperator& a, double rank_tol) {
  auto eig = eigh_extended(a);
  double cut = rank_cutoff(eig, rank_tol);
  return spectral_map(eig, [cut](double q) { return std::abs(q) > cut ? 1.0 : 0.0; });
}

HermitianOperator kernel_projector(const HermitianOperator& a, double rank_tol) {
  auto eig = eigh_extended(a);
  double cut = rank_cutoff(eig, rank_tol);
  return spectral_map(eig, [cut](double q) { return std::abs(q) > cut ? 0.0 : 1.0; });
}

HermitianOperator nonnegative_projector(const HermitianOperator& a, double rank_tol) {
  auto eig = eigh(a);
  double cut = rank_cutoff(eig, rank_tol);
  return spectral_map(eig, [cut](double q) { return q >= -cut ? 1.0 : 0.0; });
}

Contraction contraction_lambda(const HermitianOperator& rho_e, const HermitianOperator& rho, double rank_tol) {
  if (rho_e.dim() != rho.dim()) throw PreconditionError("contraction_lambda: dimension mismatch");
  double gap = min_eigenvalue(rho - rho_e);
  if (gap < -1e-9) {
    std::ostringstream os;
    os << "contraction_lambda: rho_E is not dominated by rho (min eigenvalue of rho - rho_E is " << gap << ")";
    throw PreconditionError(os.str());
  }
  // pinv(sqrt(rho)) with the rank decided on rho's spectrum, as in kernel_projector.
  CMatrix lambda = psd_sqrt(rho_e, rank_tol).matrix() * pinv_sqrt(rho, rank_tol).matrix();
  return {std::move(lambda), rank_tol};
}

double trace_norm(const HermitianOperator& a) {
  return eigh(a).values.cwiseAbs().sum();
}

double hs_norm(const HermitianOperator& a) {
  return a.matrix().norm();
}

double op_norm(const HermitianOperator& a) {
  return eigh(a).values.cwiseAbs().maxCoeff();
}

double hs_inner(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) throw PreconditionError("hs_inner: dimension mismatch");
  // Tr[ab] = sum_ij a_ij b_ji = sum_ij a_ij conj(b_ij) for Hermitian b.
  return (a.matrix().array() * b.matrix().array().conjugate()).sum().real();
}

double spectral_norm(const CMatrix& a) {
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

}  // namespace gpgm
