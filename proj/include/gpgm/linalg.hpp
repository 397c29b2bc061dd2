#pragma once

#include <complex>
#include <functional>

#include <Eigen/Dense>

namespace gpgm {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Eigenvalues with |q| <= rank_tol * max(1, op_norm) count as zero.
inline constexpr double kDefaultRankTol = 1e-10;

/// Dense complex Hermitian matrix. The stored matrix is always exactly
/// Hermitian: construction replaces A by (A + A^dagger) / 2.
class HermitianOperator {
 public:
  /// Throws PreconditionError for an empty or non-square matrix.
  explicit HermitianOperator(const CMatrix& m);

  static HermitianOperator identity(Eigen::Index dim);
  static HermitianOperator zero(Eigen::Index dim);
  static HermitianOperator diagonal(const RVector& values);
  /// |v><v| (v is not normalized).
  static HermitianOperator outer(const CVector& v);

  Eigen::Index dim() const noexcept { return m_.rows(); }
  const CMatrix& matrix() const noexcept { return m_; }
  Complex operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }
  double trace() const { return m_.trace().real(); }

  HermitianOperator& operator+=(const HermitianOperator& o);
  HermitianOperator& operator-=(const HermitianOperator& o);
  HermitianOperator& operator*=(double s);

  friend HermitianOperator operator+(HermitianOperator a, const HermitianOperator& b) { return a += b; }
  friend HermitianOperator operator-(HermitianOperator a, const HermitianOperator& b) { return a -= b; }
  friend HermitianOperator operator*(HermitianOperator a, double s) { return a *= s; }
  friend HermitianOperator operator*(double s, HermitianOperator a) { return a *= s; }

 private:
  CMatrix m_;
};

/// A^dagger M A, symmetrized.
HermitianOperator congruence(const CMatrix& a, const HermitianOperator& m);
/// B M B for Hermitian B, symmetrized.
HermitianOperator sandwich(const HermitianOperator& b, const HermitianOperator& m);

struct EigenDecomposition {
  RVector values;   // ascending
  CMatrix vectors;  // unitary, eigenvectors in columns
};

EigenDecomposition eigh(const HermitianOperator& a);
/// Same contract as eigh, computed in extended precision. Used wherever small
/// eigenvalues get inverted, so that graded spectra keep their accuracy down
/// to the rank cutoff.
EigenDecomposition eigh_extended(const HermitianOperator& a);

/// V diag(f(q)) V^dagger.
HermitianOperator spectral_map(const EigenDecomposition& eig, const std::function<double(double)>& f);

/// Absolute zero threshold for the spectrum: rank_tol * max(1, max|q|).
double rank_cutoff(const EigenDecomposition& eig, double rank_tol);

double min_eigenvalue(const HermitianOperator& a);
double max_eigenvalue(const HermitianOperator& a);

HermitianOperator psd_sqrt(const HermitianOperator& a, double tol = kDefaultRankTol);
/// a^p for PSD a and p > 0, with the same clamping rule as psd_sqrt.
HermitianOperator psd_power(const HermitianOperator& a, double p, double tol = kDefaultRankTol);

HermitianOperator pinv(const HermitianOperator& a, double rank_tol = kDefaultRankTol);
/// sqrt(a^+): pseudo-inverse square root, rank decided on a's own spectrum.
HermitianOperator pinv_sqrt(const HermitianOperator& a, double rank_tol = kDefaultRankTol);
HermitianOperator support_projector(const HermitianOperator& a, double rank_tol = kDefaultRankTol);
HermitianOperator kernel_projector(const HermitianOperator& a, double rank_tol = kDefaultRankTol);

/// Projector onto the span of eigenvectors with eigenvalue >= -cutoff.
HermitianOperator nonnegative_projector(const HermitianOperator& a, double rank_tol = kDefaultRankTol);

/// The contraction Lambda with Lambda rho^{1/2} = rho_E^{1/2}, ||Lambda|| <= 1
/// and ker(rho) in ker(Lambda).
struct Contraction {
  CMatrix matrix;
  double rank_tolerance;
};

/// Lambda = sqrt(rho_e) * pinv(sqrt(rho)). Throws PreconditionError unless
/// rho - rho_e >= -1e-9.
Contraction contraction_lambda(const HermitianOperator& rho_e, const HermitianOperator& rho,
                               double rank_tol = kDefaultRankTol);

double trace_norm(const HermitianOperator& a);
double hs_norm(const HermitianOperator& a);
double op_norm(const HermitianOperator& a);
/// Tr[ab], real for Hermitian a and b.
double hs_inner(const HermitianOperator& a, const HermitianOperator& b);

/// Largest singular value of a general matrix.
double spectral_norm(const CMatrix& a);

}  // namespace gpgm
