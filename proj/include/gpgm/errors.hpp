#pragma once

#include <stdexcept>
#include <string>

namespace gpgm {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An operator expected to be positive semidefinite has a negative eigenvalue.
class NotPsdError : public Error {
 public:
  NotPsdError(const std::string& what, double eigenvalue)
      : Error(what), eigenvalue_(eigenvalue) {}
  double eigenvalue() const noexcept { return eigenvalue_; }

 private:
  double eigenvalue_;
};

/// The Hermitian eigensolver failed to converge.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// A data object violates one of its invariants (ensemble, POVM, input file).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Input could not be parsed (malformed JSON, missing field, wrong type).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A requested grid or instance exceeds the configured size cap.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// Fock truncation discards more probability than allowed.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, std::size_t worst_index, double loss)
      : Error(what), worst_index_(worst_index), loss_(loss) {}
  std::size_t worst_index() const noexcept { return worst_index_; }
  double loss() const noexcept { return loss_; }

 private:
  std::size_t worst_index_;
  double loss_;
};

/// A kernel is not a positive score function on the given grid.
class ScoreValidityError : public Error {
 public:
  using Error::Error;
};

/// A quadrature box does not cover the effective support of an integrand.
class CoverageError : public Error {
 public:
  CoverageError(const std::string& what, double tail_mass)
      : Error(what), tail_mass_(tail_mass) {}
  double tail_mass() const noexcept { return tail_mass_; }

 private:
  double tail_mass_;
};

}  // namespace gpgm
