#pragma once

#include <string>
#include <vector>

#include "gpgm/ensemble.hpp"

namespace gpgm {

/// A measurement with finitely many outcomes: one operator per outcome cell.
/// Builders in this library always return PSD elements summing to I; use
/// validate_povm to check arbitrary instances.
struct Povm {
  Partition cells;
  std::vector<HermitianOperator> elements;
  std::string label;

  std::size_t size() const noexcept { return elements.size(); }
  Eigen::Index dim() const { return elements.front().dim(); }
};

struct ValidationReport {
  std::vector<double> min_eigenvalues;  // per element
  double completeness_residual = 0.0;   // ||sum elements - I||_2 (Hilbert-Schmidt)
  double tolerance = 0.0;
  bool positive = false;
  bool complete = false;

  bool pass() const noexcept { return positive && complete; }
};

/// M_i = sqrt(rho^+) p_i rho_i sqrt(rho^+) + p_i Pi_ker(rho), one singleton
/// cell per point.
Povm build_finite_pgm(const Ensemble& e, double rank_tol = kDefaultRankTol);

/// Generalized PGM over a finite partition of the points:
/// m(E) = Lambda_E^dagger Lambda_E + mu(E) Pi_ker(rho), with Lambda_E the
/// contraction carrying rho^{1/2} to rho_E^{1/2}.
Povm build_gpgm(const Ensemble& e, const Partition& partition, double rank_tol = kDefaultRankTol);

ValidationReport validate_povm(const Povm& p, double tol);

/// Merges cells of p: merge[k] lists indices of p's cells forming new cell k.
/// Each merged element is the exact sum of its constituents.
Povm coarse_grain(const Povm& p, const Partition& merge);

}  // namespace gpgm
