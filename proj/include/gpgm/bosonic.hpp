#pragma once

#include <vector>

#include "gpgm/ensemble.hpp"

namespace gpgm {

// Single-mode bosonic states in the Fock basis {|0>, ..., |cutoff-1>}.
//
// Displacement convention: a phase-space point x = (x1, x2) maps to the
// coherent amplitude alpha = (x1 + i x2) / sqrt(2) and
// D(x) = exp(alpha a^dagger - conj(alpha) a). With this convention
// <vac|D(x)|vac> = exp(-|x|^2 / 4) and a displaced vacuum has mean photon
// number |x|^2 / 2. One-dimensional points x1 are read as (x1, 0).

inline constexpr double kDefaultTruncTol = 1e-6;

/// Truncated annihilation operator a on `dim` Fock levels.
CMatrix annihilation_operator(Eigen::Index dim);

HermitianOperator vacuum_state(Eigen::Index fock_cutoff);
/// Truncated thermal state with the given mean photon number, renormalized.
HermitianOperator thermal_state(Eigen::Index fock_cutoff, double mean_photons);

/// Top-left fock_cutoff x fock_cutoff block of D(x), computed on an enlarged
/// Fock space so that the block matches the untruncated operator.
CMatrix displacement_operator(const RVector& x, Eigen::Index fock_cutoff);

struct DisplacedState {
  HermitianOperator state;  // renormalized to unit trace
  double truncation_loss;   // 1 - Tr[P D rho0 D^dagger P]
};

/// P D(x) rho0 D(x)^dagger P with P the projector onto the first
/// fock_cutoff levels; base.dim() is the cutoff.
DisplacedState displaced_state(const RVector& x, const HermitianOperator& base);

/// Family x -> D(x) rho0 D(-x) for N in {1, 2}; throws TruncationError if a
/// point loses more than trunc_tol of its trace.
StateFamily displaced_family(const HermitianOperator& base, std::size_t param_dim = 2,
                             double trunc_tol = kDefaultTruncTol);

/// Ensemble {mu_i, D(x_i) rho0 D(-x_i)} for a single mode (N = 2). Throws
/// TruncationError reporting the worst point if any loss exceeds trunc_tol.
Ensemble bosonic_displaced_ensemble(const HermitianOperator& base, const std::vector<RVector>& points,
                                    const std::vector<double>& weights, double trunc_tol = kDefaultTruncTol,
                                    std::size_t n_modes = 1);

}  // namespace gpgm
