#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gpgm/gain.hpp"

namespace gpgm {

struct SolverResult {
  Povm povm;
  double objective = 0.0;
  int iterations = 0;
  double optimality_residual = 0.0;
  bool converged = false;
  /// Objective before each update, then the final objective.
  std::vector<double> objective_trace;
};

struct SolverOptions {
  int max_iters = 2000;
  double tol = 1e-7;
  double rank_tol = kDefaultRankTol;
};

/// Optimal two-state discrimination: Pi_+ onto the nonnegative eigenspace of
/// p1 rho1 - p2 rho2 (zero modes go to outcome 1), objective
/// (1 + ||p1 rho1 - p2 rho2||_1) / 2.
SolverResult helstrom_two_state(double p1, const HermitianOperator& rho1, double p2, const HermitianOperator& rho2,
                                double rank_tol = kDefaultRankTol);

/// W_j = sum_i S_ij mu_i rho_i, the operator paired with outcome j.
std::vector<HermitianOperator> payoff_operators(const Ensemble& e, const ScoreMatrix& s);

/// max_j ||(Y - W_j)_-|| with Y = sum_j m_j W_j symmetrized. Zero exactly
/// when the POVM satisfies the optimality conditions; Tr[Y] plus residual
/// times d bounds the optimum from above.
double optimality_residual(const std::vector<HermitianOperator>& payoff, const Povm& p);

/// Ascends sum_j Tr[W_j m_j] over POVMs with one outcome per point by the
/// iteration m_j <- R^{-1} W_j m_j W_j R^{-1}, R = (sum_j W_j m_j W_j)^{1/2},
/// starting from the PGM.
SolverResult maximize_success(const Ensemble& e, const ScoreMatrix& s, const SolverOptions& options = {});

/// k random PSD elements summing to I: m_j = T^{-1/2} A_j T^{-1/2} with A_j
/// complex Wishart of the given rank (0 means full rank) and T = sum_j A_j.
Povm random_povm(Eigen::Index d, std::size_t k, std::uint64_t seed, Eigen::Index element_rank = 0);

struct Candidate {
  std::string kind;
  Povm povm;
};

struct CandidateSlack {
  std::string kind;
  double gain;
  double slack;  // sqrt(G_pgm) - gain
};

struct BkCertificate {
  double g_pgm = 0.0;
  double sqrt_g_pgm = 0.0;
  std::vector<CandidateSlack> candidates;
  double best_gain = 0.0;
  std::string best_kind;
  double pgm_slack = 0.0;  // best_gain - g_pgm
  double min_slack = 0.0;  // over all slack values above
  bool pass = false;       // no slack below -1e-8
};

inline constexpr double kBkSlackTol = 1e-8;

/// Checks G(candidate) <= sqrt(G_pgm) for every candidate and
/// G_pgm <= max G(candidate).
BkCertificate bk_certificate(const Ensemble& e, const ScoreMatrix& s, const GainMseReport& pgm,
                             const std::vector<Candidate>& candidates);

}  // namespace gpgm
