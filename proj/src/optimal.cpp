#include "gpgm/optimal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gpgm/errors.hpp"

namespace gpgm {

namespace {

double objective_of(const std::vector<HermitianOperator>& payoff, const std::vector<HermitianOperator>& m) {
  double f = 0.0;
  for (std::size_t j = 0; j < m.size(); ++j) f += hs_inner(payoff[j], m[j]);
  return f;
}

}  // namespace

std::vector<HermitianOperator> payoff_operators(const Ensemble& e, const ScoreMatrix& s) {
  if (s.size() != e.size()) throw PreconditionError("payoff_operators: score matrix size differs from ensemble size");
  std::vector<HermitianOperator> w;
  w.reserve(e.size());
  for (std::size_t j = 0; j < e.size(); ++j) {
    CMatrix acc = CMatrix::Zero(e.dim(), e.dim());
    for (std::size_t i = 0; i < e.size(); ++i)
      if (s(i, j) != 0.0) acc += (s(i, j) * e.weight(i)) * e.state(i).matrix();
    w.emplace_back(acc);
  }
  return w;
}

double optimality_residual(const std::vector<HermitianOperator>& payoff, const Povm& p) {
  if (payoff.size() != p.size()) throw PreconditionError("optimality_residual: one payoff operator per outcome required");
  CMatrix y = CMatrix::Zero(p.dim(), p.dim());
  for (std::size_t j = 0; j < p.size(); ++j) y += p.elements[j].matrix() * payoff[j].matrix();
  const HermitianOperator lagrange(y);
  double worst = 0.0;
  for (const auto& w : payoff) worst = std::max(worst, -min_eigenvalue(lagrange - w));
  return worst;
}

SolverResult helstrom_two_state(double p1, const HermitianOperator& rho1, double p2, const HermitianOperator& rho2,
                                double rank_tol) {
  if (std::abs(p1 + p2 - 1.0) > 1e-12 || p1 < 0.0 || p2 < 0.0)
    throw PreconditionError("helstrom_two_state: priors must be nonnegative and sum to 1");
  if (rho1.dim() != rho2.dim()) throw PreconditionError("helstrom_two_state: dimension mismatch");
  const HermitianOperator gamma = p1 * rho1 - p2 * rho2;
  const HermitianOperator plus = nonnegative_projector(gamma, rank_tol);
  SolverResult res;
  res.povm.cells = singleton_partition(2);
  res.povm.elements = {plus, HermitianOperator::identity(rho1.dim()) - plus};
  res.povm.label = "helstrom";
  res.objective = 0.5 * (1.0 + trace_norm(gamma));
  res.optimality_residual = optimality_residual({p1 * rho1, p2 * rho2}, res.povm);
  res.converged = true;
  res.objective_trace = {res.objective};
  return res;
}

SolverResult maximize_success(const Ensemble& e, const ScoreMatrix& s, const SolverOptions& options) {
  const auto payoff = payoff_operators(e, s);
  const std::size_t k = payoff.size();
  const auto d = e.dim();

  // Weights for directions the update map cannot reach (kernel of R^2).
  std::vector<double> kernel_share(k);
  double payoff_total = 0.0;
  for (const auto& w : payoff) payoff_total += w.trace();
  for (std::size_t j = 0; j < k; ++j)
    kernel_share[j] = payoff_total > 0.0 ? payoff[j].trace() / payoff_total : 1.0 / static_cast<double>(k);

  SolverResult res;
  res.povm = build_finite_pgm(e, options.rank_tol);
  res.povm.label = "fixed-point";
  for (int iter = 0;; ++iter) {
    res.objective = objective_of(payoff, res.povm.elements);
    res.objective_trace.push_back(res.objective);
    res.optimality_residual = optimality_residual(payoff, res.povm);
    res.iterations = iter;
    if (res.optimality_residual <= options.tol) {
      res.converged = true;
      break;
    }
    if (iter >= options.max_iters) break;

    std::vector<CMatrix> pushed(k);
    CMatrix r2 = CMatrix::Zero(d, d);
    for (std::size_t j = 0; j < k; ++j) {
      pushed[j] = payoff[j].matrix() * res.povm.elements[j].matrix() * payoff[j].matrix();
      r2 += pushed[j];
    }
    // R^2 is PSD by construction; one decomposition serves both (sqrt R^2)^+ and its kernel.
    const auto r2_eig = eigh_extended(HermitianOperator(r2));
    const double cut = rank_cutoff(r2_eig, options.rank_tol);
    const HermitianOperator r_inv = spectral_map(r2_eig, [cut](double q) { return q > cut ? 1.0 / std::sqrt(q) : 0.0; });
    const HermitianOperator ker = spectral_map(r2_eig, [cut](double q) { return q > cut ? 0.0 : 1.0; });
    for (std::size_t j = 0; j < k; ++j) {
      // The multiplicative update amplifies round-off negativity geometrically; clip it each step.
      const auto eig = eigh(sandwich(r_inv, HermitianOperator(pushed[j])));
      res.povm.elements[j] = spectral_map(eig, [](double q) { return std::max(q, 0.0); }) + kernel_share[j] * ker;
    }
  }
  return res;
}

Povm random_povm(Eigen::Index d, std::size_t k, std::uint64_t seed, Eigen::Index element_rank) {
  if (k < 1) throw PreconditionError("random_povm requires k >= 1");
  if (d < 1) throw PreconditionError("random_povm requires d >= 1");
  const Eigen::Index rank = element_rank > 0 ? std::min(element_rank, d) : d;
  for (std::uint64_t attempt = 0; attempt < 8; ++attempt) {
    Rng rng(attempt == 0 ? seed : derive_seed(seed, {attempt}));
    std::vector<HermitianOperator> a;
    HermitianOperator total = HermitianOperator::zero(d);
    for (std::size_t j = 0; j < k; ++j) {
      a.push_back(random_wishart(d, rank, rng));
      total += a.back();
    }
    auto eig = eigh(total);
    if (eig.values(0) <= kDefaultRankTol * std::max(1.0, eig.values(d - 1))) continue;
    const HermitianOperator t_inv_sqrt = spectral_map(eig, [](double q) { return 1.0 / std::sqrt(q); });
    Povm p;
    p.cells = singleton_partition(k);
    p.label = "random";
    for (const auto& aj : a) p.elements.push_back(sandwich(t_inv_sqrt, aj));
    return p;
  }
  std::ostringstream os;
  os << "random_povm: element sum stayed singular after 8 attempts (d = " << d << ", k = " << k << ", rank = " << rank
     << ")";
  throw Error(os.str());
}

BkCertificate bk_certificate(const Ensemble& e, const ScoreMatrix& s, const GainMseReport& pgm,
                             const std::vector<Candidate>& candidates) {
  BkCertificate cert;
  cert.g_pgm = pgm.expected_gain;
  cert.sqrt_g_pgm = std::sqrt(std::max(0.0, pgm.expected_gain));
  cert.best_gain = -std::numeric_limits<double>::infinity();
  cert.min_slack = std::numeric_limits<double>::infinity();
  for (const auto& c : candidates) {
    const double g = expected_gain(e, s, c.povm).expected_gain;
    const double slack = cert.sqrt_g_pgm - g;
    cert.candidates.push_back({c.kind, g, slack});
    cert.min_slack = std::min(cert.min_slack, slack);
    if (g > cert.best_gain) {
      cert.best_gain = g;
      cert.best_kind = c.kind;
    }
  }
  if (candidates.empty()) {
    cert.best_gain = cert.g_pgm;
    cert.best_kind = "none";
    cert.min_slack = cert.sqrt_g_pgm - cert.g_pgm;
  }
  cert.pgm_slack = cert.best_gain - cert.g_pgm;
  cert.min_slack = std::min(cert.min_slack, cert.pgm_slack);
  cert.pass = cert.min_slack >= -kBkSlackTol;
  return cert;
}

}  // namespace gpgm
