// Acceptance gate: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "gpgm/bosonic.hpp"
#include "gpgm/ovm.hpp"
#include "gpgm/sweep.hpp"

using namespace gpgm;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Outcome {
  bool pass;
  std::string detail;
};

double max_abs(const CMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// Criteria 1 and 2 share this corpus; every third ensemble lives in a proper subspace.
std::vector<Ensemble> reduction_corpus() {
  std::vector<Ensemble> out;
  for (std::uint64_t k = 0; k < 100; ++k) {
    Rng rng(derive_seed(101, {k}));
    const std::size_t d = std::uniform_int_distribution<std::size_t>(2, 6)(rng);
    const std::size_t r = std::uniform_int_distribution<std::size_t>(2, 8)(rng);
    const std::size_t sub = k % 3 == 0 ? std::uniform_int_distribution<std::size_t>(1, d - 1)(rng) : 0;
    const auto kind = k % 2 ? StateKind::pure : StateKind::mixed;
    out.push_back(random_ensemble(d, r, 1 + k % 2, derive_seed(101, {k, 1}), kind, sub));
  }
  return out;
}

Outcome check_pgm_reduction() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (const auto& e : reduction_corpus()) {
    const auto g = build_gpgm(e, singleton_partition(e.size()));
    const auto f = build_finite_pgm(e);
    for (std::size_t i = 0; i < e.size(); ++i)
      worst = std::max(worst, max_abs(g.elements[i].matrix() - f.elements[i].matrix()));
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-8 && secs < 10.0,
          "100 ensembles, max element diff " + sci(worst) + " (tol 1e-8), " + sci(secs) + " s (limit 10 s)"};
}

Outcome check_povm_validity() {
  double worst_eig = 0.0, worst_res = 0.0;
  std::size_t povms = 0, deficient = 0;
  for (const auto& e : reduction_corpus()) {
    if (kernel_projector(average_state(e)).trace() > 0.5) ++deficient;
    const std::size_t r = e.size();
    Partition halves{{}, {}};
    for (std::size_t i = 0; i < r; ++i) halves[i % 2].indices.push_back(i);
    for (const auto& cells : {singleton_partition(r), halves, whole_partition(r)}) {
      const auto rep = validate_povm(build_gpgm(e, cells), 1e-9);
      for (double m : rep.min_eigenvalues) worst_eig = std::min(worst_eig, m);
      worst_res = std::max(worst_res, rep.completeness_residual);
      ++povms;
    }
  }
  return {worst_eig >= -1e-9 && worst_res <= 1e-9 && deficient > 0,
          std::to_string(povms) + " GPGMs (" + std::to_string(deficient) + " rank-deficient ensembles), min eigenvalue " +
              sci(worst_eig) + " (tol -1e-9), completeness residual " + sci(worst_res) + " (tol 1e-9)"};
}

Outcome check_two_state_anchor() {
  CVector k0(2), kp(2);
  k0 << 1.0, 0.0;
  kp << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const auto rho0 = HermitianOperator::outer(k0), rhop = HermitianOperator::outer(kp);
  Ensemble e("anchor", 1, {RVector::Constant(1, 0.0), RVector::Constant(1, 1.0)}, {0.5, 0.5}, {rho0, rhop});
  const double p_h = helstrom_two_state(0.5, rho0, 0.5, rhop).objective;
  const double p_pgm = expected_gain(e, delta_score(2), build_finite_pgm(e)).expected_gain;
  const double closed = 0.5 * (1.0 + 1.0 / std::sqrt(2.0));
  const bool ok = std::abs(p_h - closed) <= 1e-12 && p_h <= std::sqrt(p_pgm) + 1e-10 && p_pgm <= p_h + 1e-10;
  std::ostringstream os;
  os.precision(9);
  os << "P_helstrom " << p_h << " (closed form " << closed << "), P_pgm " << p_pgm << ", sqrt(P_pgm) "
     << std::sqrt(p_pgm);
  return {ok, os.str()};
}

Outcome check_generalized_bk() {
  const auto t0 = Clock::now();
  SweepSummary total;
  total.min_slack = 1e300;
  auto run = [&](const io::Json& instances, std::size_t count, std::uint64_t seed) {
    SweepConfig c;
    c.instances = instances;
    c.num_instances = count;
    c.scores = {{{"kind", "delta"}}, {{"kind", "constant"}, {"a", 0.6}}, {{"kind", "gaussian"}, {"Sigma", 1.0}}};
    c.random_candidates = 5;
    c.seed = seed;
    std::ostringstream sink;
    const auto s = run_bk_sweep(c, sink);
    total.instances += s.instances;
    total.checks += s.checks;
    total.violations += s.violations;
    total.min_slack = std::min(total.min_slack, s.min_slack);
  };
  io::Json general = {{"generator", "random"}, {"d", {{"range", {2, 6}}}}, {"r", {{"range", {2, 8}}}}, {"N", 2}};
  general["kind"] = "mixed";
  run(general, 16, 404);
  general["kind"] = "pure";
  run(general, 8, 405);
  io::Json pair = {{"generator", "random"}, {"d", {{"range", {2, 5}}}}, {"r", 2}, {"N", 2}, {"kind", "mixed"}};
  run(pair, 8, 406);
  const double secs = seconds_since(t0);
  return {total.violations == 0 && total.checks >= 500 && secs < 300.0,
          std::to_string(total.checks) + " (ensemble, score, candidate) triples on " + std::to_string(total.instances) +
              " ensembles, " + std::to_string(total.violations) + " violations, min slack " + sci(total.min_slack) +
              " (tol -1e-8), " + sci(secs) + " s (limit 300 s)"};
}

Outcome check_solver_oracle() {
  double worst = 0.0, worst_step = 0.0;
  std::size_t steps = 0;
  for (std::uint64_t k = 0; k < 50; ++k) {
    Rng rng(derive_seed(505, {k}));
    const std::size_t d = std::uniform_int_distribution<std::size_t>(2, 4)(rng);
    const auto e = random_ensemble(d, 2, 1, derive_seed(505, {k, 1}), k % 2 ? StateKind::pure : StateKind::mixed);
    const auto res = maximize_success(e, delta_score(2));
    const auto h = helstrom_two_state(e.weight(0), e.state(0), e.weight(1), e.state(1));
    worst = std::max(worst, std::abs(res.objective - h.objective));
    for (std::size_t t = 1; t < res.objective_trace.size(); ++t, ++steps)
      worst_step = std::min(worst_step, res.objective_trace[t] - res.objective_trace[t - 1]);
  }
  return {worst <= 1e-6 && worst_step >= -1e-12,
          "50 two-state instances, max |solver - helstrom| " + sci(worst) + " (tol 1e-6), " + std::to_string(steps) +
              " iterations, worst step " + sci(worst_step) + " (tol -1e-12)"};
}

RVector grid_point(double a, double b) {
  RVector x(2);
  x << a, b;
  return x;
}

// Bounded-support families: random ensembles with points in [-1/2, 1/2]^N and
// bosonic grids on [-1, 1]^N.
std::vector<Ensemble> mse_limit_instances() {
  std::vector<Ensemble> out;
  for (std::uint64_t k = 0; k < 10; ++k) {
    Rng rng(derive_seed(606, {k}));
    const std::size_t n = 1 + k % 2;
    const std::size_t d = std::uniform_int_distribution<std::size_t>(2, 5)(rng);
    const std::size_t r = std::uniform_int_distribution<std::size_t>(2, 8)(rng);
    const auto base = random_ensemble(d, r, n, derive_seed(606, {k, 1}), k % 3 ? StateKind::mixed : StateKind::pure);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    std::vector<RVector> pts;
    for (std::size_t i = 0; i < r; ++i) {
      RVector x(static_cast<Eigen::Index>(n));
      for (Eigen::Index c = 0; c < x.size(); ++c) x(c) = u(rng);
      pts.push_back(x);
    }
    out.emplace_back("bounded random", n, pts, base.weights(), base.states());
  }
  for (std::size_t k = 0; k < 10; ++k) {
    const std::size_t n = 1 + k % 2;
    const auto base = k % 4 < 2 ? vacuum_state(30) : thermal_state(30, 0.1 * static_cast<double>(k));
    const std::size_t per_axis = n == 1 ? 3 + k % 3 : 3;
    out.push_back(discretize_gaussian_prior(n, 0.5 + 0.25 * static_cast<double>(k % 3), 1.0, per_axis,
                                            displaced_family(base, n)));
  }
  return out;
}

Outcome check_mse_limit() {
  double worst_slack = 1e300, worst_gap = 0.0;
  std::size_t points = 0;
  const auto instances = mse_limit_instances();
  for (const auto& e : instances) {
    const auto p = build_gpgm(e, singleton_partition(e.size()));
    const double m = mse(e, p);
    const auto curve = mse_via_gain_limit(e, p);
    for (const auto& [t, v] : curve) {
      worst_slack = std::min(worst_slack, m - v);
      ++points;
    }
    worst_gap = std::max(worst_gap, std::abs(curve.back().second - m) / (1.0 + m));
  }
  return {worst_slack >= -1e-9 && worst_gap <= 1e-3 && instances.size() >= 20,
          std::to_string(instances.size()) + " instances (N in {1,2}), " + std::to_string(points) +
              " curve points, min(MSE - curve) " + sci(worst_slack) + " (tol -1e-9), max gap at t=1e-3 " +
              sci(worst_gap) + " x (1+MSE) (tol 1e-3)"};
}

std::vector<Ensemble> mse_bound_instances() {
  std::vector<Ensemble> out;
  const std::vector<RVector> cross{grid_point(0, 0), grid_point(1, 0), grid_point(-1, 0), grid_point(0, 1),
                                   grid_point(0, -1)};
  std::vector<RVector> square;
  for (double a : {-1.0, 0.0, 1.0})
    for (double b : {-1.0, 0.0, 1.0}) square.push_back(grid_point(a, b));
  for (std::size_t k = 0; k < 10; ++k) {
    const auto base = k % 2 ? thermal_state(30, 0.05 * static_cast<double>(k)) : vacuum_state(30);
    const auto& pts = k < 5 ? cross : square;
    std::vector<double> w(pts.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = 1.0 + 0.5 * std::cos(static_cast<double>(i + k));
    double z = 0.0;
    for (double v : w) z += v;
    for (auto& v : w) v /= z;
    w.back() = 1.0;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) w.back() -= w[i];
    out.push_back(bosonic_displaced_ensemble(base, pts, w));
  }
  for (std::uint64_t k = 0; k < 12; ++k) {
    Rng rng(derive_seed(707, {k}));
    const std::size_t d = std::uniform_int_distribution<std::size_t>(2, 6)(rng);
    const std::size_t r = std::uniform_int_distribution<std::size_t>(2, 8)(rng);
    out.push_back(random_ensemble(d, r, 1 + k % 2, derive_seed(707, {k, 1}), k % 2 ? StateKind::pure : StateKind::mixed,
                                  k % 4 == 0 ? 1 : 0));
  }
  return out;
}

struct MseBoundResults {
  std::size_t ensembles = 0, bosonic = 0, candidates = 0;
  double worst_factor2 = 1e300;  // 2 mse_candidate - mse_pgm
  double worst_4e = 1e300;       // 4 E2 - mse_pgm
  double worst_exchange = 0.0;
};

const MseBoundResults& mse_bound_results() {
  static const MseBoundResults res = [] {
    MseBoundResults r;
    for (const auto& e : mse_bound_instances()) {
      ++r.ensembles;
      if (e.label().find("bosonic") != std::string::npos || e.dim() == 30) ++r.bosonic;
      const auto pgm = build_gpgm(e, singleton_partition(e.size()));
      const double m_pgm = mse(e, pgm);
      r.worst_4e = std::min(r.worst_4e, 4.0 * second_moment(e) - m_pgm);
      r.worst_exchange = std::max(r.worst_exchange, std::abs(estimate_second_moment(e, pgm) - second_moment(e)));

      std::vector<Povm> cands;
      cands.push_back(maximize_success(e, score_matrix(precision_gaussian_score(0.1, e.param_dim()), e)).povm);
      for (std::uint64_t k = 0; k < 10; ++k)
        cands.push_back(random_povm(e.dim(), e.size(), derive_seed(808, {r.ensembles, k}),
                                    k % 2 && e.size() >= static_cast<std::size_t>(e.dim()) ? 1 : 0));
      // Convex mixtures of the PGM with a random POVM sit close to the PGM.
      for (double eps : {0.05, 0.2, 0.5}) {
        const auto q = random_povm(e.dim(), e.size(), derive_seed(809, {r.ensembles}));
        Povm mix = pgm;
        for (std::size_t j = 0; j < mix.size(); ++j) mix.elements[j] = (1.0 - eps) * pgm.elements[j] + eps * q.elements[j];
        cands.push_back(mix);
      }
      for (const auto& c : cands) {
        ++r.candidates;
        r.worst_factor2 = std::min(r.worst_factor2, 2.0 * mse(e, c) - m_pgm);
      }
    }
    return r;
  }();
  return res;
}

Outcome check_factor_two() {
  const auto& r = mse_bound_results();
  return {r.worst_factor2 >= -1e-8 && r.candidates >= 200 && r.ensembles >= 20 && r.bosonic > 0,
          std::to_string(r.candidates) + " candidates on " + std::to_string(r.ensembles) + " ensembles (" +
              std::to_string(r.bosonic) + " bosonic, cutoff 30), min(2 MSE_cand - MSE_pgm) " + sci(r.worst_factor2) +
              " (tol -1e-8)"};
}

Outcome check_second_moment() {
  const auto& r = mse_bound_results();
  return {r.worst_4e >= -1e-8 && r.worst_exchange <= 1e-8,
          "min(4 E2 - MSE_pgm) " + sci(r.worst_4e) + " (tol -1e-8), max exchange-identity error " +
              sci(r.worst_exchange) + " (tol 1e-8)"};
}

Outcome check_operator_measures() {
  std::size_t triples = 0, fails = 0, pairs = 0, cells = 0;
  double worst_dom = 0.0, worst_sandwich = 0.0;
  for (Eigen::Index d : {2, 3, 4, 6}) {
    Rng rng(derive_seed(909, {static_cast<std::uint64_t>(d)}));
    std::uniform_real_distribution<double> u(-3.0, 3.0), scale(0.1, 2.0);
    for (int k = 0; k < 100; ++k, ++triples) {
      OperatorValuedMeasure l;
      const std::size_t n = 1 + static_cast<std::size_t>(k % 6);
      l.cells = singleton_partition(n);
      std::vector<double> f(n), g(n);
      for (std::size_t c = 0; c < n; ++c) {
        l.values.push_back(random_wishart(d, 1 + static_cast<Eigen::Index>(c) % d, rng) * scale(rng));
        f[c] = u(rng);
        g[c] = u(rng);
      }
      if (!trace_pairing_identity(f, l).pass || !hs_pairing_identity(f, g, l).pass) ++fails;
    }
    for (int k = 0; k < 25; ++k, ++pairs) {
      // -zeta <= varrho <= zeta by construction: zeta -+ varrho are the PSD parts.
      const auto phi = random_wishart(d, 1 + k % d, rng), psi = random_wishart(d, 1 + (k + 1) % d, rng);
      const auto zeta = 0.5 * (phi + psi), varrho = 0.5 * (phi - psi);
      if (min_eigenvalue(zeta - varrho) < -1e-12 || min_eigenvalue(zeta + varrho) < -1e-12) ++fails;
      worst_dom = std::max(worst_dom, hs_norm(varrho) - hs_norm(zeta));
    }
  }
  for (const auto& e : reduction_corpus()) {
    const std::size_t r = e.size();
    Partition halves{{}, {}};
    for (std::size_t i = 0; i < r; ++i) halves[i % 2].indices.push_back(i);
    const auto root = psd_sqrt(average_state(e));
    for (const auto& part : {singleton_partition(r), halves}) {
      const auto l = compressed_measure(e, build_gpgm(e, part), CompressionPower::quarter);
      for (const auto& v : l.values) {
        ++cells;
        worst_sandwich = std::min({worst_sandwich, min_eigenvalue(root - v), min_eigenvalue(root + v)});
      }
    }
  }
  return {fails == 0 && worst_dom <= 1e-9 && worst_sandwich >= -1e-9,
          std::to_string(triples) + " (f, g, l) triples over d in {2,3,4,6}, " + std::to_string(fails) +
              " identity failures; " + std::to_string(pairs) + " dominance pairs, max(|varrho|_2 - |zeta|_2) " +
              sci(worst_dom) + " (tol 1e-9); " + std::to_string(cells) + " GPGM cells, min eigenvalue of rho^1/2 -+ l(E) " +
              sci(worst_sandwich) + " (tol -1e-9)"};
}

Outcome check_convolution() {
  double worst = 0.0;
  std::size_t checks = 0;
  auto pairs_for = [](std::size_t n, Rng& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<std::pair<RVector, RVector>> out;
    for (int k = 0; k < 8; ++k) {
      RVector x(static_cast<Eigen::Index>(n)), y(static_cast<Eigen::Index>(n));
      for (Eigen::Index c = 0; c < x.size(); ++c) {
        x(c) = g(rng);
        y(c) = g(rng);
      }
      out.push_back({x, y});
    }
    return out;
  };
  Rng rng(1010);
  bool all = true;
  for (double s : {0.25, 1.0, 4.0}) {
    const auto rep = verify_convolution(gaussian_score(RMatrix::Constant(1, 1, s)), pairs_for(1, rng));
    worst = std::max(worst, rep.max_deviation);
    all = all && rep.pass;
    ++checks;
  }
  std::normal_distribution<double> g(0.0, 1.0);
  for (int k = 0; k < 3; ++k) {
    RMatrix a(2, 2);
    a << g(rng), g(rng), g(rng), g(rng);
    const RMatrix sigma = a * a.transpose() + 0.2 * RMatrix::Identity(2, 2);
    const auto rep = verify_convolution(gaussian_score(sigma), pairs_for(2, rng), {400, 0.0});
    worst = std::max(worst, rep.max_deviation);
    all = all && rep.pass;
    ++checks;
  }
  double worst_eig = 1e300;
  std::size_t grids = 0;
  for (int k = 0; k < 40; ++k, ++grids) {
    const std::size_t n = 1 + k % 2, r = 4 + static_cast<std::size_t>(k) % 61;
    const auto e = random_ensemble(2, r, n, derive_seed(1011, {static_cast<std::uint64_t>(k)}), StateKind::pure);
    const double s = std::exp(std::uniform_real_distribution<double>(-2.0, 2.0)(rng));
    const auto m = score_matrix(gaussian_score(RMatrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) * s), e);
    worst_eig = std::min(worst_eig, m.min_eigenvalue() / static_cast<double>(r));
  }
  return {all && worst <= 1e-6 && worst_eig >= -1e-9,
          std::to_string(checks) + " Sigma values, max deviation " + sci(worst) + " (tol 1e-6); " + std::to_string(grids) +
              " random grids, min eigenvalue / r " + sci(worst_eig) + " (tol -1e-9)"};
}

Outcome check_bosonic_anchor() {
  double worst = 0.0;
  std::size_t samples = 0;
  for (double radius : {0.0, 0.25, 0.5, 1.0, 1.5, 1.75, 2.0})
    for (int a = 0; a < 8; ++a, ++samples) {
      const double th = 2.0 * 3.14159265358979323846 * a / 8.0 + 0.1;
      const RVector x = grid_point(radius * std::cos(th), radius * std::sin(th));
      const Complex overlap = displacement_operator(x, 30)(0, 0);
      worst = std::max(worst, std::abs(overlap - std::exp(-x.squaredNorm() / 4.0)));
    }
  return {worst <= 1e-6, std::to_string(samples) + " points with |x| <= 2 at cutoff 30, max |<0|D(x)|0> - exp(-|x|^2/4)| " +
                             sci(worst) + " (tol 1e-6)"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"pgm-reduction", check_pgm_reduction},
      {"povm-validity", check_povm_validity},
      {"barnum-knill-two-state", check_two_state_anchor},
      {"generalized-barnum-knill", check_generalized_bk},
      {"solver-oracle", check_solver_oracle},
      {"mse-gain-limit", check_mse_limit},
      {"mse-factor-two", check_factor_two},
      {"second-moment-bound", check_second_moment},
      {"operator-measure-identities", check_operator_measures},
      {"gaussian-convolution", check_convolution},
      {"coherent-overlap", check_bosonic_anchor},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& err) {
      o = {false, std::string("exception: ") + err.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS " : "FAIL ") << k + 1 << " " << criteria[k].first << ": " << o.detail << std::endl;
  }
  std::cout << (failed ? "FAILED " : "ALL PASSED ") << criteria.size() - static_cast<std::size_t>(failed) << "/"
            << criteria.size() << std::endl;
  return failed ? 1 : 0;
}
