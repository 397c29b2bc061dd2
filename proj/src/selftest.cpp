#include "gpgm/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include "gpgm/ovm.hpp"
#include "gpgm/score.hpp"

namespace gpgm {

namespace {

struct Tally {
  std::size_t checks = 0;
  std::string failure;

  void check(bool ok, const std::string& what) {
    ++checks;
    if (!ok && failure.empty()) failure = what;
  }
};

SuiteResult timed(const std::string& name, const std::function<void(Tally&)>& body) {
  auto start = std::chrono::steady_clock::now();
  Tally t;
  SuiteResult r;
  r.name = name;
  try {
    body(t);
  } catch (const std::exception& err) {
    if (t.failure.empty()) t.failure = std::string("exception: ") + err.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.checks = t.checks;
  r.pass = t.failure.empty();
  r.detail = r.pass ? std::to_string(t.checks) + " checks" : t.failure;
  return r;
}

OperatorValuedMeasure random_measure(Eigen::Index d, std::size_t cells, Rng& rng) {
  OperatorValuedMeasure l;
  l.cells = singleton_partition(cells);
  std::uniform_real_distribution<double> scale(0.1, 2.0);
  for (std::size_t c = 0; c < cells; ++c) l.values.push_back(scale(rng) * random_wishart(d, 1 + c % static_cast<std::size_t>(d), rng));
  return l;
}

std::vector<double> random_function(std::size_t n, Rng& rng) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<double> f(n);
  for (auto& v : f) v = u(rng);
  return f;
}

void ovm_identities(Tally& t) {
  Rng rng(derive_seed(20240601, {1}));
  for (Eigen::Index d : {2, 3, 4, 6}) {
    for (int k = 0; k < 100; ++k) {
      auto l = random_measure(d, 5, rng);
      auto f = random_function(l.size(), rng);
      auto g = random_function(l.size(), rng);
      std::ostringstream tag;
      tag << "d=" << d << " trial " << k;
      t.check(trace_pairing_identity(f, l).pass, "trace pairing identity failed, " + tag.str());
      t.check(hs_pairing_identity(f, g, l).pass, "HS pairing identity failed, " + tag.str());
      std::vector<double> unit(l.size());
      for (std::size_t c = 0; c < unit.size(); ++c) unit[c] = std::clamp(f[c] / 3.0, -1.0, 1.0);
      t.check(op_norm(integrate_scalar(unit, l)) <= semivariation(l) + 1e-10, "semivariation exceeded, " + tag.str());
      // -zeta <= varrho <= zeta implies ||varrho||_2 <= ||zeta||_2.
      auto phi = random_wishart(d, d, rng), psi = random_wishart(d, 1, rng);
      t.check(hs_norm(0.5 * (phi - psi)) <= hs_norm(0.5 * (phi + psi)) + 1e-10, "HS dominance failed, " + tag.str());
    }
  }
}

void convolution(Tally& t) {
  Rng rng(derive_seed(20240601, {2}));
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  auto pairs_for = [&](Eigen::Index n) {
    std::vector<std::pair<RVector, RVector>> pairs;
    for (int k = 0; k < 6; ++k) {
      RVector x(n), y(n);
      for (Eigen::Index a = 0; a < n; ++a) {
        x(a) = u(rng);
        y(a) = u(rng);
      }
      pairs.emplace_back(x, y);
    }
    return pairs;
  };
  for (double s : {0.25, 1.0, 4.0}) {
    auto rep = verify_convolution(gaussian_score(RMatrix::Constant(1, 1, s)), pairs_for(1));
    t.check(rep.pass, "1-D Gaussian convolution deviation " + std::to_string(rep.max_deviation));
  }
  for (int k = 0; k < 3; ++k) {
    std::normal_distribution<double> g(0.0, 1.0);
    RMatrix a(2, 2);
    a << g(rng), g(rng), g(rng), g(rng);
    RMatrix sigma = a * a.transpose() + 0.3 * RMatrix::Identity(2, 2);
    auto rep = verify_convolution(gaussian_score(sigma), pairs_for(2), {200, 0.0});
    t.check(rep.pass, "2-D Gaussian convolution deviation " + std::to_string(rep.max_deviation));
  }
  auto rep = verify_convolution(constant_score(0.25, 1), pairs_for(1));
  t.check(rep.max_deviation == 0.0, "constant score convolution is not exact");
}

void pgm_reduction(Tally& t) {
  for (std::uint64_t k = 0; k < 20; ++k) {
    const std::size_t d = 2 + k % 5, r = 2 + k % 7;
    auto e = random_ensemble(d, r, 1, derive_seed(20240601, {3, k}), k % 2 ? StateKind::pure : StateKind::mixed,
                             k % 3 == 0 ? d - 1 : 0);
    auto finite = build_finite_pgm(e);
    auto general = build_gpgm(e, singleton_partition(r));
    double worst = 0.0;
    for (std::size_t i = 0; i < r; ++i)
      worst = std::max(worst, (finite.elements[i].matrix() - general.elements[i].matrix()).cwiseAbs().maxCoeff());
    t.check(worst <= 1e-8, "singleton GPGM differs from PGM by " + std::to_string(worst) + " on " + e.label());
    t.check(validate_povm(general, 1e-9).pass(), "GPGM is not a valid POVM on " + e.label());
  }
}

}  // namespace

std::vector<SuiteResult> run_selftest() {
  return {timed("appendixA", ovm_identities), timed("convolution", convolution), timed("pgm-reduction", pgm_reduction)};
}

}  // namespace gpgm
