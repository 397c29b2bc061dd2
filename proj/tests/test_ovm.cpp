#include "gpgm/ovm.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "gpgm/errors.hpp"
#include "test_helpers.hpp"

namespace gpgm {
namespace {

using namespace gpgm::testing;

OperatorValuedMeasure random_measure(Eigen::Index d, std::size_t cells, Rng& rng) {
  OperatorValuedMeasure l;
  l.cells = singleton_partition(cells);
  std::uniform_real_distribution<double> scale(0.1, 3.0);
  for (std::size_t c = 0; c < cells; ++c) l.values.push_back(random_wishart(d, 1 + static_cast<Eigen::Index>(c) % d, rng) * scale(rng));
  return l;
}

std::vector<double> random_f(std::size_t n, double bound, Rng& rng) {
  std::uniform_real_distribution<double> u(-bound, bound);
  std::vector<double> f(n);
  for (auto& v : f) v = u(rng);
  return f;
}

TEST(IntegrateScalar, Examples) {
  const auto a = diag({1.0, 2.0});
  const auto b = ket_plus();
  OperatorValuedMeasure l{singleton_partition(2), {a, b}};
  EXPECT_MATRIX_NEAR(integrate_scalar({1.0, 1.0}, l).matrix(), l.total().matrix(), 1e-15);
  EXPECT_MATRIX_NEAR(integrate_scalar({0.0, 0.0}, l).matrix(), CMatrix::Zero(2, 2), 0.0);
  EXPECT_MATRIX_NEAR(integrate_scalar({2.0, -1.0}, l).matrix(), (2.0 * a - b).matrix(), 1e-15);
  EXPECT_THROW(integrate_scalar({1.0}, l), PreconditionError);
}

TEST(IntegrateScalar, LinearityAndPositivity) {
  Rng rng(41);
  for (int k = 0; k < 30; ++k) {
    auto l = random_measure(2 + k % 4, 2 + k % 5, rng);
    auto f = random_f(l.size(), 2.0, rng), g = random_f(l.size(), 2.0, rng);
    std::vector<double> h(l.size());
    for (std::size_t c = 0; c < h.size(); ++c) h[c] = 0.7 * f[c] - 1.3 * g[c];
    EXPECT_MATRIX_NEAR(integrate_scalar(h, l).matrix(),
                       (0.7 * integrate_scalar(f, l) - 1.3 * integrate_scalar(g, l)).matrix(), 1e-12);
    for (auto& v : f) v = std::abs(v);
    EXPECT_GE(min_eigenvalue(integrate_scalar(f, l)), -1e-9);
  }
}

TEST(Semivariation, Examples) {
  EXPECT_DOUBLE_EQ(semivariation({whole_partition(1), {HermitianOperator::identity(3)}}), 1.0);
  auto half = HermitianOperator::identity(2) * 0.5;
  EXPECT_DOUBLE_EQ(semivariation({singleton_partition(2), {half, half}}), 1.0);

  Rng rng(42);
  auto l = random_measure(4, 5, rng);
  const double sv = semivariation(l);
  for (int k = 0; k < 200; ++k) EXPECT_LE(op_norm(integrate_scalar(random_f(5, 1.0, rng), l)), sv + 1e-10);
}

TEST(PairingIdentities, Examples) {
  Rng rng(43);
  auto l = random_measure(3, 4, rng);
  auto t = trace_pairing_identity({1, 1, 1, 1}, l);
  EXPECT_NEAR(t.lhs, l.total().trace(), 1e-12);
  EXPECT_TRUE(t.pass);
  t = trace_pairing_identity({0, 0, 0, 0}, l);
  EXPECT_EQ(t.lhs, 0.0);
  EXPECT_EQ(t.rhs, 0.0);

  auto h = hs_pairing_identity({1, 1, 1, 1}, {1, 1, 1, 1}, l);
  EXPECT_NEAR(h.lhs, hs_inner(l.total(), l.total()), 1e-10);
  EXPECT_TRUE(h.pass);
  h = hs_pairing_identity({1, 2, 3, 4}, {0, 0, 0, 0}, l);
  EXPECT_EQ(h.lhs, 0.0);
  EXPECT_EQ(h.rhs, 0.0);
}

TEST(PairingIdentities, RandomTriples) {
  Rng rng(44);
  for (Eigen::Index d : {2, 3, 4, 6}) {
    for (int k = 0; k < 100; ++k) {
      auto l = random_measure(d, 1 + k % 7, rng);
      auto f = random_f(l.size(), 5.0, rng), g = random_f(l.size(), 5.0, rng);
      EXPECT_TRUE(trace_pairing_identity(f, l).pass);
      EXPECT_TRUE(hs_pairing_identity(f, g, l).pass);
    }
  }
}

TEST(CompressedMeasure, IdentitiesAndDominance) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto e = random_ensemble(2 + seed % 5, 2 + seed % 6, 1, 3000 + seed, seed % 2 ? StateKind::pure : StateKind::mixed,
                             seed % 4 == 0 ? 1 : 0);
    auto p = build_gpgm(e, singleton_partition(e.size()));
    const auto rho = average_state(e);
    const auto quarter_root = psd_power(rho, 0.25);
    const auto half_root = psd_sqrt(rho);
    auto q = compressed_measure(e, p, CompressionPower::quarter);
    auto h = compressed_measure(e, p, CompressionPower::half);
    EXPECT_MATRIX_NEAR(compressed_measure(e, build_gpgm(e, whole_partition(e.size())), CompressionPower::half)
                           .values[0]
                           .matrix(),
                       rho.matrix(), 1e-8);
    for (std::size_t c = 0; c < e.size(); ++c) {
      const auto rho_e = partial_state(e, p.cells[c]);
      EXPECT_MATRIX_NEAR(h.values[c].matrix(), rho_e.matrix(), 1e-8);
      EXPECT_MATRIX_NEAR(sandwich(quarter_root, q.values[c]).matrix(), rho_e.matrix(), 1e-8);
      EXPECT_GE(min_eigenvalue(half_root - q.values[c]), -1e-9);
      EXPECT_GE(min_eigenvalue(half_root + q.values[c]), -1e-9);
      EXPECT_LE(hs_norm(q.values[c]), hs_norm(half_root) + 1e-9);
    }
  }
}

}  // namespace
}  // namespace gpgm
