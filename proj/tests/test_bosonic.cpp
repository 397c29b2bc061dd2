#include "gpgm/bosonic.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "gpgm/errors.hpp"
#include "test_helpers.hpp"

namespace gpgm {
namespace {

RVector xy(double a, double b) {
  RVector v(2);
  v << a, b;
  return v;
}

double mean_photons(const HermitianOperator& rho) {
  double n = 0.0;
  for (Eigen::Index k = 0; k < rho.dim(); ++k) n += static_cast<double>(k) * rho(k, k).real();
  return n;
}

TEST(Bosonic, ThermalAndVacuum) {
  auto vac = vacuum_state(10);
  EXPECT_DOUBLE_EQ(vac(0, 0).real(), 1.0);
  EXPECT_DOUBLE_EQ(vac.trace(), 1.0);
  auto th = thermal_state(80, 0.5);
  EXPECT_NEAR(th.trace(), 1.0, 1e-12);
  EXPECT_NEAR(mean_photons(th), 0.5, 1e-10);
  // Geometric ratio nbar / (1 + nbar).
  EXPECT_NEAR(th(1, 1).real() / th(0, 0).real(), 1.0 / 3.0, 1e-12);
}

TEST(Bosonic, ZeroDisplacementIsIdentity) {
  auto base = thermal_state(20, 0.3);
  auto ds = displaced_state(xy(0.0, 0.0), base);
  EXPECT_MATRIX_NEAR(ds.state.matrix(), base.matrix(), 1e-12);
  EXPECT_LE(ds.truncation_loss, 1e-12);
}

TEST(Bosonic, CoherentStateMeanPhotonNumber) {
  auto vac = vacuum_state(30);
  for (auto x : {xy(1.0, 0.0), xy(0.0, 2.0), xy(1.2, -1.6), xy(-0.5, 0.3)}) {
    auto ds = displaced_state(x, vac);
    EXPECT_NEAR(mean_photons(ds.state), x.squaredNorm() / 2.0, 1e-4);
  }
}

TEST(Bosonic, VacuumOverlap) {
  for (auto x : {xy(2.0, 0.0), xy(0.0, -2.0), xy(1.2, 1.6), xy(0.7, 0.1), xy(std::sqrt(2.0), std::sqrt(2.0))}) {
    const CMatrix d = displacement_operator(x, 30);
    EXPECT_NEAR(std::abs(d(0, 0)), std::exp(-x.squaredNorm() / 4.0), 1e-6);
    EXPECT_NEAR(d(0, 0).imag(), 0.0, 1e-12);
  }
}

TEST(Bosonic, CoherentAmplitudesMatchPoissonConvention) {
  // <n|D(x)|0> = e^{-|alpha|^2/2} alpha^n / sqrt(n!), alpha = (x1 + i x2)/sqrt 2.
  const auto x = xy(0.8, -0.6);
  const Complex alpha(x(0) / std::sqrt(2.0), x(1) / std::sqrt(2.0));
  const CMatrix d = displacement_operator(x, 30);
  for (int n = 0; n < 12; ++n) {
    const Complex expected = std::exp(-std::norm(alpha) / 2.0) * std::pow(alpha, n) / std::sqrt(std::tgamma(n + 1.0));
    EXPECT_LE(std::abs(d(n, 0) - expected), 1e-9) << n;
  }
}

TEST(Bosonic, TruncationLossDecreasesWithCutoff) {
  const auto x = xy(3.0, 2.0);
  double prev = 2.0;
  for (Eigen::Index cutoff : {10, 20, 30}) {
    const double loss = displaced_state(x, vacuum_state(cutoff)).truncation_loss;
    EXPECT_LT(loss, prev);
    prev = loss;
  }
}

TEST(Bosonic, EnsembleTruncationError) {
  auto vac = vacuum_state(10);
  try {
    bosonic_displaced_ensemble(vac, {xy(0.0, 0.0), xy(4.0, 0.0), xy(0.5, 0.0)}, {0.3, 0.3, 0.4});
    FAIL();
  } catch (const TruncationError& err) {
    EXPECT_EQ(err.worst_index(), 1u);
    EXPECT_GT(err.loss(), 1e-6);
  }
  EXPECT_THROW(bosonic_displaced_ensemble(vac, {xy(0.0, 0.0)}, {1.0}, 1e-6, 2), PreconditionError);
}

TEST(Bosonic, EnsembleStatesAreDensityOperators) {
  auto e = bosonic_displaced_ensemble(thermal_state(30, 0.2), {xy(0, 0), xy(1, 0), xy(0, 1), xy(-1, -1)},
                                      {0.25, 0.25, 0.25, 0.25});
  EXPECT_EQ(e.dim(), 30);
  for (const auto& s : e.states()) {
    EXPECT_NEAR(s.trace(), 1.0, 1e-12);
    EXPECT_GE(min_eigenvalue(s), -1e-10);
  }
}

TEST(Bosonic, OneDimensionalFamilyUsesRealAxis) {
  auto fam = displaced_family(vacuum_state(30), 1);
  RVector x(1);
  x << 1.5;
  EXPECT_MATRIX_NEAR(fam.state_at(x).matrix(), displaced_state(xy(1.5, 0.0), vacuum_state(30)).state.matrix(), 1e-14);
}

}  // namespace
}  // namespace gpgm
