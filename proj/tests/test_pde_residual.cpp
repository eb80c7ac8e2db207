#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "tomodyn/pde_residual.hpp"

using namespace tomodyn;

namespace {

const DampingParams kPairs[] = {
    DampingParams({1, 0}, {0, 1}), DampingParams({1, 0}, {1, 0}), DampingParams({1, 0}, {0, 10}),
    DampingParams({1, 0}, {1, 2}), DampingParams({0, 0}, {0, 0}),
};

const CoherentAmplitude kAlpha(complex(0.7, -0.4));

}  // namespace

TEST(Lattice, ShapeAndExclusion) {
  const auto pts = probe_lattice();
  EXPECT_EQ(pts.size(), 600u);
  for (const auto& q : pts) EXPECT_FALSE(std::abs(q.mu) < 0.1 && std::abs(q.nu) < 0.1);
  EXPECT_THROW(probe_lattice(1), ValidationError);
}

TEST(Residual, ClosedFormSolvesKineticEquation) {
  for (const auto& p : kPairs) {
    const ResidualSweep sw = residual_sweep(kAlpha, p, probe_lattice());
    EXPECT_LT(sw.max_residual, 1e-8);
    EXPECT_EQ(sw.residuals.size(), 600u);
  }
}

TEST(Residual, DetectsWrongTimeDerivative) {
  const DampingParams p({1, 0}, {1, 2});
  const double t = 0.7;
  const GaussianTomogram g = evolve_coherent(kAlpha, p, t);
  TomogramRates rate = evolve_coherent_rates(kAlpha, p, t);
  EXPECT_LT(residual_for(p, g, rate, 0.3, 1.0, 0.5), 1e-10);
  rate.C += 0.05;
  EXPECT_GT(residual_for(p, g, rate, 0.3, 1.0, 0.5), 1e-3);
}

TEST(Residual, DetectsWrongDamping) {
  // evolve with one coupling, test against another
  const DampingParams p({1, 0}, {1, 2});
  const DampingParams q({1, 0}, {1, 2.1});
  const double t = 0.7;
  const double r = residual_for(q, evolve_coherent(kAlpha, p, t), evolve_coherent_rates(kAlpha, p, t), 0.3, 1.0, 0.5);
  EXPECT_GT(r, 1e-3);
}

TEST(Residual, ScaleInvariance) {
  const DampingParams p({1, 0}, {0, 10});
  const ProbePoint q{0.5, 1.0, -0.5, 1.2};
  const double base = pde_residual(kAlpha, p, q);
  for (double s : {-3.0, 0.1, 2.5}) {
    EXPECT_NEAR(pde_residual(kAlpha, p, {s * q.X, s * q.mu, s * q.nu, q.t}), base, 1e-8);
  }
}

TEST(Residual, RejectsBadProbe) {
  const DampingParams p({1, 0}, {0, 1});
  EXPECT_THROW(pde_residual(kAlpha, p, {0, 0, 0, 1}), ValidationError);
  EXPECT_THROW(pde_residual(kAlpha, p, {0, 1, 0, -1}), ValidationError);
  EXPECT_THROW(residual_sweep(kAlpha, p, std::vector<ProbePoint>{}), ValidationError);
}

TEST(Partials, AnalyticMatchesPlainCentralDifferences) {
  const double h = 1e-5;
  for (const auto& p : kPairs) {
    for (ProbePoint q : {ProbePoint{0.2, 1.0, 0.5, 0.8}, ProbePoint{-1.0, -0.4, 1.3, 2.5}}) {
      const Partials an = analytic_partials(kAlpha, p, q);
      auto w = [&](double X, double mu, double nu, double t) {
        return gaussian_tomogram_eval(evolve_coherent(kAlpha, p, t), X, mu, nu);
      };
      const double scale = std::max({1.0, std::abs(an.w_t), std::abs(an.w_XX)}) * 1e-5;
      EXPECT_NEAR(an.w, w(q.X, q.mu, q.nu, q.t), 1e-15);
      EXPECT_NEAR(an.w_X, (w(q.X + h, q.mu, q.nu, q.t) - w(q.X - h, q.mu, q.nu, q.t)) / (2 * h), scale);
      EXPECT_NEAR(an.w_XX,
                  (w(q.X + 1e-4, q.mu, q.nu, q.t) - 2 * an.w + w(q.X - 1e-4, q.mu, q.nu, q.t)) / 1e-8, scale);
      EXPECT_NEAR(an.w_mu, (w(q.X, q.mu + h, q.nu, q.t) - w(q.X, q.mu - h, q.nu, q.t)) / (2 * h), scale);
      EXPECT_NEAR(an.w_nu, (w(q.X, q.mu, q.nu + h, q.t) - w(q.X, q.mu, q.nu - h, q.t)) / (2 * h), scale);
      EXPECT_NEAR(an.w_t, (w(q.X, q.mu, q.nu, q.t + h) - w(q.X, q.mu, q.nu, q.t - h)) / (2 * h), scale);
    }
  }
}

TEST(Partials, RichardsonDifferencesAgreeToTolerance) {
  for (const auto& p : kPairs) {
    for (ProbePoint q : {ProbePoint{0.2, 1.0, 0.5, 0.8}, ProbePoint{-1.0, -0.4, 1.3, 0.0}}) {
      const Partials an = analytic_partials(kAlpha, p, q);
      const Partials fd = finite_difference_partials(kAlpha, p, q);
      const double scale = std::max({std::abs(an.w), std::abs(an.w_X), std::abs(an.w_XX), std::abs(an.w_mu),
                                     std::abs(an.w_nu), std::abs(an.w_t)});
      EXPECT_NEAR(an.w_X, fd.w_X, 1e-6 * scale);
      EXPECT_NEAR(an.w_XX, fd.w_XX, 1e-6 * scale);
      EXPECT_NEAR(an.w_mu, fd.w_mu, 1e-6 * scale);
      EXPECT_NEAR(an.w_nu, fd.w_nu, 1e-6 * scale);
      EXPECT_NEAR(an.w_t, fd.w_t, 1e-6 * scale);
    }
  }
}

TEST(Partials, VacuumIsStationary) {
  const Partials d = analytic_partials(CoherentAmplitude(), DampingParams({0, 0}, {0, 0}), {0.0, 1.0, 0.0, 0.0});
  EXPECT_NEAR(d.w, 1.0 / std::sqrt(std::numbers::pi), 1e-15);
  EXPECT_EQ(d.w_X, 0.0);
  EXPECT_EQ(d.w_t, 0.0);
}

TEST(Partials, GrowingWidthAtUnitTime) {
  // u = v = 1, t = 1: Q = C(1), dC/dt at the probe follows the κ = 0 column
  const DampingParams p({1, 0}, {1, 0});
  const Partials d = analytic_partials(CoherentAmplitude(), p, {0.0, 1.0, 0.0, 1.0});
  const Coefficients q = coefficients(p, 1.0);
  const Coefficients r = coefficient_rates(p, 1.0);
  EXPECT_NEAR(d.w, 1.0 / std::sqrt(std::numbers::pi * q.C), 1e-15);
  EXPECT_EQ(d.w_X, 0.0);
  EXPECT_NEAR(d.w_t, -0.5 * r.C / q.C * d.w, 1e-15);
}

TEST(Residual, InflatedWidthIsDetected) {
  const DampingParams p({1, 0}, {1, 0});
  const CoherentAmplitude vacuum;
  GaussianTomogram g = evolve_coherent(vacuum, p, 1.0);
  g.C *= 1.01;
  EXPECT_GT(residual_for(p, g, evolve_coherent_rates(vacuum, p, 1.0), 0.5, 1.0, 1.0), 1e-3);
}

TEST(Residual, StrongDampingRandomProbes) {
  const DampingParams p({1, 0}, {0, 10});
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> x(-3, 3), m(-2, 2), t(0, 3);
  std::vector<ProbePoint> pts;
  while (pts.size() < 100) {
    const ProbePoint q{x(rng), m(rng), m(rng), t(rng)};
    if (std::abs(q.mu) >= 0.1 || std::abs(q.nu) >= 0.1) pts.push_back(q);
  }
  EXPECT_LT(residual_sweep(kAlpha, p, pts).max_residual, 1e-6);
}

TEST(Residual, FiniteDifferencePartials) {
  for (const auto& p : kPairs) {
    for (const ProbePoint& q : probe_lattice(3, -2.0, 2.0, 1.5, 3.0)) {
      EXPECT_LT(finite_difference_residual(kAlpha, p, q), 1e-5);
    }
  }
}

TEST(Sweep, SinglePointAndArgmax) {
  const DampingParams p({1, 0}, {1, 2});
  const std::vector<ProbePoint> one{{0.3, 1.0, 0.5, 0.7}};
  const ResidualSweep sw = residual_sweep(kAlpha, p, one);
  EXPECT_EQ(sw.max_residual, pde_residual(kAlpha, p, one[0]));
  EXPECT_EQ(sw.argmax.X, 0.3);
}
