#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>
#include <variant>
#include <vector>

#include "tomodyn/gaussian_dynamics.hpp"

using namespace tomodyn;

namespace {

// Independent oracle: RK4 on the moment equations
//   C' = 2κC + E + 2|v|²,  D' = 2κD − E + 2|u|²,  E' = 2κE + 2(D − C) − 4r,
//   λ' = κλ + δ,           δ' = κδ − λ.
GaussianTomogram integrate_moments(const DampingParams& p, GaussianTomogram g, double t, int n = 20000) {
  using State = std::array<double, 5>;
  const double k = p.kappa();
  auto f = [&](const State& y) -> State {
    return {k * y[0] + y[1], k * y[1] - y[0], 2 * k * y[2] + y[4] + 2 * p.v_norm2(),
            2 * k * y[3] - y[4] + 2 * p.u_norm2(), 2 * k * y[4] + 2 * (y[3] - y[2]) - 4 * p.r()};
  };
  State y{g.lambda, g.delta, g.C, g.D, g.E};
  const double h = t / n;
  for (int i = 0; i < n; ++i) {
    State k1 = f(y), k2, k3, k4, tmp;
    for (int j = 0; j < 5; ++j) tmp[j] = y[j] + 0.5 * h * k1[j];
    k2 = f(tmp);
    for (int j = 0; j < 5; ++j) tmp[j] = y[j] + 0.5 * h * k2[j];
    k3 = f(tmp);
    for (int j = 0; j < 5; ++j) tmp[j] = y[j] + h * k3[j];
    k4 = f(tmp);
    for (int j = 0; j < 5; ++j) y[j] += h / 6.0 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
  }
  return {y[0], y[1], y[2], y[3], y[4]};
}

DampingParams P(complex u, complex v) { return DampingParams(u, v); }

}  // namespace

TEST(DampingParams, DerivedQuantities) {
  const DampingParams p = P({1, 0}, {1, 2});
  EXPECT_DOUBLE_EQ(p.kappa(), -2.0);
  EXPECT_DOUBLE_EQ(p.r(), 1.0);
  EXPECT_DOUBLE_EQ(p.s(), 6.0);
  EXPECT_DOUBLE_EQ(p.m(), -4.0);
  EXPECT_THROW(P({NAN, 0}, {0, 0}), ValidationError);
  EXPECT_THROW(CoherentAmplitude(complex(0, INFINITY)), ValidationError);
}

TEST(Constants, KappaMinusTen) {
  const auto cde = std::get<CdeConstants>(constants_cde(P({1, 0}, {0, 10})));
  EXPECT_NEAR(cde.c, -990.0 / 202.0, 1e-12);
  EXPECT_NEAR(cde.d, 5.05, 1e-12);
  EXPECT_NEAR(cde.e, -99.0 / 202.0, 1e-12);
  EXPECT_TRUE(std::holds_alternative<KappaZero>(constants_cde(P({1, 0}, {1, 0}))));
}

TEST(Coefficients, InitialCondition) {
  for (auto p : {P({1, 0}, {0, 1}), P({1, 0}, {1, 0}), P({0.3, 2}, {-1, 0.5})}) {
    const Coefficients q = coefficients(p, 0.0);
    EXPECT_EQ(q.C, 1.0);
    EXPECT_EQ(q.D, 1.0);
    EXPECT_EQ(q.E, 0.0);
  }
}

// Reference values from a truncated Fock-space Lindblad integration (N = 60).
TEST(Coefficients, LindbladReferenceKappaZero) {
  const GaussianTomogram g = evolve_coherent(CoherentAmplitude(), P({1, 0}, {1, 0}), 1.0);
  EXPECT_NEAR(g.C, 1.5838531635, 1e-9);
  EXPECT_NEAR(g.D, 4.4161468364, 1e-9);
  EXPECT_NEAR(g.E, -1.8185948535, 1e-9);
  EXPECT_NEAR(purity(g), 0.40265969, 1e-8);
}

// u = 1, v = 10i relaxes like e^{-20t}; by t = 2 the state is the stationary point of the moment
// equations: E = -99/101, C = 20101/2020, D = 301/2020.
TEST(Coefficients, StrongDampingStationaryPoint) {
  const GaussianTomogram g = evolve_coherent(CoherentAmplitude(), P({1, 0}, {0, 10}), 2.0);
  EXPECT_NEAR(g.C, 20101.0 / 2020.0, 1e-12);
  EXPECT_NEAR(g.D, 301.0 / 2020.0, 1e-12);
  EXPECT_NEAR(g.E, -99.0 / 101.0, 1e-12);
  EXPECT_NEAR(purity(g), std::sqrt(4080400.0 / 5070301.0), 1e-12);
}

TEST(Coefficients, LindbladReferenceStationary) {
  const GaussianTomogram g = evolve_coherent(CoherentAmplitude(), P({1, 0}, {1, 2}), 5.0);
  EXPECT_NEAR(g.C, 2.1, 1e-7);
  EXPECT_NEAR(g.D, 0.9, 1e-7);
  EXPECT_NEAR(g.E, -1.6, 1e-7);
  EXPECT_NEAR(purity(g), std::sqrt(0.8), 1e-7);
}

TEST(Coefficients, MatchesMomentOde) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> c(-1.5, 1.5), tt(0.1, 4.0);
  for (int i = 0; i < 25; ++i) {
    const DampingParams p({c(rng), c(rng)}, {c(rng), c(rng)});
    const CoherentAmplitude a(complex(c(rng), c(rng)));
    const double t = tt(rng);
    const GaussianTomogram g = evolve_coherent(a, p, t);
    const GaussianTomogram o = integrate_moments(p, GaussianTomogram::coherent(a), t);
    const double scale = std::max({1.0, std::abs(o.C), std::abs(o.D)});
    EXPECT_NEAR(g.C, o.C, 1e-9 * scale);
    EXPECT_NEAR(g.D, o.D, 1e-9 * scale);
    EXPECT_NEAR(g.E, o.E, 1e-9 * scale);
    EXPECT_NEAR(g.lambda, o.lambda, 1e-9 * scale);
    EXPECT_NEAR(g.delta, o.delta, 1e-9 * scale);
  }
}

TEST(Coefficients, KappaZeroBranchMatchesOde) {
  const DampingParams p({2, 0}, {0.5, 0});
  ASSERT_TRUE(p.kappa_is_zero());
  for (double t : {0.3, 1.7, 6.0}) {
    const Coefficients q = coefficients(p, t);
    const GaussianTomogram o = integrate_moments(p, GaussianTomogram{}, t);
    EXPECT_NEAR(q.C, o.C, 1e-9);
    EXPECT_NEAR(q.D, o.D, 1e-9);
    EXPECT_NEAR(q.E, o.E, 1e-9);
  }
}

TEST(Coefficients, BranchesAgreeNearThreshold) {
  const DampingParams p({1, 0}, {0.7, -1e-7});
  for (double t : {0.5, 2.0, 5.0}) {
    const Coefficients a = coefficients_kappa_nonzero(p, t);
    const Coefficients b = coefficients_kappa_zero(p, t);
    EXPECT_NEAR(a.C, b.C, 1e-5 * std::max(1.0, std::abs(b.C)));
    EXPECT_NEAR(a.D, b.D, 1e-5 * std::max(1.0, std::abs(b.D)));
    EXPECT_NEAR(a.E, b.E, 1e-5 * std::max(1.0, std::abs(b.E)));
  }
}

TEST(Coefficients, RatesMatchDifferences) {
  for (auto p : {P({1, 0}, {1, 0}), P({1, 0}, {1, 2}), P({0.5, 0.2}, {0.1, -0.4})}) {
    for (double t : {0.4, 1.3}) {
      const double h = 1e-5;
      const Coefficients r = coefficient_rates(p, t);
      const Coefficients a = coefficients(p, t + h);
      const Coefficients b = coefficients(p, t - h);
      EXPECT_NEAR(r.C, (a.C - b.C) / (2 * h), 1e-6);
      EXPECT_NEAR(r.D, (a.D - b.D) / (2 * h), 1e-6);
      EXPECT_NEAR(r.E, (a.E - b.E) / (2 * h), 1e-6);
    }
  }
}

TEST(Coefficients, RejectsNegativeTime) {
  EXPECT_THROW(coefficients(P({1, 0}, {0, 1}), -0.1), ValidationError);
  EXPECT_THROW(coefficients(P({1, 0}, {0, 1}), NAN), ValidationError);
}

TEST(Purity, CoherentIsPure) { EXPECT_DOUBLE_EQ(purity(GaussianTomogram{}), 1.0); }

TEST(Purity, ThermalLikeState) { EXPECT_NEAR(purity({0, 0, 3, 3, 0}), 1.0 / 3.0, 1e-15); }

TEST(Purity, DegenerateThrows) { EXPECT_THROW(purity({0, 0, 1, 1, 2}), InvariantViolation); }

TEST(Purity, PureDampingStaysPure) {
  for (double gamma : {0.5, 1.0, 2.0}) {
    const DampingParams p({std::sqrt(gamma), 0}, {0, std::sqrt(gamma)});
    for (double t = 0.0; t <= 10.0; t += 0.37) {
      EXPECT_NEAR(purity(evolve_coherent(CoherentAmplitude(complex(1, 1)), p, t)), 1.0, 1e-12);
    }
  }
}

TEST(Asymptotic, Classification) {
  EXPECT_TRUE(std::holds_alternative<ConstantOne>(asymptotic_purity(P({0, 0}, {0, 0}))));
  EXPECT_TRUE(std::holds_alternative<DecaysToZero>(asymptotic_purity(P({1, 0}, {1, 0}))));
  EXPECT_TRUE(std::holds_alternative<DecaysToZero>(asymptotic_purity(P({1, 0}, {0, -1}))));
  const auto lim = asymptotic_purity(P({1, 0}, {0, 10}));
  ASSERT_TRUE(std::holds_alternative<Limit>(lim));
  EXPECT_NEAR(std::get<Limit>(lim).value, std::sqrt(40400.0 / 50201.0), 1e-14);
  EXPECT_NEAR(std::get<Limit>(asymptotic_purity(P({1, 0}, {1, 2}))).value, std::sqrt(0.8), 1e-14);
  EXPECT_NEAR(std::get<Limit>(asymptotic_purity(P({1, 0}, {0, 1}))).value, 1.0, 1e-15);
}

TEST(Asymptotic, LongTimePurityApproachesLimit) {
  for (auto p : {P({1, 0}, {0, 10}), P({1, 0}, {1, 2}), P({0.8, 0.1}, {0.3, 1.1})}) {
    const double lim = std::get<Limit>(asymptotic_purity(p)).value;
    const double t = 25.0 / std::abs(p.kappa());
    EXPECT_NEAR(purity(evolve_coherent(CoherentAmplitude(complex(0.5, 0)), p, t)), lim, 1e-9);
  }
}

TEST(Asymptotic, ConstantKappaUnboundedGrowth) {
  const DampingParams p({1, 0}, {1, 0});
  EXPECT_LT(purity(evolve_coherent(CoherentAmplitude(), p, 100.0)), 0.01);
}

TEST(PurityCurve, RowsAndValidation) {
  const std::vector<double> ts{0.0, 0.5, 1.0};
  const auto rows = purity_curve(CoherentAmplitude(complex(1, 0)), P({1, 0}, {1, 2}), ts);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].purity, 1.0);
  EXPECT_NEAR(rows[0].lambda, std::sqrt(2.0), 1e-15);
  const std::vector<double> bad{0.0, 0.0};
  EXPECT_THROW(purity_curve(CoherentAmplitude(), P({1, 0}, {1, 2}), bad), ValidationError);
  EXPECT_THROW(purity_curve(CoherentAmplitude(), P({1, 0}, {1, 2}), std::vector<double>{}), ValidationError);
}
