#pragma once

// Closed-form evolution of Gaussian (coherent-state) tomograms of the damped oscillator
//   H = (p² + x²)/2,   V = u·x + v·p.

#include <cmath>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "tomodyn/types.hpp"

namespace tomodyn {

/// Stationary-part constants of the Im(uv*) ≠ 0 solution.
struct CdeConstants {
  double c = 0.0;
  double d = 0.0;
  double e = 0.0;
};

/// Marker returned by constants_cde when Im(uv*) is (numerically) zero and d is undefined.
struct KappaZero {};

inline std::variant<CdeConstants, KappaZero> constants_cde(const DampingParams& p) {
  if (p.kappa_is_zero()) return KappaZero{};
  const double k = p.kappa();
  const double denom = 2.0 * (1.0 + k * k);
  return CdeConstants{
      -(p.m() * k - 2.0 * p.r()) / denom,
      -p.s() / (2.0 * k),
      (p.m() + 2.0 * p.r() * k) / denom,
  };
}

struct Coefficients {
  double C = 1.0;
  double D = 1.0;
  double E = 0.0;
};

namespace detail {

// expm1(x)/x, continuous at 0
inline double expm1_ratio(double x) {
  if (std::abs(x) < 1e-5) return 1.0 + x * (0.5 + x / 6.0);
  return std::expm1(x) / x;
}

// c and e stay finite as kappa -> 0 (c -> r, e -> m/2); d is never formed here.
inline double c_const(const DampingParams& p) {
  const double k = p.kappa();
  return -(p.m() * k - 2.0 * p.r()) / (2.0 * (1.0 + k * k));
}
inline double e_const(const DampingParams& p) {
  const double k = p.kappa();
  return (p.m() + 2.0 * p.r() * k) / (2.0 * (1.0 + k * k));
}

inline void require_time(double t) {
  if (!std::isfinite(t) || t < 0.0) throw ValidationError("time must be finite and non-negative");
}

}  // namespace detail

/// Im(uv*) ≠ 0 column. The (1 − d)e^{2κt} + d part is rearranged as e^{2κt} + s·t·expm1(2κt)/(2κt),
/// which is algebraically identical and free of the 1/κ cancellation.
inline Coefficients coefficients_kappa_nonzero(const DampingParams& p, double t) {
  const double c = detail::c_const(p);
  const double e = detail::e_const(p);
  const double g = std::exp(2.0 * p.kappa() * t);
  const double growth = p.s() * t * detail::expm1_ratio(2.0 * p.kappa() * t);
  const double c2 = std::cos(2.0 * t);
  const double s2 = std::sin(2.0 * t);
  return {
      g * (1.0 + c * c2 - e * s2) + growth - c,
      g * (1.0 - c * c2 + e * s2) + growth + c,
      -2.0 * (c * s2 + e * c2) * g + 2.0 * e,
  };
}

/// Im(uv*) = 0 column, including the Re(uv*) terms (the κ → 0 limit of the general column).
inline Coefficients coefficients_kappa_zero(const DampingParams& p, double t) {
  const double st2 = std::sin(t) * std::sin(t);
  const double s2 = std::sin(2.0 * t);
  return {
      1.0 + p.s() * t - 0.5 * p.m() * s2 - 2.0 * p.r() * st2,
      1.0 + p.s() * t + 0.5 * p.m() * s2 + 2.0 * p.r() * st2,
      2.0 * p.m() * st2 - 2.0 * p.r() * s2,
  };
}

/// Second-moment coefficients (C, D, E) of the evolved coherent tomogram.
inline Coefficients coefficients(const DampingParams& p, double t) {
  detail::require_time(t);
  if (t == 0.0) return {1.0, 1.0, 0.0};
  return p.kappa_is_zero() ? coefficients_kappa_zero(p, t) : coefficients_kappa_nonzero(p, t);
}

/// dC/dt, dD/dt, dE/dt by differentiating the closed form of the active branch.
inline Coefficients coefficient_rates(const DampingParams& p, double t) {
  detail::require_time(t);
  const double c2 = std::cos(2.0 * t);
  const double s2 = std::sin(2.0 * t);
  if (p.kappa_is_zero()) {
    return {
        p.s() - p.m() * c2 - 2.0 * p.r() * s2,
        p.s() + p.m() * c2 + 2.0 * p.r() * s2,
        2.0 * p.m() * s2 - 4.0 * p.r() * c2,
    };
  }
  const double k = p.kappa();
  const double c = detail::c_const(p);
  const double e = detail::e_const(p);
  const double g = std::exp(2.0 * k * t);
  return {
      g * (2.0 * k * (1.0 + c * c2 - e * s2) - 2.0 * c * s2 - 2.0 * e * c2 + p.s()),
      g * (2.0 * k * (1.0 - c * c2 + e * s2) + 2.0 * c * s2 + 2.0 * e * c2 + p.s()),
      g * (-4.0 * k * (c * s2 + e * c2) - 4.0 * (c * c2 - e * s2)),
  };
}

struct FirstMoments {
  double lambda = 0.0;
  double delta = 0.0;
};

/// <x>(t), <p>(t): rotation at unit frequency with envelope e^{κt}.
inline FirstMoments first_moments(const CoherentAmplitude& a, const DampingParams& p, double t) {
  detail::require_time(t);
  const double env = std::sqrt(2.0) * std::exp(p.kappa() * t);
  const double re = a.alpha.real();
  const double im = a.alpha.imag();
  return {(re * std::cos(t) + im * std::sin(t)) * env, (im * std::cos(t) - re * std::sin(t)) * env};
}

inline FirstMoments first_moment_rates(const CoherentAmplitude& a, const DampingParams& p, double t) {
  detail::require_time(t);
  const double k = p.kappa();
  const double env = std::sqrt(2.0) * std::exp(k * t);
  const double re = a.alpha.real();
  const double im = a.alpha.imag();
  const double ct = std::cos(t);
  const double st = std::sin(t);
  return {env * (k * (re * ct + im * st) + (-re * st + im * ct)),
          env * (k * (im * ct - re * st) + (-im * st - re * ct))};
}

/// Tomogram at time t of the state that was the coherent state |alpha> at t = 0.
inline GaussianTomogram evolve_coherent(const CoherentAmplitude& a, const DampingParams& p, double t) {
  const Coefficients q = coefficients(p, t);
  const FirstMoments f = first_moments(a, p, t);
  return {f.lambda, f.delta, q.C, q.D, q.E};
}

inline TomogramRates evolve_coherent_rates(const CoherentAmplitude& a, const DampingParams& p, double t) {
  const Coefficients q = coefficient_rates(p, t);
  const FirstMoments f = first_moment_rates(a, p, t);
  return {f.lambda, f.delta, q.C, q.D, q.E};
}

/// tr ρ² = 1/√(CD − E²/4).
inline double purity(const GaussianTomogram& g) {
  if (!(g.C > 0.0) || !(g.schur_complement() > 0.0) || !std::isfinite(g.schur_complement())) {
    throw InvariantViolation("purity undefined: CD - E^2/4 <= 0 (degenerate tomogram)");
  }
  return 1.0 / (std::sqrt(g.C) * std::sqrt(g.schur_complement()));
}

struct ConstantOne {};
struct DecaysToZero {};
struct Limit {
  double value = 0.0;
};
using AsymptoticPurity = std::variant<ConstantOne, DecaysToZero, Limit>;

/// Long-time behaviour of the purity of an evolved Gaussian state.
///
/// u = v = 0 is unitary motion. For Im(uv*) ≥ 0 the covariance grows without bound. For Im(uv*) < 0 the
/// state relaxes to the stationary Gaussian with C = d − c, D = d + c, E = 2e, whose purity is
///   1/√(d² − c² − e²) = √(4κ²(1 + κ²) / (s² + 4κ⁴)).
inline AsymptoticPurity asymptotic_purity(const DampingParams& p) {
  if (p.s() == 0.0) return ConstantOne{};
  if (p.kappa_is_zero() || p.kappa() > 0.0) return DecaysToZero{};
  const double k2 = p.kappa() * p.kappa();
  return Limit{std::sqrt(4.0 * k2 * (1.0 + k2) / (p.s() * p.s() + 4.0 * k2 * k2))};
}

struct PurityRow {
  double t = 0.0;
  double C = 1.0;
  double D = 1.0;
  double E = 0.0;
  double lambda = 0.0;
  double delta = 0.0;
  double purity = 1.0;
};

inline std::vector<PurityRow> purity_curve(const CoherentAmplitude& a, const DampingParams& p,
                                           std::span<const double> times) {
  if (times.empty()) throw ValidationError("purity_curve: time sequence is empty");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || times[i] < 0.0) {
      throw ValidationError("purity_curve: times must be finite and non-negative (index " + std::to_string(i) +
                            ")");
    }
    if (i > 0 && !(times[i] > times[i - 1])) {
      throw ValidationError("purity_curve: times must be strictly ascending (index " + std::to_string(i) + ")");
    }
  }
  std::vector<PurityRow> rows;
  rows.reserve(times.size());
  for (double t : times) {
    const GaussianTomogram g = evolve_coherent(a, p, t);
    rows.push_back({t, g.C, g.D, g.E, g.lambda, g.delta, purity(g)});
  }
  return rows;
}

}  // namespace tomodyn
