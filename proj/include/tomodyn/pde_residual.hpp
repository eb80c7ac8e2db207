#pragma once

// Residual of the damped-oscillator tomographic kinetic equation
//
//   ∂_t w = [ μ∂_ν − ν∂_μ + ½(|u|²ν² + |v|²μ²)∂_X² + Im(uv*)(μ∂_μ + ν∂_ν) − Re(uv*)μν∂_X² ] w
//
// evaluated on the closed-form Gaussian solution.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "tomodyn/gaussian_dynamics.hpp"
#include "tomodyn/tomography.hpp"
#include "tomodyn/types.hpp"

namespace tomodyn {

struct ProbePoint {
  double X = 0.0;
  double mu = 0.0;
  double nu = 0.0;
  double t = 0.0;
};

struct Partials {
  double w = 0.0;
  double w_X = 0.0;
  double w_XX = 0.0;
  double w_mu = 0.0;
  double w_nu = 0.0;
  double w_t = 0.0;
};

namespace detail {

// Logarithmic derivatives of w: ln w = −½ln(πQ) − y²/Q, y = X − λμ − δν. The residual is formed from
// these so that it stays meaningful where w itself underflows.
struct LogPartials {
  double w = 0.0;
  double l_X = 0.0;
  double l_XX = 0.0;
  double l_mu = 0.0;
  double l_nu = 0.0;
  double l_t = 0.0;
};

inline LogPartials log_partials(const GaussianTomogram& g, const TomogramRates& rate, double X, double mu,
                                double nu) {
  if (mu == 0.0 && nu == 0.0) throw ValidationError("probe point has mu = nu = 0");
  const double q = g.quadratic_form(mu, nu);
  if (!(q > 0.0) || !std::isfinite(q)) throw InvariantViolation("quadratic form is not positive at probe point");
  const double y = X - g.lambda * mu - g.delta * nu;
  const double q_mu = 2.0 * g.C * mu + g.E * nu;
  const double q_nu = 2.0 * g.D * nu + g.E * mu;
  const double q_t = rate.C * mu * mu + rate.D * nu * nu + rate.E * mu * nu;
  const double y_t = -rate.lambda * mu - rate.delta * nu;
  const double yq = y / q;

  LogPartials lp;
  lp.w = std::exp(-y * yq) / std::sqrt(std::numbers::pi * q);
  lp.l_X = -2.0 * yq;
  lp.l_XX = -2.0 / q;
  lp.l_mu = -0.5 * q_mu / q + 2.0 * g.lambda * yq + yq * yq * q_mu;
  lp.l_nu = -0.5 * q_nu / q + 2.0 * g.delta * yq + yq * yq * q_nu;
  lp.l_t = -0.5 * q_t / q - 2.0 * y_t * yq + yq * yq * q_t;
  return lp;
}

// (generator applied to w)/w
inline double generator_over_w(const DampingParams& p, const LogPartials& lp, double mu, double nu) {
  const double xx = lp.l_X * lp.l_X + lp.l_XX;  // w_XX / w
  const double diffusion = 0.5 * (p.u_norm2() * nu * nu + p.v_norm2() * mu * mu) - p.r() * mu * nu;
  return mu * lp.l_nu - nu * lp.l_mu + diffusion * xx + p.kappa() * (mu * lp.l_mu + nu * lp.l_nu);
}

inline void require_probe(const ProbePoint& q) {
  if (!std::isfinite(q.X) || !std::isfinite(q.mu) || !std::isfinite(q.nu) || !std::isfinite(q.t)) {
    throw ValidationError("probe point must be finite");
  }
  if (q.mu == 0.0 && q.nu == 0.0) throw ValidationError("probe point has mu = nu = 0");
  if (q.t < 0.0) throw ValidationError("probe point has t < 0");
}

}  // namespace detail

/// Partials of an arbitrary Gaussian tomogram moving with the given field rates.
inline Partials tomogram_partials(const GaussianTomogram& g, const TomogramRates& rate, double X, double mu,
                                  double nu) {
  const detail::LogPartials lp = detail::log_partials(g, rate, X, mu, nu);
  return {lp.w,
          lp.w * lp.l_X,
          lp.w * (lp.l_X * lp.l_X + lp.l_XX),
          lp.w * lp.l_mu,
          lp.w * lp.l_nu,
          lp.w * lp.l_t};
}

/// (w, w_X, w_XX, w_μ, w_ν, w_t) of the evolved coherent tomogram; time derivatives come from
/// differentiating the closed-form coefficients, not from the kinetic equation.
inline Partials analytic_partials(const CoherentAmplitude& a, const DampingParams& p, const ProbePoint& q) {
  detail::require_probe(q);
  return tomogram_partials(evolve_coherent(a, p, q.t), evolve_coherent_rates(a, p, q.t), q.X, q.mu, q.nu);
}

/// |w_t − RHS| / max(|w|, 1e−300) for a Gaussian state and its claimed time derivative.
inline double residual_for(const DampingParams& p, const GaussianTomogram& g, const TomogramRates& rate, double X,
                           double mu, double nu) {
  const detail::LogPartials lp = detail::log_partials(g, rate, X, mu, nu);
  const double rel = std::abs(lp.l_t - detail::generator_over_w(p, lp, mu, nu));
  // floor: if w underflows the absolute residual is rel·w, compared against 1e-300
  if (lp.w < 1e-300) return rel * lp.w / 1e-300;
  return rel;
}

inline double pde_residual(const CoherentAmplitude& a, const DampingParams& p, const ProbePoint& q) {
  detail::require_probe(q);
  return residual_for(p, evolve_coherent(a, p, q.t), evolve_coherent_rates(a, p, q.t), q.X, q.mu, q.nu);
}

struct ResidualSweep {
  double max_residual = 0.0;
  ProbePoint argmax;
  std::vector<double> residuals;  // per point, same order as the input
};

inline ResidualSweep residual_sweep(const CoherentAmplitude& a, const DampingParams& p,
                                    std::span<const ProbePoint> points) {
  if (points.empty()) throw ValidationError("residual_sweep: empty probe sequence");
  ResidualSweep out;
  out.residuals.reserve(points.size());
  out.max_residual = -1.0;
  for (const ProbePoint& q : points) {
    const double r = pde_residual(a, p, q);
    out.residuals.push_back(r);
    if (r > out.max_residual) {
      out.max_residual = r;
      out.argmax = q;
    }
  }
  return out;
}

/// n⁴ lattice over X ∈ [x_lo, x_hi], μ, ν ∈ [−m, m], t ∈ [0, t_max]; points with |μ| and |ν| both
/// below 0.1 are dropped.
inline std::vector<ProbePoint> probe_lattice(int n = 5, double x_lo = -3.0, double x_hi = 3.0, double m = 2.0,
                                             double t_max = 5.0) {
  if (n < 2) throw ValidationError("probe_lattice: need n >= 2");
  auto node = [n](double lo, double hi, int i) { return lo + (hi - lo) * i / (n - 1); };
  std::vector<ProbePoint> pts;
  for (int it = 0; it < n; ++it) {
    for (int ix = 0; ix < n; ++ix) {
      for (int im = 0; im < n; ++im) {
        for (int in = 0; in < n; ++in) {
          const double mu = node(-m, m, im);
          const double nu = node(-m, m, in);
          if (std::abs(mu) < 0.1 && std::abs(nu) < 0.1) continue;
          pts.push_back({node(x_lo, x_hi, ix), mu, nu, node(0.0, t_max, it)});
        }
      }
    }
  }
  return pts;
}

/// Residual of the kinetic equation evaluated on a set of partials, |w_t − RHS| / max(|w|, 1e−300).
inline double residual_from_partials(const DampingParams& p, const Partials& d, double mu, double nu) {
  const double diffusion = 0.5 * (p.u_norm2() * nu * nu + p.v_norm2() * mu * mu) - p.r() * mu * nu;
  const double rhs = mu * d.w_nu - nu * d.w_mu + diffusion * d.w_XX + p.kappa() * (mu * d.w_mu + nu * d.w_nu);
  return std::abs(d.w_t - rhs) / std::max(std::abs(d.w), 1e-300);
}

/// Central differences with one Richardson step, evaluated on the closed-form tomogram only. Near t = 0
/// the time derivative uses a forward stencil. Separate steps for (X, μ, ν) and t.
inline Partials finite_difference_partials(const CoherentAmplitude& a, const DampingParams& p, const ProbePoint& q,
                                           double h_space, double h_time) {
  const double h = h_space;
  detail::require_probe(q);
  auto w_at = [&](double X, double mu, double nu, double t) {
    return gaussian_tomogram_eval(evolve_coherent(a, p, t), X, mu, nu);
  };
  auto d1 = [](auto&& f, double hh) {
    auto c = [&](double s) { return (f(s) - f(-s)) / (2.0 * s); };
    return (4.0 * c(hh / 2.0) - c(hh)) / 3.0;
  };
  auto d2 = [](auto&& f, double f0, double hh) {
    auto c = [&](double s) { return (f(s) - 2.0 * f0 + f(-s)) / (s * s); };
    return (4.0 * c(hh / 2.0) - c(hh)) / 3.0;
  };

  Partials out;
  out.w = w_at(q.X, q.mu, q.nu, q.t);
  out.w_X = d1([&](double s) { return w_at(q.X + s, q.mu, q.nu, q.t); }, h);
  out.w_XX = d2([&](double s) { return w_at(q.X + s, q.mu, q.nu, q.t); }, out.w, h);
  out.w_mu = d1([&](double s) { return w_at(q.X, q.mu + s, q.nu, q.t); }, h);
  out.w_nu = d1([&](double s) { return w_at(q.X, q.mu, q.nu + s, q.t); }, h);
  if (q.t >= h_time) {
    out.w_t = d1([&](double s) { return w_at(q.X, q.mu, q.nu, q.t + s); }, h_time);
  } else {
    // forward second-order stencil with Richardson: f'(t) ≈ (−3f0 + 4f(t+s) − f(t+2s))/(2s).
    // The one-sided error is third order in s, so the step is reduced a hundredfold.
    auto fwd = [&](double s) {
      return (-3.0 * out.w + 4.0 * w_at(q.X, q.mu, q.nu, q.t + s) - w_at(q.X, q.mu, q.nu, q.t + 2.0 * s)) / (2.0 * s);
    };
    const double hf = 0.01 * h_time;
    out.w_t = (4.0 * fwd(hf / 2.0) - fwd(hf)) / 3.0;
  }
  return out;
}

inline Partials finite_difference_partials(const CoherentAmplitude& a, const DampingParams& p, const ProbePoint& q,
                                           double h = 1e-4) {
  return finite_difference_partials(a, p, q, h, h);
}

/// Residual from finite-difference partials. The second X derivative has a roundoff floor of about
/// ε/h², amplified by the diffusion coefficient, so the spatial step is coarser than the time step.
inline double finite_difference_residual(const CoherentAmplitude& a, const DampingParams& p, const ProbePoint& q) {
  return residual_from_partials(p, finite_difference_partials(a, p, q, 1e-3, 1e-4), q.mu, q.nu);
}

}  // namespace tomodyn
