#pragma once

// Fourier-space propagator of the damped-oscillator tomogram.
//
// With w̃(k, μ, ν) = (1/2π)∫ w(X, μ, ν) e^{−ikX} dX the kinetic equation becomes a Schrödinger-type
// equation whose effective Hamiltonian is the quadratic form ½ ξᵀΓξ, ξ = (−i∂_μ, −i∂_ν, μ, ν).
// Its propagator is assembled from four 2×2 blocks Λ1..Λ4 that obey
//   Λ1' = Λ1Γ_xp − Λ2Γ_pp,   Λ2' = Λ1Γ_xx − Λ2Γ_px,
//   Λ3' = Λ3Γ_xp − Λ4Γ_pp,   Λ4' = Λ3Γ_xx − Λ4Γ_px,
// with Λ1 = Λ4 = 1, Λ2 = Λ3 = 0 at t = 0.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "tomodyn/types.hpp"

namespace tomodyn {

using Mat2c = Eigen::Matrix2cd;
using Mat4c = Eigen::Matrix4cd;
using Mat2 = Eigen::Matrix2d;
using Vec2 = Eigen::Vector2d;

/// Γ in block order (p_μ, p_ν, x_μ, x_ν).
struct GammaMatrix {
  double k = 0.0;
  Mat4c entries = Mat4c::Zero();

  Mat2c pp() const { return entries.block<2, 2>(0, 0); }
  Mat2c px() const { return entries.block<2, 2>(0, 2); }
  Mat2c xp() const { return entries.block<2, 2>(2, 0); }
  Mat2c xx() const { return entries.block<2, 2>(2, 2); }
};

inline GammaMatrix gamma_matrix(const DampingParams& p, double k) {
  if (!std::isfinite(k)) throw ValidationError("gamma_matrix: k must be finite");
  const complex I(0.0, 1.0);
  const double kap = p.kappa();
  const double k2 = k * k;
  GammaMatrix g;
  g.k = k;
  g.entries << 0.0, 0.0, -kap, 1.0,
               0.0, 0.0, -1.0, -kap,
               -kap, -1.0, -I * p.v_norm2() * k2, I * p.r() * k2,
               1.0, -kap, I * p.r() * k2, -I * p.u_norm2() * k2;
  return g;
}

struct LambdaSet {
  double t = 0.0;
  double k = 0.0;
  Mat2c L1 = Mat2c::Identity();
  Mat2c L2 = Mat2c::Zero();
  Mat2c L3 = Mat2c::Zero();
  Mat2c L4 = Mat2c::Identity();
};

namespace detail {

inline Mat2c rotation(double t) {
  Mat2c r;
  r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  return r;
}

// sinh(x)/x, continuous at 0
inline double sinhc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 + x * x / 6.0;
  return std::sinh(x) / x;
}

}  // namespace detail

/// Exact solution of the Λ system for this Γ.
///
/// Λ1 = R(t)e^{−κt}, Λ4 = R(t)e^{κt}, Λ3 = 0, and
///   Λ2 = ∫₀ᵗ Λ1(τ) Γ_xx e^{−(t−τ)Γ_px} dτ = [∫₀ᵗ e^{κ(t−2τ)} R(τ) Γ_xx R(τ)ᵀ dτ] R(t).
/// Splitting Γ_xx = ik²(−(s/2)·1 + [[m/2, r], [r, −m/2]]) reduces the integral to
///   A0 = sinh(κt)/κ   and   A_c + iA_s = ∫₀ᵗ e^{κ(t−2τ)} e^{2iτ} dτ,
/// both regular at κ = 0.
inline LambdaSet lambda_closed_form(const DampingParams& p, double k, double t) {
  if (!std::isfinite(t) || t < 0.0) throw ValidationError("lambda_closed_form: t must be >= 0");
  if (!std::isfinite(k)) throw ValidationError("lambda_closed_form: k must be finite");
  const complex I(0.0, 1.0);
  const double kap = p.kappa();
  const Mat2c R = detail::rotation(t);

  LambdaSet out;
  out.t = t;
  out.k = k;
  out.L1 = R * std::exp(-kap * t);
  out.L4 = R * std::exp(kap * t);
  out.L3.setZero();

  const double a0 = t * detail::sinhc(kap * t);
  const complex acs = (std::exp(complex(-kap * t, 2.0 * t)) - std::exp(kap * t)) / complex(-2.0 * kap, 2.0);
  const double ac = acs.real();
  const double as = acs.imag();
  const double alpha = 0.5 * p.m();
  const double beta = p.r();
  const double diag = alpha * ac - beta * as;
  const double off = alpha * as + beta * ac;

  Mat2c inner;
  inner << -0.5 * p.s() * a0 + diag, off, off, -0.5 * p.s() * a0 - diag;
  out.L2 = (I * (k * k)) * inner * R;
  return out;
}

/// Fixed-step classical fourth-order Runge–Kutta integration of the Λ system.
/// The number of steps is ceil(t/step); the actual step is t divided by that count.
inline LambdaSet lambda_ode_integrate(const DampingParams& p, double k, double t, double step) {
  if (!std::isfinite(t) || t < 0.0) throw ValidationError("lambda_ode_integrate: t must be >= 0");
  if (!(step > 0.0) || step > 0.01) throw ValidationError("lambda_ode_integrate: step must lie in (0, 0.01]");
  const GammaMatrix gamma = gamma_matrix(p, k);
  const Mat2c gpp = gamma.pp();
  const Mat2c gpx = gamma.px();
  const Mat2c gxp = gamma.xp();
  const Mat2c gxx = gamma.xx();

  // State M = [[Λ1, Λ2], [Λ3, Λ4]] evolves as M' = M·K with K = [[Γ_xp, Γ_xx], [−Γ_pp, −Γ_px]].
  Mat4c K;
  K << gxp, gxx, -gpp, -gpx;
  Mat4c M = Mat4c::Identity();

  const auto n = static_cast<long>(std::ceil(t / step - 1e-12));
  if (n > 0) {
    const double h = t / static_cast<double>(n);
    for (long i = 0; i < n; ++i) {
      const Mat4c k1 = M * K;
      const Mat4c k2 = (M + 0.5 * h * k1) * K;
      const Mat4c k3 = (M + 0.5 * h * k2) * K;
      const Mat4c k4 = (M + h * k3) * K;
      M += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
  }

  LambdaSet out;
  out.t = t;
  out.k = k;
  out.L1 = M.block<2, 2>(0, 0);
  out.L2 = M.block<2, 2>(0, 2);
  out.L3 = M.block<2, 2>(2, 0);
  out.L4 = M.block<2, 2>(2, 2);
  return out;
}

/// Largest entry-wise difference of two blocks, relative to max(1, largest entry of either).
inline double block_difference(const Mat2c& a, const Mat2c& b) {
  const double scale = std::max({1.0, a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()});
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

inline double lambda_difference(const LambdaSet& a, const LambdaSet& b) {
  return std::max({block_difference(a.L1, b.L1), block_difference(a.L2, b.L2), block_difference(a.L3, b.L3),
                   block_difference(a.L4, b.L4)});
}

/// det(Λ4)^{-1/2}; det Λ4 = e^{2κt} is real and positive, so the principal root applies.
inline double green_prefactor(const DampingParams& p, double t) {
  const LambdaSet lam = lambda_closed_form(p, 0.0, t);
  return 1.0 / std::sqrt(lam.L4.determinant().real());
}

/// Propagates a Gaussian tomogram by the Green function.
///
/// The X-Fourier transform of a Gaussian tomogram is (1/2π)exp(−ik·m(z) − k²Q(z)/4), z = (μ, ν).
/// The Green function maps it to w̃(z′) exp(−(i/2) z′ᵀ Λ2 Λ1ᵀ z′) with z = Λ1ᵀ z′, so the covariance form
/// transforms as S = Λ1⁻¹ (S0 + 2i·sym(Λ2Λ1ᵀ)|_{k=1}) Λ1⁻ᵀ and the means as (λ, δ) = Λ1⁻¹(λ0, δ0).
/// The result is renormalized (the Gaussian family carries unit mass by construction).
inline GaussianTomogram green_apply_gaussian(const GaussianTomogram& g0, const DampingParams& p, double t) {
  g0.require_positive_definite();
  const LambdaSet lam = lambda_closed_form(p, 1.0, t);

  const Mat2c L1 = lam.L1;
  const complex det = L1.determinant();
  if (!(std::abs(det) > 0.0) || !is_finite(det)) {
    throw InvariantViolation("green_apply_gaussian: Lambda1 is singular");
  }
  const Mat2c L1inv = L1.inverse();

  Mat2c S0;
  S0 << g0.C, 0.5 * g0.E, 0.5 * g0.E, g0.D;
  const Mat2c P = lam.L2 * L1.transpose();
  const Mat2c sym = 0.5 * (P + P.transpose());
  const Mat2c inner = S0 + complex(0.0, 2.0) * sym;
  const Mat2c S = L1inv * inner * L1inv.transpose();

  Eigen::Vector2cd mean0(g0.lambda, g0.delta);
  const Eigen::Vector2cd mean = L1inv * mean0;

  const double s_scale = std::max(1.0, S.cwiseAbs().maxCoeff());
  const double m_scale = std::max(1.0, mean.cwiseAbs().maxCoeff());
  if (S.imag().cwiseAbs().maxCoeff() > 1e-12 * s_scale || mean.imag().cwiseAbs().maxCoeff() > 1e-12 * m_scale) {
    throw InvariantViolation("green_apply_gaussian: propagated Gaussian has an imaginary part");
  }

  GaussianTomogram g{mean(0).real(), mean(1).real(), S(0, 0).real(), S(1, 1).real(),
                     S(0, 1).real() + S(1, 0).real()};
  return g;
}

}  // namespace tomodyn
