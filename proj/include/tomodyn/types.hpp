#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace tomodyn {

using complex = std::complex<double>;

/// Rejected input (non-finite values, out-of-range arguments, malformed sequences).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Evaluation requested where the quantity is distributional or undefined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A value violates a structural invariant (degenerate quadratic form, residual imaginary part, ...).
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline bool is_finite(complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// Below this |Im(uv*)| (scaled by max(1, |u|²+|v|²)) the Im(uv*)=0 formulas are used.
inline constexpr double kBranchThreshold = 1e-6;

/// Couplings (u, v) of the single Lindblad operator V = u·x + v·p, units ħ = m = ω = 1.
///
/// The derived combinations are cached once at construction:
///   kappa = Im(u v*)   (phase-space contraction rate, < 0 means damping)
///   r     = Re(u v*)
///   s     = |u|² + |v|²
///   m     = |u|² − |v|²
class DampingParams {
 public:
  DampingParams(complex u, complex v) : u_(u), v_(v) {
    if (!is_finite(u) || !is_finite(v)) {
      throw ValidationError("damping couplings u, v must be finite");
    }
    const complex uv = u * std::conj(v);
    kappa_ = uv.imag();
    r_ = uv.real();
    s_ = std::norm(u) + std::norm(v);
    m_ = std::norm(u) - std::norm(v);
  }

  complex u() const { return u_; }
  complex v() const { return v_; }
  double kappa() const { return kappa_; }
  double r() const { return r_; }
  double s() const { return s_; }
  double m() const { return m_; }
  double u_norm2() const { return std::norm(u_); }
  double v_norm2() const { return std::norm(v_); }

  /// True when the Im(uv*) = 0 branch of the closed-form solution applies.
  bool kappa_is_zero() const { return std::abs(kappa_) <= kBranchThreshold * std::max(1.0, s_); }

 private:
  complex u_;
  complex v_;
  double kappa_ = 0.0;
  double r_ = 0.0;
  double s_ = 0.0;
  double m_ = 0.0;
};

inline DampingParams damping_params(complex u, complex v) { return DampingParams(u, v); }

/// Complex amplitude of an initial coherent state.
struct CoherentAmplitude {
  complex alpha{0.0, 0.0};

  CoherentAmplitude() = default;
  explicit CoherentAmplitude(complex a) : alpha(a) {
    if (!is_finite(a)) throw ValidationError("coherent amplitude must be finite");
  }
};

/// Gaussian tomogram
///   w(X, μ, ν) = (π Q)^{-1/2} exp(−(X − λμ − δν)² / Q),   Q = Cμ² + Dν² + Eμν.
///
/// lambda = <x>, delta = <p>; in covariance terms C = 2σ_xx, D = 2σ_pp, E = 4σ_xp.
struct GaussianTomogram {
  double lambda = 0.0;
  double delta = 0.0;
  double C = 1.0;
  double D = 1.0;
  double E = 0.0;

  /// Tomogram of the coherent state |alpha> (C = D = 1, E = 0).
  static GaussianTomogram coherent(const CoherentAmplitude& a) {
    return {std::sqrt(2.0) * a.alpha.real(), std::sqrt(2.0) * a.alpha.imag(), 1.0, 1.0, 0.0};
  }

  double quadratic_form(double mu, double nu) const { return C * mu * mu + D * nu * nu + E * mu * nu; }
  double mean(double mu, double nu) const { return lambda * mu + delta * nu; }

  /// D − E²/(4C); together with C this gives CD − E²/4 without overflowing for huge C, D.
  double schur_complement() const { return D - (0.5 * E) * (E / (2.0 * C)); }

  /// CD − E²/4 (≥ 1 for physical states, = 1 for pure ones).
  double heisenberg_determinant() const { return C * schur_complement(); }

  bool is_positive_definite() const {
    return std::isfinite(C) && std::isfinite(D) && std::isfinite(E) && C > 0.0 && D > 0.0 &&
           schur_complement() > 0.0;
  }

  void require_positive_definite() const {
    if (!is_positive_definite()) {
      throw InvariantViolation("Gaussian tomogram quadratic form is not positive definite (C=" +
                               std::to_string(C) + ", D=" + std::to_string(D) + ", E=" + std::to_string(E) +
                               ")");
    }
  }
};

/// Time derivatives of the five Gaussian fields along a trajectory.
struct TomogramRates {
  double lambda = 0.0;
  double delta = 0.0;
  double C = 0.0;
  double D = 0.0;
  double E = 0.0;
};

}  // namespace tomodyn
