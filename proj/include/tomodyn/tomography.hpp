#pragma once

// Tomogram <-> density-matrix transforms on a uniform coordinate grid, tomographic purity, and the
// operator-level idempotency check w ⋆ w = w  <=>  ρ² = ρ.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "tomodyn/gaussian_dynamics.hpp"
#include "tomodyn/types.hpp"

namespace tomodyn {

/// Uniform grid x_i = x_min + i·h, h = (x_max − x_min)/(n − 1).
class CoordinateGrid {
 public:
  CoordinateGrid(double x_min, double x_max, int n) : x_min_(x_min), x_max_(x_max), n_(n) {
    if (n < 16) throw ValidationError("CoordinateGrid: need at least 16 points");
    if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_max > x_min)) {
      throw ValidationError("CoordinateGrid: need finite x_min < x_max");
    }
  }

  /// Grid on [−x_max, x_max].
  static CoordinateGrid symmetric(double x_max, int n) { return CoordinateGrid(-x_max, x_max, n); }
  static CoordinateGrid standard() { return symmetric(8.0, 256); }

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  int size() const { return n_; }
  double spacing() const { return (x_max_ - x_min_) / static_cast<double>(n_ - 1); }
  double x(int i) const { return x_min_ + spacing() * static_cast<double>(i); }

  /// Trapezoid weight of node i (without the factor h).
  double weight(int i) const { return (i == 0 || i == n_ - 1) ? 0.5 : 1.0; }

 private:
  double x_min_;
  double x_max_;
  int n_;
};

/// ρ(x_i, x_j) sampled on a grid. Invariants are checked on demand, not enforced at construction:
/// density_square produces a Hermitian but unnormalized matrix of the same type.
struct DensityMatrixGrid {
  CoordinateGrid grid;
  Eigen::MatrixXcd values;

  /// h Σ_i w_i ρ(x_i, x_i)
  complex trace() const {
    complex acc = 0.0;
    for (int i = 0; i < grid.size(); ++i) acc += grid.weight(i) * values(i, i);
    return acc * grid.spacing();
  }

  double hermiticity_error() const { return (values - values.adjoint()).cwiseAbs().maxCoeff(); }

  /// Smallest eigenvalue of the discretized operator h·√(w_i w_j)·ρ_ij.
  double min_eigenvalue() const {
    const int n = grid.size();
    Eigen::MatrixXcd a(n, n);
    const double h = grid.spacing();
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) a(i, j) = h * std::sqrt(grid.weight(i) * grid.weight(j)) * values(i, j);
    }
    const Eigen::MatrixXcd herm = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
  }
};

/// Coherent-state tomogram (π(μ² + ν²))^{-1/2} exp(−[X − √2Reα·μ − √2Imα·ν]²/(μ² + ν²)).
inline double coherent_tomogram_eval(const CoherentAmplitude& a, double X, double mu, double nu) {
  const double q = mu * mu + nu * nu;
  if (q == 0.0) throw DomainError("tomogram is distributional at mu = nu = 0");
  const double y = X - std::sqrt(2.0) * a.alpha.real() * mu - std::sqrt(2.0) * a.alpha.imag() * nu;
  return std::exp(-y * y / q) / std::sqrt(std::numbers::pi * q);
}

inline double gaussian_tomogram_eval(const GaussianTomogram& g, double X, double mu, double nu) {
  if (mu == 0.0 && nu == 0.0) throw DomainError("tomogram is distributional at mu = nu = 0");
  const double q = g.quadratic_form(mu, nu);
  if (!(q > 0.0)) throw InvariantViolation("tomogram quadratic form is not positive at (mu, nu)");
  const double y = X - g.mean(mu, nu);
  return std::exp(-y * y / q) / std::sqrt(std::numbers::pi * q);
}

/// ∫ w(X, μ, ν) dX by trapezoid quadrature over mean ± 20 standard deviations.
inline double normalization_check(const GaussianTomogram& g, double mu, double nu) {
  if (mu == 0.0 && nu == 0.0) throw DomainError("tomogram is distributional at mu = nu = 0");
  const double q = g.quadratic_form(mu, nu);
  if (!(q > 0.0)) throw InvariantViolation("tomogram quadratic form is not positive at (mu, nu)");
  const double sd = std::sqrt(0.5 * q);
  const double center = g.mean(mu, nu);
  constexpr int n = 2001;
  const double lo = center - 20.0 * sd;
  const double h = 40.0 * sd / (n - 1);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double wgt = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    acc += wgt * gaussian_tomogram_eval(g, lo + h * i, mu, nu);
  }
  return acc * h;
}

struct DensityTransform {
  DensityMatrixGrid rho;
  double trace_deviation = 0.0;
  bool trace_warning = false;  // grid too narrow/coarse for the state
};

/// ρ(x, x′) = (1/2π)∫ w(Y, μ, x − x′) exp[i(Y − μ(x + x′)/2)] dμ dY for a Gaussian tomogram.
///
/// The Y integral is the characteristic function exp(i·m − Q/4) and the μ integral is Gaussian, giving
///   ρ(x, x′) = (πC)^{-1/2} exp(iδν − Dν²/4 + (i(λ − x̄) − Eν/4)²/C),  ν = x − x′, x̄ = (x + x′)/2.
inline DensityTransform tomogram_to_density(const GaussianTomogram& g, const CoordinateGrid& grid) {
  g.require_positive_definite();
  const int n = grid.size();
  Eigen::MatrixXcd values(n, n);
  const double pref = 1.0 / std::sqrt(std::numbers::pi * g.C);
  const complex I(0.0, 1.0);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double nu = grid.x(i) - grid.x(j);
      const double xbar = 0.5 * (grid.x(i) + grid.x(j));
      const complex lin = I * (g.lambda - xbar) - 0.25 * g.E * nu;
      values(i, j) = pref * std::exp(I * g.delta * nu - 0.25 * g.D * nu * nu + lin * lin / g.C);
    }
  }
  DensityTransform out{DensityMatrixGrid{grid, std::move(values)}, 0.0, false};
  out.trace_deviation = std::abs(out.rho.trace() - 1.0);
  out.trace_warning = out.trace_deviation > 1e-6;
  return out;
}

struct TomogramSample {
  double value = 0.0;
  double imag_residual = 0.0;
  bool under_resolved = false;  // |ν| < 4h: oscillatory kernel not resolved by the grid
};

/// w(X, μ, ν) = (1/(2π|ν|)) ∫∫ ρ(y, z) exp{iμ(y² − z²)/(2ν) − iX(y − z)/ν} dy dz  (trapezoid in y and z).
inline TomogramSample density_to_tomogram(const DensityMatrixGrid& rho, double X, double mu, double nu) {
  if (nu == 0.0) throw DomainError("density_to_tomogram: nu = 0 is excluded (kernel degenerates)");
  const CoordinateGrid& grid = rho.grid;
  const int n = grid.size();
  const double h = grid.spacing();

  // The kernel factorizes as f(y)·conj(f(z)) with f(y) = exp(i(μy²/2 − Xy)/ν).
  Eigen::VectorXcd f(n);
  for (int i = 0; i < n; ++i) {
    const double y = grid.x(i);
    f(i) = grid.weight(i) * std::exp(complex(0.0, (0.5 * mu * y * y - X * y) / nu));
  }
  const complex acc = f.transpose() * rho.values * f.conjugate();
  const complex w = acc * (h * h / (2.0 * std::numbers::pi * std::abs(nu)));
  return {w.real(), std::abs(w.imag()), std::abs(nu) < 4.0 * h};
}

/// (ρ²)(x, x′) = ∫ ρ(x, y) ρ(y, x′) dy by trapezoid quadrature; not renormalized.
inline DensityMatrixGrid density_square(const DensityMatrixGrid& rho) {
  const int n = rho.grid.size();
  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i) w(i) = rho.grid.weight(i) * rho.grid.spacing();
  Eigen::MatrixXcd sq = rho.values * w.asDiagonal() * rho.values;
  return {rho.grid, std::move(sq)};
}

/// tr ρ² = h² Σ_ij w_i w_j ρ_ij ρ_ji.
inline double purity_from_density(const DensityMatrixGrid& rho) {
  const int n = rho.grid.size();
  const double h = rho.grid.spacing();
  complex acc = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) acc += rho.grid.weight(i) * rho.grid.weight(j) * rho.values(i, j) * rho.values(j, i);
  }
  acc *= h * h;
  if (std::abs(acc.imag()) > 1e-8) throw InvariantViolation("purity_from_density: tr rho^2 is not real");
  return acc.real();
}

/// μ0 = (1/2π)∫ w(X, μ, ν) w(Y, −μ, −ν) e^{i(X+Y)} dX dY dμ dν.
///
/// The X and Y integrals are characteristic functions whose product is exp(−Q(μ, ν)/2); in polar
/// coordinates the radial integral is 1/q(θ), q(θ) = C cos²θ + D sin²θ + E cosθ sinθ, leaving
/// (1/2π)∫₀^{2π} dθ/q(θ), which the periodic trapezoid rule integrates to machine precision.
inline double purity_overlap_integral(const GaussianTomogram& g) {
  g.require_positive_definite();
  // the rule converges like ρ^n with ρ set by the eccentricity of q; 1024 nodes cover eccentric forms
  constexpr int nodes = 1024;
  const double qmax = 0.5 * (g.C + g.D) + std::hypot(0.5 * (g.C - g.D), 0.5 * g.E);
  const double qmin = (g.C * g.D - 0.25 * g.E * g.E) / qmax;
  const double ratio = qmax / qmin;
  const int n = ratio < 1e3 ? nodes : static_cast<int>(std::min(1e7, nodes * std::sqrt(ratio / 1e3)));
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double th = 2.0 * std::numbers::pi * i / n;
    acc += 1.0 / g.quadratic_form(std::cos(th), std::sin(th));
  }
  return acc / n;
}

struct ProbeTriple {
  double X = 0.0;
  double mu = 0.0;
  double nu = 0.0;
};

/// 25 probe points around the state's mean: five frame angles with sin θ ≥ 1/2, five X offsets each.
inline std::vector<ProbeTriple> default_tomogram_probes(const GaussianTomogram& g) {
  std::vector<ProbeTriple> probes;
  for (int a = 1; a <= 5; ++a) {
    const double th = std::numbers::pi * a / 6.0;
    const double mu = std::cos(th);
    const double nu = std::sin(th);
    const double center = g.mean(mu, nu);
    const double sd = std::sqrt(0.5 * g.quadratic_form(mu, nu));
    for (double off : {-1.5, -0.5, 0.0, 0.5, 1.5}) probes.push_back({center + off * sd, mu, nu});
  }
  return probes;
}

struct StarProductReport {
  double sup_norm_error = 0.0;
  bool is_idempotent = false;
};

/// Grid-route check of w ⋆ w = w: ρ from the tomogram, σ = ρ², tomogram of σ on the probe set,
/// compared with w itself.
inline StarProductReport star_product_check(const GaussianTomogram& g, const CoordinateGrid& grid) {
  const DensityTransform tr = tomogram_to_density(g, grid);
  const DensityMatrixGrid sq = density_square(tr.rho);
  double err = 0.0;
  for (const ProbeTriple& pr : default_tomogram_probes(g)) {
    const TomogramSample s = density_to_tomogram(sq, pr.X, pr.mu, pr.nu);
    err = std::max(err, std::abs(s.value - gaussian_tomogram_eval(g, pr.X, pr.mu, pr.nu)));
  }
  const bool pure = std::abs(purity(g) - 1.0) < 1e-6;
  return {err, err < 5e-3 && pure};
}

}  // namespace tomodyn
