#pragma once

// Self-validation: runs every cross-route check of the library and reports max error vs tolerance.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "tomodyn/gaussian_dynamics.hpp"
#include "tomodyn/green_function.hpp"
#include "tomodyn/pde_residual.hpp"
#include "tomodyn/tomography.hpp"

namespace tomodyn {

struct CheckResult {
  std::string name;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
};

struct ResidualRow {
  std::string params;
  ProbePoint point;
  double residual = 0.0;
};

struct ValidationOptions {
  bool verbose = false;
  std::optional<double> tolerance_override;  // replaces every tolerance (fault injection)
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  std::vector<ResidualRow> residual_table;  // filled when verbose

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
  }
};

struct NamedParams {
  std::string label;
  DampingParams p;
};

/// The five coupling pairs used by every sweep: (1, i), (1, 1), (1, 10i), (1, 1+2i), (0, 0).
inline std::vector<NamedParams> reference_params() {
  return {
      {"u=1,v=i", DampingParams({1.0, 0.0}, {0.0, 1.0})},
      {"u=1,v=1", DampingParams({1.0, 0.0}, {1.0, 0.0})},
      {"u=1,v=10i", DampingParams({1.0, 0.0}, {0.0, 10.0})},
      {"u=1,v=1+2i", DampingParams({1.0, 0.0}, {1.0, 2.0})},
      {"u=0,v=0", DampingParams({0.0, 0.0}, {0.0, 0.0})},
  };
}

/// Field-wise difference, each field relative to max(1, |field|).
inline double field_difference(const GaussianTomogram& a, const GaussianTomogram& b) {
  auto rel = [](double x, double y) { return std::abs(x - y) / std::max({1.0, std::abs(x), std::abs(y)}); };
  return std::max({rel(a.lambda, b.lambda), rel(a.delta, b.delta), rel(a.C, b.C), rel(a.D, b.D), rel(a.E, b.E)});
}

/// Random couplings with |u|, |v| ≤ radius (uniform in the disc).
inline complex random_coupling(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r = radius * std::sqrt(unit(rng));
  const double th = 2.0 * std::numbers::pi * unit(rng);
  return std::polar(r, th);
}

namespace detail {

inline double check_lambda_ode(const std::vector<NamedParams>& ps) {
  double err = 0.0;
  for (const auto& np : ps) {
    for (double k : {0.5, 1.0, 2.0}) {
      for (double t : {0.5, 1.0, 3.0, 5.0}) {
        err = std::max(err, lambda_difference(lambda_closed_form(np.p, k, t), lambda_ode_integrate(np.p, k, t, 1e-3)));
      }
    }
  }
  return err;
}

inline double check_lambda_structure(const std::vector<NamedParams>& ps) {
  double err = 0.0;
  for (const auto& np : ps) {
    for (double k : {0.5, 1.0, 2.0}) {
      for (double t : {0.5, 1.0, 3.0, 5.0}) {
        const LambdaSet lam = lambda_closed_form(np.p, k, t);
        const LambdaSet ode = lambda_ode_integrate(np.p, k, t, 1e-3);
        err = std::max(err, lam.L3.cwiseAbs().maxCoeff());
        err = std::max(err, ode.L3.cwiseAbs().maxCoeff());
        err = std::max(err, std::abs(lam.L1.determinant() * lam.L4.determinant() - 1.0));
      }
    }
  }
  return err;
}

inline double check_lambda_k_scaling(const std::vector<NamedParams>& ps) {
  double err = 0.0;
  for (const auto& np : ps) {
    for (double k : {0.5, 1.0, 2.0}) {
      for (double t : {0.5, 1.0, 3.0, 5.0}) {
        const Mat2c a = lambda_closed_form(np.p, k, t).L2;
        const Mat2c b = lambda_closed_form(np.p, 2.0 * k, t).L2;
        const double scale = std::max(1e-300, b.cwiseAbs().maxCoeff());
        if (scale > 1e-300) err = std::max(err, (b - 4.0 * a).cwiseAbs().maxCoeff() / scale);
      }
    }
  }
  return err;
}

inline std::vector<double> sweep_times() { return {0.5, 1.0, 3.0, 5.0}; }

inline std::vector<CoherentAmplitude> sweep_amplitudes() {
  return {CoherentAmplitude({0.0, 0.0}), CoherentAmplitude({1.0, 0.0}), CoherentAmplitude({0.6, -0.8})};
}

inline double check_green_cross_route(const std::vector<NamedParams>& ps) {
  double err = 0.0;
  for (const auto& np : ps) {
    for (const auto& a : sweep_amplitudes()) {
      for (double t : sweep_times()) {
        err = std::max(err, field_difference(green_apply_gaussian(GaussianTomogram::coherent(a), np.p, t),
                                             evolve_coherent(a, np.p, t)));
      }
    }
  }
  return err;
}

inline double check_green_semigroup(const std::vector<NamedParams>& ps) {
  double err = 0.0;
  const GaussianTomogram g0{0.4, -1.1, 2.0, 1.5, 0.7};
  for (const auto& np : ps) {
    for (auto [t1, t2] : {std::pair{0.3, 0.9}, std::pair{1.0, 2.0}, std::pair{2.5, 2.5}}) {
      const GaussianTomogram direct = green_apply_gaussian(g0, np.p, t1 + t2);
      const GaussianTomogram composed = green_apply_gaussian(green_apply_gaussian(g0, np.p, t1), np.p, t2);
      err = std::max(err, field_difference(direct, composed));
    }
  }
  return err;
}

inline const CoherentAmplitude& residual_amplitude() {
  static const CoherentAmplitude a({0.7, -0.4});
  return a;
}

inline double check_residual_lattice(const std::vector<NamedParams>& ps, std::vector<ResidualRow>* table) {
  const std::vector<ProbePoint> pts = probe_lattice();
  double err = 0.0;
  for (const auto& np : ps) {
    const ResidualSweep sw = residual_sweep(residual_amplitude(), np.p, pts);
    err = std::max(err, sw.max_residual);
    if (table != nullptr) {
      for (std::size_t i = 0; i < pts.size(); ++i) table->push_back({np.label, pts[i], sw.residuals[i]});
    }
  }
  return err;
}

inline double check_residual_homogeneity(const std::vector<NamedParams>& ps) {
  double err = 0.0;
  const std::vector<ProbePoint> pts = probe_lattice(3, -2.0, 2.0, 1.5, 3.0);
  for (const auto& np : ps) {
    for (const ProbePoint& q : pts) {
      const double base = pde_residual(residual_amplitude(), np.p, q);
      for (double s : {-3.0, 0.1, 2.5}) {
        const double scaled = pde_residual(residual_amplitude(), np.p, {s * q.X, s * q.mu, s * q.nu, q.t});
        // the relative residual of a homogeneous solution is scale invariant up to rounding
        err = std::max(err, std::abs(scaled - base));
      }
    }
  }
  return err;
}

inline double check_fd_partials(const std::vector<NamedParams>& ps) {
  double err = 0.0;
  const std::vector<ProbePoint> pts = probe_lattice(3, -2.0, 2.0, 1.5, 3.0);
  for (const auto& np : ps) {
    for (const ProbePoint& q : pts) {
      const Partials an = analytic_partials(residual_amplitude(), np.p, q);
      const Partials fd = finite_difference_partials(residual_amplitude(), np.p, q);
      const double scale = std::max({std::abs(an.w), std::abs(an.w_X), std::abs(an.w_XX), std::abs(an.w_mu),
                                     std::abs(an.w_nu), std::abs(an.w_t)});
      if (!(scale > 1e-300)) continue;
      for (auto [x, y] : {std::pair{an.w_X, fd.w_X}, std::pair{an.w_XX, fd.w_XX}, std::pair{an.w_mu, fd.w_mu},
                          std::pair{an.w_nu, fd.w_nu}, std::pair{an.w_t, fd.w_t}}) {
        err = std::max(err, std::abs(x - y) / scale);
      }
    }
  }
  return err;
}

/// States whose spatial extent fits the standard grid (|x| ≤ 8).
inline double check_fd_residual(const std::vector<NamedParams>& ps) {
  double err = 0.0;
  const std::vector<ProbePoint> pts = probe_lattice(3, -2.0, 2.0, 1.5, 3.0);
  for (const auto& np : ps) {
    for (const ProbePoint& q : pts) {
      err = std::max(err, finite_difference_residual(residual_amplitude(), np.p, q));
    }
  }
  return err;
}

inline std::vector<GaussianTomogram> transform_states() {
  std::vector<GaussianTomogram> gs;
  gs.push_back({0.0, 0.0, 1.0, 1.0, 0.0});
  gs.push_back({0.0, 0.0, 3.0, 3.0, 0.0});
  gs.push_back({1.0, -0.5, 1.6, 0.9, 0.4});
  const CoherentAmplitude a({0.5, 0.3});
  gs.push_back(evolve_coherent(a, DampingParams({1.0, 0.0}, {0.0, 1.0}), 1.3));
  gs.push_back(evolve_coherent(a, DampingParams({1.0, 0.0}, {1.0, 0.0}), 0.4));
  gs.push_back(evolve_coherent(a, DampingParams({1.0, 0.0}, {1.0, 2.0}), 0.7));
  gs.push_back(evolve_coherent(a, DampingParams({1.0, 0.0}, {0.0, 10.0}), 0.01));
  return gs;
}

/// Probe set for the round trip: frames with |ν| ≥ 0.3, X within two standard deviations of the mean.
inline std::vector<ProbeTriple> round_trip_probes(const GaussianTomogram& g) {
  std::vector<ProbeTriple> out;
  for (double mu : {-1.0, -0.4, 0.0, 0.5, 1.0}) {
    for (double nu : {-1.2, -0.3, 0.3, 0.8, 1.5}) {
      const double center = g.mean(mu, nu);
      const double sd = std::sqrt(0.5 * g.quadratic_form(mu, nu));
      for (double off : {-2.0, -1.0, 0.0, 1.0, 2.0}) out.push_back({center + off * sd, mu, nu});
    }
  }
  return out;
}

}  // namespace detail

inline ValidationReport run_validation(const ValidationOptions& opts = {}) {
  ValidationReport report;
  const std::vector<NamedParams> ps = reference_params();
  auto add = [&](std::string name, double err, double tol, std::string detail = {}) {
    const double t = opts.tolerance_override.value_or(tol);
    report.checks.push_back({std::move(name), err, t, err <= t, std::move(detail)});
  };
  auto add_guarded = [&](const std::string& name, double tol, const std::function<double()>& fn) {
    try {
      add(name, fn(), tol);
    } catch (const std::exception& e) {
      add(name, std::numeric_limits<double>::infinity(), tol, std::string("exception: ") + e.what());
    }
  };

  add_guarded("initial_condition", 0.0, [&] {
    double err = 0.0;
    for (const auto& np : ps) {
      const Coefficients q = coefficients(np.p, 0.0);
      err = std::max({err, std::abs(q.C - 1.0), std::abs(q.D - 1.0), std::abs(q.E)});
    }
    return err;
  });

  add_guarded("lambda_closed_form_vs_ode", 1e-7, [&] { return detail::check_lambda_ode(ps); });
  add_guarded("lambda_structure", 1e-10, [&] { return detail::check_lambda_structure(ps); });
  add_guarded("lambda2_k_squared_scaling", 1e-12, [&] { return detail::check_lambda_k_scaling(ps); });
  add_guarded("green_vs_closed_form", 1e-8, [&] { return detail::check_green_cross_route(ps); });
  add_guarded("green_semigroup", 1e-8, [&] { return detail::check_green_semigroup(ps); });

  add_guarded("pde_residual_lattice", 1e-8, [&] {
    return detail::check_residual_lattice(ps, opts.verbose ? &report.residual_table : nullptr);
  });
  add_guarded("pde_residual_homogeneity", 1e-8, [&] { return detail::check_residual_homogeneity(ps); });
  add_guarded("analytic_vs_finite_difference_partials", 1e-6, [&] { return detail::check_fd_partials(ps); });

  add_guarded("pde_residual_finite_difference", 1e-5, [&] { return detail::check_fd_residual(ps); });

  add_guarded("branch_agreement", 1e-5, [&] {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ut(0.0, 5.0);
    double err = 0.0;
    for (int i = 0; i < 200; ++i) {
      // κ = 1e-7 exactly: u real, v = b + i·c with Im(u v*) = -u c
      const double u = 0.5 + ut(rng) / 2.5;
      const complex v(ut(rng) - 2.5, -1e-7 / u);
      const DampingParams p({u, 0.0}, v);
      const double t = ut(rng);
      const Coefficients a = coefficients_kappa_nonzero(p, t);
      const Coefficients b = coefficients_kappa_zero(p, t);
      auto rel = [](double x, double y) { return std::abs(x - y) / std::max(1.0, std::abs(y)); };
      err = std::max({err, rel(a.C, b.C), rel(a.D, b.D), rel(a.E, b.E)});
    }
    return err;
  });

  add_guarded("heisenberg_bound", 1e-9, [&] {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ut(0.0, 10.0);
    double err = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const DampingParams p(random_coupling(rng, 5.0), random_coupling(rng, 5.0));
      const GaussianTomogram g = evolve_coherent(CoherentAmplitude(), p, ut(rng));
      err = std::max(err, 1.0 - g.heisenberg_determinant());
    }
    return err;
  });

  add_guarded("purity_preservation", 1e-12, [&] {
    double err = 0.0;
    for (double gamma : {0.5, 1.0, 2.0}) {
      const DampingParams p({std::sqrt(gamma), 0.0}, {0.0, std::sqrt(gamma)});
      for (const complex alpha : {complex(0.0, 0.0), complex(1.0, 0.0), complex(1.0, 1.0)}) {
        for (int i = 0; i < 50; ++i) {
          err = std::max(err, std::abs(purity(evolve_coherent(CoherentAmplitude(alpha), p, 10.0 * i / 49.0)) - 1.0));
        }
      }
    }
    return err;
  });

  add_guarded("asymptotic_limit_bound", 1e-12, [&] {
    std::mt19937_64 rng(13);
    double err = 0.0;
    int n = 0;
    while (n < 1000) {
      const DampingParams p(random_coupling(rng, 3.0), random_coupling(rng, 3.0));
      if (!(p.kappa() < 0.0) || p.kappa_is_zero()) continue;
      ++n;
      const auto lim = asymptotic_purity(p);
      const double value = std::get<Limit>(lim).value;
      err = std::max(err, value - 1.0);
      // closed form vs 1/√(d² − c² − e²)
      const auto cde = std::get<CdeConstants>(constants_cde(p));
      const double alt = 1.0 / std::sqrt(cde.d * cde.d - cde.c * cde.c - cde.e * cde.e);
      err = std::max(err, std::abs(alt - value) / value);
    }
    return err;
  });

  add_guarded("asymptotic_convergence", 1e-6, [&] {
    double err = 0.0;
    for (const auto& np : ps) {
      if (!(np.p.kappa() < 0.0)) continue;
      const double value = std::get<Limit>(asymptotic_purity(np.p)).value;
      // |purity(t) − limit| ≤ K e^{2κt}; at t = 20/|κ| the bound is far below the tolerance
      const double t = 20.0 / std::abs(np.p.kappa());
      err = std::max(err, std::abs(purity(evolve_coherent(CoherentAmplitude(), np.p, t)) - value));
    }
    return err;
  });

  add_guarded("tomogram_homogeneity", 1e-12, [&] {
    double err = 0.0;
    for (const GaussianTomogram& g : detail::transform_states()) {
      for (auto pr : detail::round_trip_probes(g)) {
        const double w = gaussian_tomogram_eval(g, pr.X, pr.mu, pr.nu);
        for (double s : {-3.0, 0.1, 2.5}) {
          const double ws = gaussian_tomogram_eval(g, s * pr.X, s * pr.mu, s * pr.nu) * std::abs(s);
          err = std::max(err, std::abs(ws - w) / std::max(w, 1e-300));
        }
      }
    }
    return err;
  });

  add_guarded("tomogram_normalization", 1e-8, [&] {
    double err = 0.0;
    for (const GaussianTomogram& g : detail::transform_states()) {
      for (auto [mu, nu] : {std::pair{1.0, 0.0}, std::pair{0.0, 1.0}, std::pair{1.0, 1.0}, std::pair{5.0, 0.0},
                            std::pair{-0.3, 2.0}}) {
        err = std::max(err, std::abs(normalization_check(g, mu, nu) - 1.0));
      }
    }
    return err;
  });

  // grid-route checks share the transformed density matrices
  const CoordinateGrid grid = CoordinateGrid::standard();
  std::vector<std::pair<GaussianTomogram, DensityTransform>> dens;
  try {
    for (const GaussianTomogram& g : detail::transform_states()) dens.emplace_back(g, tomogram_to_density(g, grid));
  } catch (const std::exception& e) {
    add("density_transform", std::numeric_limits<double>::infinity(), 0.0, e.what());
  }

  add_guarded("density_round_trip", 2e-3, [&] {
    double err = 0.0;
    for (const auto& [g, tr] : dens) {
      for (auto pr : detail::round_trip_probes(g)) {
        const TomogramSample s = density_to_tomogram(tr.rho, pr.X, pr.mu, pr.nu);
        err = std::max(err, std::abs(s.value - gaussian_tomogram_eval(g, pr.X, pr.mu, pr.nu)));
      }
    }
    return err;
  });
  add_guarded("density_trace", 1e-6, [&] {
    double err = 0.0;
    for (const auto& d : dens) err = std::max(err, d.second.trace_deviation);
    return err;
  });
  add_guarded("density_hermiticity", 1e-10, [&] {
    double err = 0.0;
    for (const auto& d : dens) err = std::max(err, d.second.rho.hermiticity_error());
    return err;
  });
  add_guarded("density_positivity", 1e-8, [&] {
    double err = 0.0;
    for (const auto& d : dens) err = std::max(err, -d.second.rho.min_eigenvalue());
    return std::max(err, 0.0);
  });
  add_guarded("purity_formula_vs_overlap_integral", 1e-10, [&] {
    double err = 0.0;
    for (const auto& np : ps) {
      for (double t : detail::sweep_times()) {
        const GaussianTomogram g = evolve_coherent(CoherentAmplitude(), np.p, t);
        err = std::max(err, std::abs(purity(g) - purity_overlap_integral(g)));
      }
    }
    for (const auto& d : dens) err = std::max(err, std::abs(purity(d.first) - purity_overlap_integral(d.first)));
    return err;
  });
  add_guarded("purity_formula_vs_density_trace", 1e-4, [&] {
    double err = 0.0;
    for (const auto& d : dens) err = std::max(err, std::abs(purity(d.first) - purity_from_density(d.second.rho)));
    return err;
  });

  add_guarded("star_product_idempotency_pure", 5e-3, [&] {
    double err = 0.0;
    const CoherentAmplitude a({0.5, 0.3});
    const DampingParams keep({1.0, 0.0}, {0.0, 1.0});
    for (const GaussianTomogram& g :
         {GaussianTomogram{}, evolve_coherent(a, keep, 0.8), evolve_coherent(a, keep, 3.0)}) {
      const StarProductReport r = star_product_check(g, grid);
      if (!r.is_idempotent) return std::numeric_limits<double>::infinity();
      err = std::max(err, r.sup_norm_error);
    }
    return err;
  });
  add_guarded("star_product_mixed_state_fails", 0.0, [&] {
    const StarProductReport r = star_product_check({0.0, 0.0, 3.0, 3.0, 0.0}, grid);
    return r.is_idempotent ? 1.0 : 0.0;
  });

  return report;
}

inline std::string format_report(const ValidationReport& rep, bool verbose) {
  std::string out;
  char buf[256];
  for (const CheckResult& c : rep.checks) {
    std::snprintf(buf, sizeof buf, "%-4s %-40s max_error=%-12.4e tolerance=%.1e", c.passed ? "PASS" : "FAIL",
                  c.name.c_str(), c.max_error, c.tolerance);
    out += buf;
    if (!c.detail.empty()) out += "  (" + c.detail + ")";
    out += '\n';
  }
  if (verbose && !rep.residual_table.empty()) {
    out += "\nresidual table (params, X, mu, nu, t, residual)\n";
    for (const ResidualRow& r : rep.residual_table) {
      std::snprintf(buf, sizeof buf, "%-12s %8.3f %8.3f %8.3f %8.3f %.3e\n", r.params.c_str(), r.point.X, r.point.mu,
                    r.point.nu, r.point.t, r.residual);
      out += buf;
    }
  }
  const auto failed = std::count_if(rep.checks.begin(), rep.checks.end(), [](const auto& c) { return !c.passed; });
  std::snprintf(buf, sizeof buf, "\n%zu checks, %ld failed\n", rep.checks.size(), static_cast<long>(failed));
  out += buf;
  return out;
}

}  // namespace tomodyn
