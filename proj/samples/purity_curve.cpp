// Prints the purity of an initially coherent state under a chosen damping, next to its limit.
//
//   sample_purity [u_re u_im v_re v_im]

#include <cstdio>
#include <cstdlib>
#include <variant>

#include "tomodyn/tomodyn.hpp"

int main(int argc, char** argv) {
  using tomodyn::complex;
  complex u(1.0, 0.0);
  complex v(1.0, 2.0);
  if (argc == 5) {
    u = {std::atof(argv[1]), std::atof(argv[2])};
    v = {std::atof(argv[3]), std::atof(argv[4])};
  }
  const tomodyn::DampingParams p(u, v);
  const tomodyn::CoherentAmplitude alpha(complex(0.5, 0.0));

  std::printf("kappa = %.6g, s = %.6g\n", p.kappa(), p.s());
  for (int i = 0; i <= 10; ++i) {
    const double t = 0.5 * i;
    const tomodyn::GaussianTomogram g = tomodyn::evolve_coherent(alpha, p, t);
    std::printf("t = %4.1f  C = %10.6f  D = %10.6f  E = %10.6f  purity = %.9f\n", t, g.C, g.D, g.E,
                tomodyn::purity(g));
  }

  const auto lim = tomodyn::asymptotic_purity(p);
  if (const auto* l = std::get_if<tomodyn::Limit>(&lim)) {
    std::printf("limit = %.9f\n", l->value);
  } else if (std::holds_alternative<tomodyn::ConstantOne>(lim)) {
    std::printf("limit: purity stays 1\n");
  } else {
    std::printf("limit: purity decays to 0\n");
  }
  return 0;
}
