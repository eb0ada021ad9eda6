// Small tour: coherent states, the composition law, and the two star products.
#include <cstdio>

#include "fockcalc/fockcalc.hpp"

using namespace fockcalc;

int main() {
  const TruncationSpec spec{2, 16};
  const double h = 1.0;

  const PhasePoint X({0.3, -0.1}, {0.2, 0.4});
  const PhasePoint Y({-0.2, 0.1}, {0.1, 0.0});
  const auto psi = coherent_state(X, h, spec);
  std::printf("|Psi_X| = %.15f, tail mass beyond N=16: %.3e\n", psi.vector.norm(), psi.dropped_mass);
  std::printf("I(Psi_X, Psi_Y) vs exp(X.Y/2h) Psi_{X+Y}: residual %.3e\n", coherent_product_check(X, Y, h, spec));

  // u_(1,0) composed with u_(0,1) gives u_(1,1) with weight sqrt(1!1!/(1!0!0!1!)) = 1.
  const auto u10 = FockVector::basis_vector(spec, MultiIndex({1, 0}));
  const auto u01 = FockVector::basis_vector(spec, MultiIndex({0, 1}));
  const auto u11 = compose_I(u10, u01).vector;
  std::printf("I(u_10, u_01) has %zu term(s), coefficient %.1f\n", u11.coefficients().size(),
              u11.coefficient(MultiIndex({1, 1})).real());

  const PhaseSymbol q = PhaseSymbol::q(1, 0), p = PhaseSymbol::p(1, 0);
  const Complex c1 = c_k_weyl(q, p, 1).eval(PhasePoint(1));
  std::printf("C_1^weyl(q, p) = %.2f%+.2fi\n", c1.real(), c1.imag());

  // q *_weyl p - p *_weyl q = i h.
  const auto comm = weyl_compose(q, p, h).sum() - weyl_compose(p, q, h).sum();
  const Complex v = comm.eval(PhasePoint(1));
  std::printf("q * p - p * q = %.2f%+.2fi\n", v.real(), v.imag());

  // The Weyl operator of q is sqrt(h/2)(a + a*).
  const OperatorMatrix Q = weyl_op(q, h, TruncationSpec{1, 4});
  std::printf("<u_1, Op(q) u_0> = %.6f (sqrt(1/2) = %.6f)\n", Q(1, 0).real(), std::sqrt(0.5));
  return 0;
}
