#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "errors.hpp"
#include "hyp_gamma.hpp"
#include "params.hpp"

namespace hypeval {

// q-Pochhammer symbols, terminating balanced series, the Askey-Wilson
// polynomials r_n, and the second-order difference operator they satisfy.
// Everything here lives on |q| = 1, so none of the |q| < 1 summation tricks
// apply; all series are finite products/sums evaluated exactly.

inline Complex q_pochhammer(Complex a, Complex q, int n) {
  Complex acc = 1.0, qk = 1.0;
  for (int k = 0; k < n; ++k) {
    acc *= (1.0 - a * qk);
    qk *= q;
  }
  return acc;
}

// Terminating balanced 4phi3.  The caller supplies the termination depth n
// explicitly (a1 is numerically q^{-n}, but termination is never inferred
// from floating-point coincidence).  Terms are built by exact ratio
// recursion rather than recomputed Pochhammer products.
inline Complex phi43_terminating(Complex a1, Complex a2, Complex a3, Complex a4,
                                 Complex b1, Complex b2, Complex b3, Complex q,
                                 Complex z, int n) {
  if (n < 0) throw DomainError("terminating series needs n >= 0");
  Complex sum = 1.0, term = 1.0, qk = 1.0;
  for (int k = 0; k < n; ++k) {
    const Complex den = (1.0 - q * qk) * (1.0 - b1 * qk) * (1.0 - b2 * qk) * (1.0 - b3 * qk);
    if (std::abs(den) < 1e-14)
      throw PoleError("vanishing denominator factor in terminating series", den);
    term *= (1.0 - a1 * qk) * (1.0 - a2 * qk) * (1.0 - a3 * qk) * (1.0 - a4 * qk) * z / den;
    sum += term;
    qk *= q;
  }
  return sum;
}

// r_n(x) = 4phi3(q^{-2n}, abcd q^{2n-2}, a e^{2 pi x/w2}, a e^{-2 pi x/w2};
//               ab, ac, ad; q^2, q^2),
// a polynomial of degree n in cosh(2 pi x / w2) with r_0 = 1 and r_n even in x.
inline Complex aw_polynomial(int n, Complex x, const AWParams& p, const ModulusPair& pair) {
  const Complex u = std::exp(2.0 * pi * x / pair.w2);
  const Complex Q = p.base;
  return phi43_terminating(pair.qpow(-2.0 * n), p.abcd() * pair.qpow(2.0 * (n - 1)),
                           p.a * u, p.a / u, p.a * p.b, p.a * p.c, p.a * p.d, Q, Q, n);
}

// Coefficient of the Askey-Wilson difference operator, in the exponential
// product form (the removable sinh zeros are factored, so this is the
// cancellation-free evaluation):
//
//   A(gamma; x) = prod_j (1 - e^{2 pi (iw + i gamma_j + x)/w2})
//                 / ((1 - e^{4 pi x/w2})(1 - e^{4 pi (x+iw)/w2})).
inline Complex coeff_A(const ModulusPair& pair, const GammaSet& gamma, Complex x) {
  const Complex iw(0.0, pair.w());
  const Complex den = (1.0 - std::exp(4.0 * pi * x / pair.w2)) *
                      (1.0 - std::exp(4.0 * pi * (x + iw) / pair.w2));
  if (std::abs(den) < 1e-13)
    throw PoleError("difference-operator coefficient evaluated at a denominator zero", x);
  Complex num = 1.0;
  for (int j = 0; j < 4; ++j)
    num *= 1.0 - std::exp(2.0 * pi * (iw + 1.0i * gamma.g[j] + x) / pair.w2);
  return num / den;
}

// Same coefficient in its sinh/cosh factorization.  Combining
// 1 - e^{2s} = -2 e^s sinh(s) over all six factors fixes the overall
// constant at 4; with that constant the two forms are identical.
inline Complex coeff_A_sinh(const ModulusPair& pair, const GammaSet& gamma, Complex x) {
  const double w = pair.w();
  const Complex pref =
      std::exp(pi * 1.0i * (pair.w1 + 2.0 * gamma.ghat0()) / pair.w2);
  const Complex den = std::sinh(2.0 * pi * x / pair.w2) *
                      std::sinh(2.0 * pi * (x + Complex(0.0, w)) / pair.w2);
  if (std::abs(den) < 1e-13)
    throw PoleError("difference-operator coefficient evaluated at a sinh zero", x);
  Complex prod = 1.0;
  for (int j = 0; j < 4; ++j)
    prod *= std::cosh(pi / pair.w2 * (x + 0.5i * pair.w1 + 1.0i * gamma.g[j]));
  return -4.0 * pref * prod / den;
}

struct AWOperatorSpec {
  GammaSet gamma;
  ModulusPair pair;
  enum Step { step_w1, step_w2 } step = step_w1;
};

// L f(x) = A(x)(f(x+iw1) - f(x)) + A(-x)(f(x-iw1) - f(x)); the w2-step
// variant uses the coefficient and shift with the moduli interchanged.
template <class F>
Complex apply_aw(const AWOperatorSpec& spec, const F& f, Complex x) {
  const ModulusPair pair =
      spec.step == AWOperatorSpec::step_w1 ? spec.pair : spec.pair.swapped();
  const Complex shift(0.0, pair.w1);
  const Complex Ap = coeff_A(pair, spec.gamma, x);
  const Complex Am = coeff_A(pair, spec.gamma, -x);
  const Complex f0 = f(x);
  return Ap * (f(x + shift) - f0) + Am * (f(x - shift) - f0);
}

// Eigenvalue function: the operator with step i*wa acting in a w_b-periodic
// setting has eigenvalues
//   v(wa, wb; lambda) = -2 e^{pi i wa/wb + 2 pi i ghat0/wb}
//                       (cosh(2 pi lambda/wb) + cosh(pi i wa/wb + 2 pi i ghat0/wb)).
inline Complex eigenvalue_v(double wa, double wb, const GammaSet& gamma, Complex lambda) {
  const Complex c = pi * 1.0i * (wa + 2.0 * gamma.ghat0()) / wb;
  return -2.0 * std::exp(c) * (std::cosh(2.0 * pi * lambda / wb) + std::cosh(c));
}

// c-function and normalization constant built from the hyperbolic gamma.
inline Complex c_function(const HypGammaContext& ctx, const GammaSet& gamma, Complex y) {
  Complex num = 1.0;
  for (int j = 0; j < 4; ++j) num *= ctx(y - 1.0i * gamma.g[j]);
  return num * ctx.recip(2.0 * y + Complex(0.0, ctx.pair().w()));
}

inline Complex normalization_N(const HypGammaContext& ctx, const GammaSet& gamma) {
  const Complex iw(0.0, ctx.pair().w());
  Complex acc = 1.0;
  for (int j = 1; j < 4; ++j)
    acc *= ctx(1.0i * gamma.g[0] + 1.0i * gamma.g[j] + iw);
  return acc;
}

}  // namespace hypeval
