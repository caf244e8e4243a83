#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "hypeval/representation.hpp"

using namespace hypeval;

namespace {
const ModulusPair kPair = make_modulus_pair(1.0, std::sqrt(2.0));
const Complex kLambda(0.12, 0.05);

double next_uniform(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1p-53; }

Complex rand_c(std::mt19937_64& rng, double scale) {
  return Complex(scale * (2.0 * next_uniform(rng) - 1.0),
                 scale * (2.0 * next_uniform(rng) - 1.0));
}

Complex gauss_probe(Complex z, Complex c) {
  const Complex d = z - c;
  return std::exp(-d * d);
}

FunctionHandle gaussian_handle(Complex c) {
  FunctionHandle h;
  h.eval = [c](Complex z) { return gauss_probe(z, c); };
  h.growth_rate = -4.0;
  return h;
}

// max over sample points of |af - bf| / scale for Gaussian probes
double op_mismatch(const DifferenceOperator& a, const DifferenceOperator& b) {
  std::mt19937_64 rng(7);
  double worst = 0.0;
  for (int p = 0; p < 2; ++p) {
    const Complex c = rand_c(rng, 0.5);
    const auto f = [c](Complex z) { return gauss_probe(z, c); };
    for (int k = 0; k < 6; ++k) {
      const Complex z = rand_c(rng, 1.2);
      const Complex va = a.apply(f, z), vb = b.apply(f, z);
      worst = std::max(worst,
                       std::abs(va - vb) / std::max({std::abs(va), std::abs(vb), 1.0}));
    }
  }
  return worst;
}
}  // namespace

TEST_CASE("shift and multiplier operators") {
  using D = DifferenceOperator;
  const auto f = [](Complex z) { return std::exp(-z * z) * (z + 2.0); };

  CHECK(D::shift_op(0.0).apply(f, Complex(0.4, 0.1)) == f(Complex(0.4, 0.1)));
  CHECK_THROWS_AS(D::mult_op(0.0), DomainError);

  // T_x S_y = e^{2πix/y} S_y T_x
  const Complex x(0.37, -0.21), y(0.9, 0.4);
  const D lhs = D::shift_op(x).compose(D::mult_op(y));
  const D rhs = D::mult_op(y).compose(D::shift_op(x)).scaled(
      std::exp(2.0i * pi * x / y));
  CHECK(op_mismatch(lhs, rhs) < 1e-12);
  CHECK((lhs - rhs).merged().terms().empty());

  // S_y S_{-y} = 1
  const D prod = D::mult_op(y).compose(D::mult_op(-y));
  CHECK((prod - D::identity()).merged().terms().empty());
}

TEST_CASE("generator images") {
  const auto ident = [](Complex z) { return z; };
  const Complex kz =
      pi_lambda(Generator::k, kLambda, kPair).apply(ident, Complex(0.0));
  CHECK(std::abs(kz - Complex(0.0, kPair.w1)) < 1e-15);

  // the group-like element labelled by i(w1-w2)/2 shifts by exactly i*w1
  const DifferenceOperator viahat = pi_xhat(1.0i * kPair.vshift(), kPair);
  const DifferenceOperator k = pi_lambda(Generator::k, kLambda, kPair);
  CHECK((viahat - k).merged().terms().empty());
}

TEST_CASE("algebra relations collapse exactly") {
  using G = Generator;
  const auto op = [&](G g) { return pi_lambda(g, kLambda, kPair); };
  const Complex q = kPair.q(), qt = kPair.q_tilde();

  const auto check_zero = [](const DifferenceOperator& d) {
    CHECK(d.merged().terms().empty());
  };

  check_zero(op(G::k).compose(op(G::k_inv)) - DifferenceOperator::identity());
  check_zero(op(G::k).compose(op(G::e)) - op(G::e).compose(op(G::k)).scaled(q * q));
  check_zero(op(G::k).compose(op(G::f)) -
             op(G::f).compose(op(G::k)).scaled(1.0 / (q * q)));
  check_zero(op(G::e).compose(op(G::f)) - op(G::f).compose(op(G::e)) -
             (op(G::k) - op(G::k_inv)).scaled(1.0 / (q - 1.0 / q)));

  check_zero(op(G::k_tilde).compose(op(G::e_tilde)) -
             op(G::e_tilde).compose(op(G::k_tilde)).scaled(qt * qt));
  check_zero(op(G::e_tilde).compose(op(G::f_tilde)) -
             op(G::f_tilde).compose(op(G::e_tilde)) -
             (op(G::k_tilde) - op(G::k_tilde_inv)).scaled(1.0 / (qt - 1.0 / qt)));

  // the two copies commute
  for (G a : {G::k, G::e, G::f})
    for (G b : {G::k_tilde, G::e_tilde, G::f_tilde})
      check_zero(op(a).compose(op(b)) - op(b).compose(op(a)));
}

TEST_CASE("algebra relations on probe functions") {
  using G = Generator;
  const auto op = [&](G g) { return pi_lambda(g, kLambda, kPair); };
  const Complex q = kPair.q();
  CHECK(op_mismatch(op(G::k).compose(op(G::e)),
                    op(G::e).compose(op(G::k)).scaled(q * q)) < 1e-10);
  CHECK(op_mismatch(op(G::e).compose(op(G::f)) - op(G::f).compose(op(G::e)),
                    (op(G::k) - op(G::k_inv)).scaled(1.0 / (q - 1.0 / q))) < 1e-10);
}

TEST_CASE("conjugation by the group-like part rescales the Weyl generators") {
  using G = Generator;
  const Complex x(0.23, -0.11);
  const DifferenceOperator ad = pi_xhat(x, kPair);
  const DifferenceOperator ad_inv =
      DifferenceOperator::shift_op(-(x + Complex(0.0, kPair.w())));
  CHECK((ad.compose(ad_inv) - DifferenceOperator::identity()).merged().terms().empty());

  const auto conj_by = [&](const DifferenceOperator& d) {
    return ad.compose(d).compose(ad_inv);
  };
  const auto op = [&](G g) { return pi_lambda(g, kLambda, kPair); };
  const Complex q = kPair.q(), qt = kPair.q_tilde();

  const auto check_zero = [](const DifferenceOperator& d) {
    CHECK(d.merged().terms().empty());
  };
  // the automorphism property forces the E and F scalars to be mutually
  // inverse, so F picks up -1/q (consistent with e^{-2π(x+iw)/w2})
  check_zero(conj_by(op(G::k)) - op(G::k));
  check_zero(conj_by(op(G::e)) - op(G::e).scaled(-q * std::exp(2.0 * pi * x / kPair.w2)));
  check_zero(conj_by(op(G::f)) -
             op(G::f).scaled(-std::exp(-2.0 * pi * x / kPair.w2) / q));
  check_zero(conj_by(op(G::e_tilde)) -
             op(G::e_tilde).scaled(-qt * std::exp(2.0 * pi * x / kPair.w1)));
}

TEST_CASE("casimir acts as the expected scalar") {
  CHECK(std::abs(casimir_scalar(Complex(0.0), kPair) - Complex(-2.0)) < 1e-15);

  const DifferenceOperator om = casimir_op(kLambda, kPair).merged();
  REQUIRE(om.terms().size() == 1);
  CHECK(std::abs(om.terms()[0].coeff - casimir_scalar(kLambda, kPair)) < 1e-12);
  CHECK(std::abs(om.terms()[0].rate) < 1e-12);
  CHECK(std::abs(om.terms()[0].shift) < 1e-12);

  // pointwise on a polynomial through the handle interface
  FunctionHandle f;
  f.eval = [](Complex z) { return (z - Complex(0.4, 0.2)) * (z + 0.3) * (z + 0.3); };
  const FunctionHandle of = casimir_apply(kLambda, kPair, f);
  for (Complex z : {Complex(0.2), Complex(-0.7, 0.4), Complex(0.0, 1.1)}) {
    CHECK(std::abs(of(z) / f(z) - casimir_scalar(kLambda, kPair)) < 1e-9);
  }

  // the twin copy collapses to the w1-periodic scalar
  using G = Generator;
  const auto op = [&](G g) { return pi_lambda(g, kLambda, kPair); };
  const Complex qt = kPair.q_tilde();
  const DifferenceOperator omt =
      (op(G::k_tilde).scaled(qt) + op(G::k_tilde_inv).scaled(1.0 / qt) +
       op(G::f_tilde).compose(op(G::e_tilde)).scaled((qt - 1.0 / qt) * (qt - 1.0 / qt)))
          .merged();
  REQUIRE(omt.terms().size() == 1);
  CHECK(std::abs(omt.terms()[0].coeff - casimir_scalar(kLambda, kPair.swapped())) <
        1e-12);
}

TEST_CASE("twisted primitive eigenvalue bookkeeping") {
  CHECK(std::abs(nu_rho(Complex(0.0), kPair) - Complex(2.0)) < 1e-15);
  const Complex r(0.31, -0.04), t(0.12, 0.2);
  CHECK(std::abs(nu_rho(r, kPair) - nu_rho(-r, kPair)) < 1e-14);
  CHECK(std::abs(mu_eigen(r, t, kPair) + mu_eigen(t, r, kPair)) < 1e-14);
}

TEST_CASE("twisted primitive is the expected first-order operator") {
  // Feed the operator a function defined only at z and z + i w1 whose two
  // values satisfy the cosh-quotient recursion; the result must vanish.
  const Complex tau(0.11, 0.02), rho(-0.07, 0.01), lam = kLambda;
  const DifferenceOperator y = twisted_primitive(rho, lam, kPair, PrimitiveKind::plain);
  for (const auto& t : y.terms()) {
    const bool at_zero = std::abs(t.shift) < 1e-14;
    const bool at_up = std::abs(t.shift - Complex(0.0, kPair.w1)) < 1e-14;
    CHECK((at_zero || at_up));
  }

  std::mt19937_64 rng(11);
  const Complex iw(0.0, kPair.w());
  for (int trial = 0; trial < 4; ++trial) {
    const Complex zeta = rand_c(rng, 0.8);
    const Complex c = rand_c(rng, 1.0) + 1.0;
    const Complex m = zeta + Complex(0.0, kPair.w1 / 2.0);
    const auto ch = [&](Complex a) { return std::cosh(pi / kPair.w2 * (m + a)); };
    const Complex an = lam / 2.0 - 1.5 * iw, ad = -lam / 2.0 - 0.5 * iw;
    const Complex ratio = ch(an + 1.0i * tau) * ch(an - 1.0i * tau) /
                          (ch(ad + 1.0i * rho) * ch(ad - 1.0i * rho));
    const auto f = [&](Complex z) {
      if (std::abs(z - zeta) < 1e-12) return c;
      if (std::abs(z - zeta - Complex(0.0, kPair.w1)) < 1e-12) return ratio * c;
      return Complex(0.0);
    };
    const Complex res = y.apply(f, zeta) - mu_eigen(rho, tau, kPair) * c;
    double scale = std::abs(c) * std::max(1.0, std::abs(ratio));
    for (const auto& t : y.terms())
      scale = std::max(scale, std::abs(t.coeff * std::exp(t.rate * zeta) * c));
    CHECK(std::abs(res) < 1e-12 * scale);
  }
}

TEST_CASE("joint eigenfunction of both twisted primitives") {
  const HypGammaContext ctx(kPair);
  const Complex tau(0.11), rho(-0.07), lam(0.12);
  const FunctionHandle h = h_eigenfunction(ctx, tau, rho, lam);

  const DifferenceOperator y = twisted_primitive(rho, lam, kPair, PrimitiveKind::plain);
  const DifferenceOperator yt = twisted_primitive(rho, lam, kPair, PrimitiveKind::tilde);
  const Complex mu = mu_eigen(rho, tau, kPair);
  const Complex mut = mu_eigen_tilde(rho, tau, kPair);

  double worst = 0.0, worst_t = 0.0;
  for (int k = 0; k < 50; ++k) {
    const Complex z(-1.5 + 3.0 * k / 49.0);
    const Complex hv = h(z);
    worst = std::max(worst, std::abs(y.apply(h.eval, z) - mu * hv) /
                                std::max(1.0, std::abs(hv)));
    worst_t = std::max(worst_t, std::abs(yt.apply(h.eval, z) - mut * hv) /
                                    std::max(1.0, std::abs(hv)));
  }
  CHECK(worst < 1e-9);
  CHECK(worst_t < 1e-9);
}

TEST_CASE("eigenfunctions are symmetric in the two moduli") {
  const HypGammaContext ctx(kPair);
  const HypGammaContext swapped(kPair.swapped());
  const Complex tau(0.11, 0.01), rho(-0.07), lam = kLambda;
  const FunctionHandle h1 = h_eigenfunction(ctx, tau, rho, lam);
  const FunctionHandle h2 = h_eigenfunction(swapped, tau, rho, lam);
  for (Complex z : {Complex(0.3), Complex(-0.9, 0.2), Complex(1.4, -0.1)}) {
    CHECK(std::abs(h1(z) - h2(z)) < 1e-10 * std::max(1.0, std::abs(h1(z))));
  }
}

TEST_CASE("second eigenfunction satisfies the adjoint equations") {
  const HypGammaContext ctx(kPair);
  const Complex sigma(0.08, 0.01), ups(0.03, -0.02), lam = kLambda;
  const FunctionHandle fh = f_eigenfunction(ctx, ups, sigma, lam);

  const DifferenceOperator ys =
      twisted_primitive(sigma, std::conj(lam), kPair, PrimitiveKind::adjoint);
  const Complex mu = mu_eigen(std::conj(sigma), std::conj(ups), kPair);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const Complex z(-1.4 + 2.8 * k / 19.0);
    const Complex fv = fh(z);
    worst = std::max(worst, std::abs(ys.apply(fh.eval, z) + mu * fv) /
                                std::max(1.0, std::abs(fv)));
  }
  CHECK(worst < 1e-9);

  // the twin equation comes for free from the swap symmetry
  const HypGammaContext swapped(kPair.swapped());
  const FunctionHandle fh2 = f_eigenfunction(swapped, ups, sigma, lam);
  const DifferenceOperator yst = twisted_primitive(sigma, std::conj(lam),
                                                   kPair.swapped(),
                                                   PrimitiveKind::adjoint);
  const Complex mut = mu_eigen(std::conj(sigma), std::conj(ups), kPair.swapped());
  double worst_t = 0.0;
  for (int k = 0; k < 10; ++k) {
    const Complex z(-1.2 + 2.4 * k / 9.0);
    const Complex fv = fh2(z);
    worst_t = std::max(worst_t, std::abs(yst.apply(fh2.eval, z) + mut * fv) /
                                    std::max(1.0, std::abs(fv)));
  }
  CHECK(worst_t < 1e-9);
}

TEST_CASE("first-order recursion in half-steps") {
  const HypGammaContext ctx(kPair);
  const Complex tau(0.11), rho(-0.07), lam(0.12, 0.04);
  const FunctionHandle h = h_eigenfunction(ctx, tau, rho, lam);
  const Complex iw(0.0, kPair.w());
  const Complex an = lam / 2.0 - 1.5 * iw, ad = -lam / 2.0 - 0.5 * iw;
  for (Complex z : {Complex(0.4), Complex(-0.8, 0.1), Complex(1.3, -0.2)}) {
    const auto ch = [&](Complex a) { return std::cosh(pi / kPair.w2 * (z + a)); };
    const Complex ratio = ch(an + 1.0i * tau) * ch(an - 1.0i * tau) /
                          (ch(ad + 1.0i * rho) * ch(ad - 1.0i * rho));
    const Complex up = h(z + Complex(0.0, kPair.w1 / 2.0));
    const Complex dn = h(z - Complex(0.0, kPair.w1 / 2.0));
    CHECK(std::abs(up - ratio * dn) < 1e-9 * std::max(1.0, std::abs(up)));
  }
}

TEST_CASE("eigenfunction growth rates along the axis") {
  const HypGammaContext ctx(kPair);
  const Complex tau(0.11), rho(-0.07), lam(0.12, 0.3);
  const FunctionHandle h = h_eigenfunction(ctx, tau, rho, lam);
  const FunctionHandle f = f_eigenfunction(ctx, Complex(0.03), Complex(0.08), lam);

  const auto fit_slope = [](const FunctionHandle& fn) {
    const double lo = 5.0 * kPair.w(), hi = 15.0 * kPair.w();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int n = 24;
    for (int k = 0; k < n; ++k) {
      const double x = lo + (hi - lo) * k / (n - 1.0);
      const double y = std::log(std::abs(fn(Complex(x))));
      sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
  };

  CHECK(std::abs(fit_slope(h) - h.growth_rate) < 0.02 * std::abs(h.growth_rate));
  CHECK(std::abs(fit_slope(f) - f.growth_rate) < 0.02 * std::abs(f.growth_rate));
}

TEST_CASE("sesquilinear pairing basics") {
  QuadratureSpec spec;
  spec.truncation = 12.0;

  const FunctionHandle g0 = gaussian_handle(Complex(0.0));
  CHECK(std::abs(sesquilinear(g0, g0, spec) - std::sqrt(pi / 2.0)) < 1e-10);

  const FunctionHandle f = gaussian_handle(Complex(0.3, 0.1));
  const FunctionHandle g = gaussian_handle(Complex(-0.2, -0.25));
  CHECK(std::abs(sesquilinear(f, g, spec) - std::conj(sesquilinear(g, f, spec))) <
        1e-11);

  FunctionHandle grow = g0;
  grow.growth_rate = 3.0;
  CHECK_THROWS_AS(sesquilinear(grow, grow, spec), DivergenceError);
}

TEST_CASE("pairing adjoints realize the star structure") {
  using G = Generator;
  QuadratureSpec spec;
  spec.truncation = 12.0;
  spec.abs_tol = 1e-12;
  const Complex lam = kLambda, lamb = std::conj(kLambda);
  const auto op = [&](G g, Complex l) { return pi_lambda(g, l, kPair); };

  struct Pairing {
    const char* name;
    DifferenceOperator x;
    DifferenceOperator xstar;
  };
  const Pairing cases[] = {
      {"K", op(G::k, lam), op(G::k, lamb)},
      {"E", op(G::e, lam), op(G::e, lamb).scaled(-1.0)},
      {"F", op(G::f, lam), op(G::f, lamb).scaled(-1.0)},
      {"FK", op(G::f, lam).compose(op(G::k, lam)),
       op(G::k, lamb).compose(op(G::f, lamb)).scaled(-1.0)},
      {"EKinv", op(G::e, lam).compose(op(G::k_inv, lam)),
       op(G::k_inv, lamb).compose(op(G::e, lamb)).scaled(-1.0)},
  };

  const FunctionHandle f = gaussian_handle(Complex(0.25, 0.1));
  const FunctionHandle g = gaussian_handle(Complex(-0.15, -0.2));
  for (const auto& c : cases) {
    const Complex lhs = sesquilinear(apply_operator(c.x, f), g, spec);
    const Complex rhs = sesquilinear(f, apply_operator(c.xstar, g), spec);
    INFO(c.name);
    CHECK(std::abs(lhs - rhs) < 1e-6 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("radial coefficients") {
  const GammaSet gamma{{Complex(0.05), Complex(0.04), Complex(0.03), Complex(0.02)}};
  const Complex x(0.21, 0.03);

  const RadialCoeffs r = radial_coeffs(kPair, gamma, x);

  // with all couplings zero the three closed forms share one coefficient
  const GammaSet zero{};
  const RadialCoeffs r0 = radial_coeffs(kPair, zero, Complex(0.17));
  const Complex a0 = kPair.qpow(-1.0) * coeff_A(kPair, zero, Complex(0.17));
  CHECK(std::abs(r0.B - a0) < 1e-13);

  // C is even in x
  const RadialCoeffs rm = radial_coeffs(kPair, gamma, -x);
  CHECK(std::abs(r.C - rm.C) < 1e-12 * std::max(1.0, std::abs(r.C)));

  // the up-shift coefficient only sees the first two couplings, symmetrically
  GammaSet sw = gamma;
  std::swap(sw.g[0], sw.g[1]);
  const RadialCoeffs rs = radial_coeffs(kPair, sw, x);
  CHECK(std::abs(r.B - rs.B) < 1e-13);

  // down-shift coefficient is the up-shift one with tail couplings at -x
  const GammaSet tail_first{{gamma.g[2], gamma.g[3], gamma.g[0], gamma.g[1]}};
  const RadialCoeffs rt = radial_coeffs(kPair, tail_first, -x);
  CHECK(std::abs(r.D - rt.B) < 1e-13);
}
