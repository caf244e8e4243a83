#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "hypeval/functions.hpp"
#include "hypeval/representation.hpp"

using namespace hypeval;

namespace {

const ModulusPair kPair = make_modulus_pair(1.0, std::sqrt(2.0));
const GammaSet kGamma{{0.05, 0.04, 0.03, 0.02}};
const EvalPoint kPt{Complex(0.1, 0.0), Complex(0.12, 0.0)};

// One context for the whole file: the g-cache is the dominant cost and every
// case below evaluates at the same pair.
const HypGammaContext& ctx() {
  static HypGammaContext c(kPair);
  return c;
}

double rel(Complex a, Complex b) { return std::abs(a - b) / (std::abs(a) + std::abs(b)); }

// S at the discrete point la_n as the residue-sum limit collapses it: a
// finite balanced series with an explicit prefactor.  Its equality with the
// Askey-Wilson polynomial r_n is a Sears transformation, so matching
// aw_polynomial here is an independent algebraic check of the reduction.
// Anchors below are frozen from a 30-digit mpmath evaluation of both sides.
Complex s_discrete_closed(const ModulusPair& pr, const GammaSet& gamma, int n, Complex x) {
  const AWParams p = aw_params(pr, gamma);
  const Complex Q = p.base;
  const Complex u = std::exp(-2.0 * pi * x / pr.w2);
  const Complex Qn = pr.qpow(2.0 * (1 - n));
  Complex pre = q_pochhammer(u / p.c * Qn, Q, n) * q_pochhammer(u / p.d * Qn, Q, n) /
                (q_pochhammer(Qn / (p.a * p.c), Q, n) * q_pochhammer(Qn / (p.a * p.d), Q, n));
  for (int k = 0; k < n; ++k) pre /= u * p.a;
  return pre * phi43_terminating(pr.qpow(-2.0 * n), u * p.a, u * p.b, Qn / (p.c * p.d),
                                 u / p.c * Qn, u / p.d * Qn, p.a * p.b, Q, Q, n);
}

}  // namespace

TEST_CASE("discrete reduction: closed form equals the polynomial", "[functions][reduction]") {
  const AWParams p = aw_params(kPair, kGamma);
  // frozen mpmath anchors for the polynomial itself
  REQUIRE(std::abs(aw_polynomial(1, Complex(0.1), p, kPair) -
                   Complex(0.45915166157411707)) < 1e-12);
  REQUIRE(std::abs(aw_polynomial(2, Complex(0.37), p, kPair) -
                   Complex(-2.1981830115013596)) < 1e-12);
  for (int n = 0; n <= 3; ++n)
    for (double x : {0.1, 0.37, 0.8}) {
      const Complex lhs = s_discrete_closed(kPair, kGamma, n, Complex(x));
      const Complex rhs = aw_polynomial(n, Complex(x), p, kPair);
      INFO("n=" << n << " x=" << x);
      REQUIRE(rel(lhs, rhs) < 1e-9);
    }
  // degree zero is identically one, independent of x
  REQUIRE(std::abs(s_discrete_closed(kPair, kGamma, 0, Complex(1.7, 0.3)) - 1.0) < 1e-12);
}

TEST_CASE("gauge quotient: trivial couplings, one-step ratio, decay rate",
          "[functions][gauge]") {
  const GammaSet zero{};
  REQUIRE(std::abs(delta_gauge(ctx(), zero, Complex(0.3, 0.1)) - 1.0) < 1e-12);

  // Delta(x+iw1/2)/Delta(x-iw1/2) telescopes to a cosh ratio through the
  // first difference equation of G.
  const Complex h(0.0, 0.5 * kPair.w1);
  for (Complex x : {Complex(0.23, 0.11), Complex(-0.41, 0.05), Complex(0.8, -0.17)}) {
    const Complex lhs = delta_gauge(ctx(), kGamma, x + h) / delta_gauge(ctx(), kGamma, x - h);
    Complex rhs = 1.0;
    const double c = pi / kPair.w2;
    rhs *= std::cosh(c * (x + 1.0i * kGamma.g[2])) * std::cosh(c * (x + 1.0i * kGamma.g[3]));
    rhs /= std::cosh(c * (x - 1.0i * kGamma.g[0])) * std::cosh(c * (x - 1.0i * kGamma.g[1]));
    REQUIRE(rel(lhs, rhs) < 1e-10);
  }

  // 1/Delta decays like exp(-alpha ghat0 x) to the right: fit the log-slope.
  const double a = kPair.alpha() * kGamma.ghat0().real();
  double s1 = 0.0, s2 = 0.0;
  const double x1 = 6.0, x2 = 18.0;
  s1 = std::log(std::abs(1.0 / delta_gauge(ctx(), kGamma, Complex(x1))));
  s2 = std::log(std::abs(1.0 / delta_gauge(ctx(), kGamma, Complex(x2))));
  REQUIRE(std::abs((s2 - s1) / (x2 - x1) + a) < 0.02 * a);
}

TEST_CASE("pairing integral: dual exchange of the two variables", "[functions][duality]") {
  const auto base = psi(ctx(), kGamma, kPt);
  REQUIRE(base.domain.psi_ok);
  REQUIRE(base.domain.window_ok);
  REQUIRE(base.quadrature.error_estimate < 1e-9 * std::abs(base.value));

  const auto flipped = psi(ctx(), dual_gamma(kGamma), {kPt.lambda, kPt.x});
  REQUIRE(rel(base.value, flipped.value) < 1e-7);

  // same value through an explicitly longer path
  QuadratureSpec longer;
  longer.truncation = base.contour_used.truncation + 2.0;
  REQUIRE(rel(base.value, psi(ctx(), kGamma, kPt, longer).value) < 1e-9);
}

TEST_CASE("pairing integral: chart sign flips and joint reflection",
          "[functions][symmetry]") {
  const Complex base = psi(ctx(), kGamma, kPt).value;
  const Complex r = kGamma.rho(), s = kGamma.sigma();
  const Complex t = kGamma.tau(), u = kGamma.upsilon();
  REQUIRE(rel(psi(ctx(), gamma_from_rstu(-r, s, t, u), kPt).value, base) < 1e-7);
  REQUIRE(rel(psi(ctx(), gamma_from_rstu(r, -s, t, u), kPt).value, base) < 1e-7);
  REQUIRE(rel(psi(ctx(), gamma_from_rstu(r, s, -t, u), kPt).value, base) < 1e-7);
  REQUIRE(rel(psi(ctx(), gamma_from_rstu(r, s, t, -u), kPt).value, base) < 1e-7);
  // negating x alone exchanges the x-carrying blocks with the fixed ones:
  // (rho,sigma,tau,upsilon) -> (tau,upsilon,rho,sigma)
  REQUIRE(rel(psi(ctx(), gamma_from_rstu(t, u, r, s), {-kPt.x, kPt.lambda}).value, base) <
          1e-7);
  // z -> -z in the integral negates both variables and transposes the chart
  // pairs: (rho,sigma,tau,upsilon) -> (upsilon,tau,sigma,rho)
  REQUIRE(rel(psi(ctx(), gamma_from_rstu(u, t, s, r), {-kPt.x, -kPt.lambda}).value, base) <
          1e-7);
}

TEST_CASE("modulus symmetries: swap and common rescaling", "[functions][symmetry]") {
  const HypGammaContext swapped(kPair.swapped());
  REQUIRE(rel(psi(swapped, kGamma, kPt).value, psi(ctx(), kGamma, kPt).value) < 1e-9);

  const double nu = 1.3;
  const HypGammaContext scaled(kPair.scaled(nu));
  GammaSet gs;
  for (int j = 0; j < 4; ++j) gs.g[j] = nu * kGamma.g[j];
  REQUIRE(rel(r_function(scaled, gs, {nu * kPt.x, nu * kPt.lambda}).value,
              r_function(ctx(), kGamma, kPt).value) < 1e-6);
}

TEST_CASE("radial reduction certifies the spectral eigenvalue", "[functions][radial]") {
  const Complex la = kPt.lambda;
  for (double x0 : {0.55, 0.8}) {
    const RadialCoeffs rc = radial_coeffs(kPair, kGamma, Complex(x0));
    const Complex pp = psi(ctx(), kGamma, {Complex(x0, kPair.w1), la}).value;
    const Complex p0 = psi(ctx(), kGamma, {Complex(x0, 0.0), la}).value;
    const Complex pm = psi(ctx(), kGamma, {Complex(x0, -kPair.w1), la}).value;
    const Complex ev = -2.0 * std::cosh(2.0 * pi * la / kPair.w2);
    const Complex lhs = rc.B * pp + rc.C * p0 + rc.D * pm;
    const double scale = std::abs(rc.B * pp) + std::abs(rc.C * p0) + std::abs(rc.D * pm) +
                         std::abs(ev * p0);
    INFO("x0=" << x0);
    REQUIRE(std::abs(lhs - ev * p0) < 1e-6 * scale);
  }

  // twin step: swapped moduli, shifts by i w2, eigenvalue read off w1
  const double x0 = 0.55;
  const RadialCoeffs rc = radial_coeffs(kPair.swapped(), kGamma, Complex(x0));
  const Complex pp = psi(ctx(), kGamma, {Complex(x0, kPair.w2), la}).value;
  const Complex p0 = psi(ctx(), kGamma, {Complex(x0, 0.0), la}).value;
  const Complex pm = psi(ctx(), kGamma, {Complex(x0, -kPair.w2), la}).value;
  const Complex ev = -2.0 * std::cosh(2.0 * pi * la / kPair.w1);
  const Complex lhs = rc.B * pp + rc.C * p0 + rc.D * pm;
  const double scale = std::abs(rc.B * pp) + std::abs(rc.C * p0) + std::abs(rc.D * pm) +
                       std::abs(ev * p0);
  REQUIRE(std::abs(lhs - ev * p0) < 1e-6 * scale);
}

TEST_CASE("hypergeometric and matrix-coefficient sides agree in the window",
          "[functions][main]") {
  REQUIRE(verify_r_equals_s(ctx(), kGamma, kPt) < 1e-6);
  // the same statement seen from the dual side, with a set whose dual is
  // strictly inside the window
  const GammaSet g2{{0.06, 0.04, 0.03, 0.02}};
  REQUIRE(verify_r_equals_s(ctx(), dual_gamma(g2), {kPt.lambda, kPt.x}) < 1e-6);
}

TEST_CASE("both functions exchange variables under the dual set", "[functions][duality]") {
  const GammaSet dual = dual_gamma(kGamma);
  REQUIRE(rel(r_function(ctx(), kGamma, kPt).value,
              r_function(ctx(), dual, {kPt.lambda, kPt.x}).value) < 1e-7);
  REQUIRE(rel(s_function(ctx(), kGamma, kPt).value,
              s_function(ctx(), dual, {kPt.lambda, kPt.x}).value) < 1e-7);
}

TEST_CASE("normalized form is symmetric under the Weyl actions", "[functions][symmetry]") {
  const Complex r = kGamma.rho(), s = kGamma.sigma();
  const Complex t = kGamma.tau(), u = kGamma.upsilon();

  const Complex sn = normalized_form(ctx(), WhichFunction::s, kGamma, kPt);
  REQUIRE(rel(normalized_form(ctx(), WhichFunction::s, gamma_from_rstu(-r, s, t, u), kPt),
              sn) < 1e-6);
  REQUIRE(rel(normalized_form(ctx(), WhichFunction::s, gamma_from_rstu(r, s, t, -u), kPt),
              sn) < 1e-6);

  const Complex rn = normalized_form(ctx(), WhichFunction::r, kGamma, kPt);
  GammaSet perm = kGamma;  // cycle the last three couplings
  perm.g = {kGamma.g[0], kGamma.g[2], kGamma.g[3], kGamma.g[1]};
  REQUIRE(rel(normalized_form(ctx(), WhichFunction::r, perm, kPt), rn) < 1e-6);
  GammaSet swap01 = kGamma;
  swap01.g = {kGamma.g[1], kGamma.g[0], kGamma.g[2], kGamma.g[3]};
  REQUIRE(rel(normalized_form(ctx(), WhichFunction::r, swap01, kPt), rn) < 1e-6);
  GammaSet flip01 = kGamma;  // even sign change
  flip01.g = {-kGamma.g[0], -kGamma.g[1], kGamma.g[2], kGamma.g[3]};
  REQUIRE(rel(normalized_form(ctx(), WhichFunction::r, flip01, kPt), rn) < 1e-6);
}

TEST_CASE("difference equations hold in both variables and both moduli",
          "[functions][diffeq]") {
  const Complex s0 = s_function(ctx(), kGamma, kPt).value;
  const GammaSet dual = dual_gamma(kGamma);

  const double sc1 = std::abs(eigenvalue_v(kPair.w1, kPair.w2, kGamma, kPt.lambda) * s0);
  REQUIRE(aw_residual(ctx(), WhichFunction::s, AWOperatorSpec::step_w1,
                      VariableSide::geometric, kGamma, kPt) < 1e-6 * sc1);

  const double sc2 = std::abs(eigenvalue_v(kPair.w2, kPair.w1, kGamma, kPt.lambda) * s0);
  REQUIRE(aw_residual(ctx(), WhichFunction::s, AWOperatorSpec::step_w2,
                      VariableSide::geometric, kGamma, kPt) < 1e-6 * sc2);

  const double sc3 = std::abs(eigenvalue_v(kPair.w1, kPair.w2, dual, kPt.x) * s0);
  REQUIRE(aw_residual(ctx(), WhichFunction::s, AWOperatorSpec::step_w1,
                      VariableSide::spectral, kGamma, kPt) < 1e-6 * sc3);

  REQUIRE(aw_residual(ctx(), WhichFunction::r, AWOperatorSpec::step_w1,
                      VariableSide::geometric, kGamma, kPt) < 1e-6 * sc1);
}

TEST_CASE("wronskian of the two solutions vanishes", "[functions][casorati]") {
  const Complex z(0.3, 0.0);
  const Complex la = kPt.lambda;
  const Complex h(0.0, 0.5 * kPair.w1);

  const Complex sp = s_function(ctx(), kGamma, {z + h, la}).value;
  const Complex sm = s_function(ctx(), kGamma, {z - h, la}).value;
  const Complex rp = r_function(ctx(), kGamma, {z + h, la}).value;
  const Complex rm = r_function(ctx(), kGamma, {z - h, la}).value;
  const double scale = std::abs(sp * rm) + std::abs(sm * rp);
  REQUIRE(std::abs(sp * rm - sm * rp) < 1e-6 * scale);

  // the quotient by the gauge solution of the same first-order equation is
  // iw1-periodic (and identically zero once the vanishing above is known)
  const Complex step(0.0, kPair.w1);
  const Complex m0 = casorati(ctx(), kGamma, z, la) / casorati_gauge(ctx(), kGamma, z);
  const Complex m1 =
      casorati(ctx(), kGamma, z + step, la) / casorati_gauge(ctx(), kGamma, z + step);
  CHECK(std::abs(m1 - m0) < 1e-6);
}

TEST_CASE("gauge solution satisfies the first-order recurrence", "[functions][casorati]") {
  const Complex h(0.0, 0.5 * kPair.w1);
  for (Complex z : {Complex(0.23, 0.11), Complex(-0.4, 0.3), Complex(0.7, -0.2)}) {
    const Complex lhs = casorati_gauge(ctx(), kGamma, z + h) * coeff_A(kPair, kGamma, z);
    const Complex rhs = casorati_gauge(ctx(), kGamma, z - h) * coeff_A(kPair, kGamma, -z);
    INFO("z=" << z);
    REQUIRE(rel(lhs, rhs) < 1e-10);
  }
}

TEST_CASE("integral representations extrapolate onto the polynomials",
          "[functions][reduction]") {
  QuadratureSpec tight;
  tight.abs_tol = 1e-15;
  tight.rel_tol = 1e-8;  // the gamma-product noise floor rules out much below this
  REQUIRE(std::abs(r_at_discrete(ctx(), kGamma, 0, kPt.x, tight) - 1.0) < 1e-6);
  const AWParams p = aw_params(kPair, kGamma);
  REQUIRE(rel(s_at_discrete(ctx(), kGamma, 1, Complex(0.1), tight),
              aw_polynomial(1, Complex(0.1), p, kPair)) < 1e-6);
}

TEST_CASE("growth along the geometric axis matches the spectral envelope",
          "[functions][growth]") {
  const Complex la(0.1, 0.2);
  const double alpha = kPair.alpha();
  const double bound = alpha * (std::abs(la.imag()) - kGamma.ghat0().real() - kPair.w());

  const double slope_s = growth_estimate(ctx(), WhichFunction::s, kGamma, la, {}, 0.0, 0.0, 6);
  REQUIRE(std::abs(slope_s - bound) < 0.05 * std::abs(bound));

  // doubling |Im la| moves the rate by exactly alpha * d|Im la|
  const Complex la2(0.1, 0.4);
  const double slope2 = growth_estimate(ctx(), WhichFunction::s, kGamma, la2, {}, 0.0, 0.0, 6);
  REQUIRE(std::abs((slope2 - slope_s) - alpha * 0.2) < 0.1 * alpha * 0.2);

  // the other representation stays inside the same envelope
  const double slope_r = growth_estimate(ctx(), WhichFunction::r, kGamma, la, {}, 0.0, 0.0, 5);
  REQUIRE(slope_r < bound + 0.05 * std::abs(bound));
}

TEST_CASE("block decomposition of the pairing integral at large separation",
          "[functions][growth]") {
  const Complex x(4.0, 0.0), la(0.1, 0.2);
  QuadratureSpec spec;
  spec.abs_tol = 1e-22;  // value ~ 1e-8; refinement must be relative-driven
  spec.rel_tol = 3e-10;
  spec.noise = 1e-12;  // the integrand below is a product of strip quadratures
  const auto direct = psi(ctx(), kGamma, {x, la}, spec);
  REQUIRE(direct.domain.psi_ok);
  const double T = direct.contour_used.truncation;

  const Complex ihw(0.0, 0.5 * kPair.w());
  const Complex la2 = 0.5 * la;
  const Complex it = 1.0i * kGamma.tau(), is = 1.0i * kGamma.sigma();
  const Complex ir = 1.0i * kGamma.rho(), iu = 1.0i * kGamma.upsilon();
  auto f = [&](Complex zz) {
    return ctx()(zz + x + la2 - ihw + it) * ctx()(zz + x + la2 - ihw - it) *
           ctx()(zz - la2 - ihw + is) * ctx()(zz - la2 - ihw - is) *
           ctx().recip(zz + x - la2 + ihw + ir) * ctx().recip(zz + x - la2 + ihw - ir) *
           ctx().recip(zz + la2 + ihw + iu) * ctx().recip(zz + la2 + ihw - iu);
  };

  const double chart = std::max({std::abs(kGamma.rho().imag()), std::abs(kGamma.sigma().imag()),
                                 std::abs(kGamma.tau().imag()), std::abs(kGamma.upsilon().imag())});
  const double eps = std::max(kPair.w1, kPair.w2) + 0.5 * std::abs(la.real()) + chart;
  REQUIRE(x.real() > 2.0 * eps);

  const double cuts[6] = {-T, -x.real() - eps, -x.real() + eps, -eps, eps, T};
  Complex sum = 0.0;
  for (int i = 0; i < 5; ++i)
    sum += detail::integrate_vertices(f, {Complex(cuts[i], 0.0), Complex(cuts[i + 1], 0.0)},
                                      spec)
               .value;
  REQUIRE(std::abs(sum - direct.value) < 1e-8 * std::abs(direct.value));
}

TEST_CASE("refusals: pinch points, window gate, degenerate fits", "[functions][domain]") {
  const Complex l0 = lambda_n(kPair, kGamma, 0);
  REQUIRE_THROWS_AS(r_function(ctx(), kGamma, {kPt.x, l0}), DomainError);
  REQUIRE_THROWS_AS(s_function(ctx(), kGamma, {kPt.x, l0}), DomainError);
  // mirror family on the other half-axis
  const Complex lm = -1.0i * (kPair.w() + dual_gamma(kGamma).g[3]);
  REQUIRE_THROWS_AS(s_function(ctx(), kGamma, {kPt.x, lm}), DomainError);
  REQUIRE_THROWS_AS(verify_r_equals_s(ctx(), kGamma, {Complex(0.5, 0.0), kPt.lambda}),
                    DomainError);
  REQUIRE_THROWS_AS(
      growth_estimate(ctx(), WhichFunction::s, kGamma, kPt.lambda, {}, 0.0, 0.0, 2),
      DomainError);
}
