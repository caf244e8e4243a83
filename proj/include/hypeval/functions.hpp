#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "errors.hpp"
#include "hyp_gamma.hpp"
#include "params.hpp"
#include "qseries.hpp"
#include "quadrature.hpp"

namespace hypeval {

// The two Barnes-type integrals of the library: the hypergeometric function R
// (contour integral with an indented path) and the matrix-coefficient
// integral psi, plus psi's renormalization S, the gauge quotient Delta, the
// Askey-Wilson residuals, the Casorati determinant of R and S, and
// growth-rate fits.  Both integrands are eight-factor quotients of hyperbolic
// gamma functions whose poles form vertical lattices, so every evaluation
// reduces to: enumerate the sequences, build a separating polyline, integrate.

struct EvalPoint {
  Complex x;
  Complex lambda;
};

struct HypEvalResult {
  Complex value{0.0, 0.0};
  IntegralResult quadrature;
  DomainReport domain;
  Contour contour_used;
};

enum class WhichFunction { r, s };
enum class VariableSide { geometric, spectral };

namespace detail {

// prod_k G(z + num[k]) / prod_k G(z + den[k]) with pole bookkeeping:
// numerator poles descend from -a - iw, denominator zeros ascend from
// -b + iw.  `shift` is the largest |Re| offset among the arguments; the
// quotient reaches its asymptotic decay only beyond it, so the truncation
// and the tail prefactor both carry it.
inline FunctionHandle barnes_handle(const HypGammaContext& ctx,
                                    const std::array<Complex, 4>& num,
                                    const std::array<Complex, 4>& den,
                                    double rate, double shift) {
  const ModulusPair& pr = ctx.pair();
  const Complex iw(0.0, pr.w());
  FunctionHandle h;
  h.eval = [&ctx, num, den](Complex z) {
    Complex v = 1.0;
    for (const Complex& a : num) v *= ctx(z + a);
    for (const Complex& b : den) v *= ctx.recip(z + b);
    return v;
  };
  for (const Complex& a : num) h.poles.push_back({-a - iw, pr.w1, pr.w2, -1});
  for (const Complex& b : den) h.poles.push_back({-b + iw, pr.w1, pr.w2, +1});
  h.growth_rate = -rate;
  h.scale_hint = std::exp(rate * shift);
  // Eight gamma factors, each delivered by the strip quadrature at the
  // context tolerance; below this level the product is noise and outer
  // bisection must not chase it.
  h.eval_noise = 10.0 * ctx.tol();
  return h;
}

// Shared tail of psi/r evaluation: choose the truncation, split the
// sequences, build the separating polyline, integrate.
inline HypEvalResult integrate_barnes(const FunctionHandle& h, double rate,
                                      double shift, const QuadratureSpec& spec) {
  HypEvalResult out;
  const double T = spec.truncation > 0.0
                       ? spec.truncation
                       : default_truncation(rate, 1.0, spec.abs_tol) + shift;
  std::vector<PoleSequence> desc, asc;
  for (const auto& s : h.poles) (s.direction < 0 ? desc : asc).push_back(s);
  out.contour_used = build_indented_contour(desc, asc, T);
  out.quadrature = integrate_contour(h, out.contour_used, spec);
  out.value = out.quadrature.value;
  return out;
}

// Distance from lambda to the ascending lattice base + i(m w1 + k w2).  The
// defining integrals pinch there: a prefactor zero meets a divergent
// integral, and although R and S stay analytic, direct quadrature
// degenerates.  Callers refuse a small neighbourhood and use the limit
// helpers below instead.
inline double pinch_distance(const ModulusPair& pr, Complex lambda, Complex base) {
  double best = std::numeric_limits<double>::infinity();
  const double reach = std::abs(lambda) + pr.w1 + pr.w2;
  for (int m = 0; base.imag() + m * pr.w1 <= reach; ++m)
    for (int k = 0; base.imag() + m * pr.w1 + k * pr.w2 <= reach; ++k)
      best = std::min(best,
                      std::abs(lambda - base - Complex(0.0, m * pr.w1 + k * pr.w2)));
  return best;
}

}  // namespace detail

// Matrix-coefficient integral over (a deformation of) the real line:
//
//   psi(gamma;x,la) = int G(z+x+la/2-iw/2 +- i tau) G(z-la/2-iw/2 +- i sigma)
//                       / [G(z+x-la/2+iw/2 +- i rho) G(z+la/2+iw/2 +- i ups)] dz.
//
// Inside the report's psi window the path is the real line itself.  Outside
// it (the radial difference equation needs x +- iw1 and x +- iw2) the
// vertical pole sequences still separate and the indented path computes the
// meromorphic continuation; when they interlock, ContourError propagates.
inline HypEvalResult psi(const HypGammaContext& ctx, const GammaSet& gamma,
                         EvalPoint pt, const QuadratureSpec& spec = {}) {
  const ModulusPair& pr = ctx.pair();
  const Complex ihw(0.0, 0.5 * pr.w());
  const Complex la2 = 0.5 * pt.lambda;
  const Complex it = 1.0i * gamma.tau(), is = 1.0i * gamma.sigma();
  const Complex ir = 1.0i * gamma.rho(), iu = 1.0i * gamma.upsilon();
  const std::array<Complex, 4> num{pt.x + la2 - ihw + it, pt.x + la2 - ihw - it,
                                   -la2 - ihw + is, -la2 - ihw - is};
  const std::array<Complex, 4> den{pt.x - la2 + ihw + ir, pt.x - la2 + ihw - ir,
                                   la2 + ihw + iu, la2 + ihw - iu};
  const double rate = 2.0 * pi * (pr.w1 + pr.w2) / (pr.w1 * pr.w2);
  const double shift = std::abs(pt.x.real()) + std::abs(la2.real());
  HypEvalResult out = detail::integrate_barnes(
      detail::barnes_handle(ctx, num, den, rate, shift), rate, shift, spec);
  out.domain = domain_report(pr, gamma, pt.x, pt.lambda);
  return out;
}

// Hypergeometric function
//
//   R(gamma;x,la) = N(gamma) / (sqrt(w1 w2) G(+-x+i g0) G(+-la+i ghat0))
//                   * int_C G(z+-x+i g0) G(z+-la+i ghat0)
//                         / [G(z+iw) prod_j G(z+i g0+i g_j+iw)] dz,
//
// the contour separating the four descending sequences from the ascending
// ones anchored at 0 and -i(g0+g_j); for real parameters that is the real
// line with a downward indentation near the origin.
inline HypEvalResult r_function(const HypGammaContext& ctx, const GammaSet& gamma,
                                EvalPoint pt, const QuadratureSpec& spec = {}) {
  const ModulusPair& pr = ctx.pair();
  const Complex iw(0.0, pr.w());
  const Complex ig0 = 1.0i * gamma.g[0];
  const Complex igh0 = 1.0i * gamma.ghat0();

  const Complex pinch_base = iw + igh0;
  const double guard = 1e-3 * pr.w();
  if (std::min(detail::pinch_distance(pr, pt.lambda, pinch_base),
               detail::pinch_distance(pr, -pt.lambda, pinch_base)) < guard)
    throw DomainError(
        "spectral variable too close to i(w + ghat0 + m w1 + k w2): the "
        "contour integral pinches; extrapolate with r_at_discrete");

  const std::array<Complex, 4> num{pt.x + ig0, -pt.x + ig0, pt.lambda + igh0,
                                   -pt.lambda + igh0};
  std::array<Complex, 4> den{iw, 0.0, 0.0, 0.0};
  for (int j = 1; j < 4; ++j) den[j] = ig0 + 1.0i * gamma.g[j] + iw;

  const double rate = 2.0 * pi * (pr.w1 + pr.w2) / (pr.w1 * pr.w2);
  const double shift = std::abs(pt.x.real()) + std::abs(pt.lambda.real());
  HypEvalResult out = detail::integrate_barnes(
      detail::barnes_handle(ctx, num, den, rate, shift), rate, shift, spec);
  out.domain = domain_report(pr, gamma, pt.x, pt.lambda);

  Complex gprod = 1.0;
  for (const Complex& a : num) {
    const Complex gv = ctx(a);
    if (gv == 0.0) throw PoleError("prefactor gamma value vanishes: R has a pole here", a);
    gprod *= gv;
  }
  const Complex pref = normalization_N(ctx, gamma) / (std::sqrt(pr.w1 * pr.w2) * gprod);
  out.value *= pref;
  out.quadrature.value = out.value;
  out.quadrature.error_estimate =
      std::abs(pref) * out.quadrature.error_estimate + std::abs(out.value) * 8.0 * ctx.tol();
  return out;
}

// Gauge quotient Delta(gamma;x) = G(x+i g2) G(x+i g3) / (G(x-i g0) G(x-i g1)).
inline Complex delta_gauge(const HypGammaContext& ctx, const GammaSet& gamma, Complex x) {
  return ctx(x + 1.0i * gamma.g[2]) * ctx(x + 1.0i * gamma.g[3]) *
         ctx.recip(x - 1.0i * gamma.g[0]) * ctx.recip(x - 1.0i * gamma.g[1]);
}

// Renormalized matrix coefficient
//   S(gamma;x,la) = N(gamma) psi(gamma;x,la)
//                   / (sqrt(w1 w2) Delta(gamma;x) Delta(ghat;la)).
// Near the discrete points la = i(w + ghat0 + n w1) (and the mirror family
// -i(w + ghat3 + ...)) the psi integral pinches while 1/Delta(ghat;la)
// vanishes; evaluation there goes through s_at_discrete.
inline HypEvalResult s_function(const HypGammaContext& ctx, const GammaSet& gamma,
                                EvalPoint pt, const QuadratureSpec& spec = {}) {
  const ModulusPair& pr = ctx.pair();
  const GammaSet dual = dual_gamma(gamma);
  const Complex iw(0.0, pr.w());
  const double guard = 1e-3 * pr.w();
  if (std::min(detail::pinch_distance(pr, pt.lambda, iw + 1.0i * dual.g[0]),
               detail::pinch_distance(pr, -pt.lambda, iw + 1.0i * dual.g[3])) < guard)
    throw DomainError(
        "spectral variable too close to a discrete series point: the psi "
        "integral pinches; extrapolate with s_at_discrete");

  HypEvalResult out = psi(ctx, gamma, pt, spec);
  const Complex pref =
      normalization_N(ctx, gamma) /
      (std::sqrt(pr.w1 * pr.w2) * delta_gauge(ctx, gamma, pt.x) *
       delta_gauge(ctx, dual, pt.lambda));
  out.value *= pref;
  out.quadrature.value = out.value;
  out.quadrature.error_estimate =
      std::abs(pref) * out.quadrature.error_estimate + std::abs(out.value) * 11.0 * ctx.tol();
  return out;
}

// f / (c(gamma;x) c(ghat;la) N(gamma)); this combination is what the Weyl
// group symmetries leave invariant (all of D4 for R, sign flips of the
// chart variables for S).
inline Complex normalized_form(const HypGammaContext& ctx, WhichFunction which,
                               const GammaSet& gamma, EvalPoint pt,
                               const QuadratureSpec& spec = {}) {
  const Complex f = (which == WhichFunction::r ? r_function(ctx, gamma, pt, spec)
                                               : s_function(ctx, gamma, pt, spec))
                        .value;
  return f / (c_function(ctx, gamma, pt.x) *
              c_function(ctx, dual_gamma(gamma), pt.lambda) *
              normalization_N(ctx, gamma));
}

// Residual |L f - v f| of the second-order difference equation in the chosen
// variable.  The geometric-side operator carries gamma and reads its
// eigenvalue at lambda; the spectral-side operator carries the dual set and
// reads its eigenvalue at x.  The w2-step variant swaps the moduli in both
// the coefficient and the eigenvalue.
inline double aw_residual(const HypGammaContext& ctx, WhichFunction which,
                          AWOperatorSpec::Step step, VariableSide side,
                          const GammaSet& gamma, EvalPoint pt,
                          const QuadratureSpec& spec = {}) {
  const bool spectral = side == VariableSide::spectral;
  const GammaSet coeff = spectral ? dual_gamma(gamma) : gamma;
  const ModulusPair op_pair =
      step == AWOperatorSpec::step_w1 ? ctx.pair() : ctx.pair().swapped();
  auto f = [&](Complex v) {
    EvalPoint p = pt;
    (spectral ? p.lambda : p.x) = v;
    return (which == WhichFunction::r ? r_function(ctx, gamma, p, spec)
                                      : s_function(ctx, gamma, p, spec))
        .value;
  };
  const Complex var = spectral ? pt.lambda : pt.x;
  const Complex f0 = f(var);
  const Complex shift(0.0, op_pair.w1);
  const Complex lhs = coeff_A(op_pair, coeff, var) * (f(var + shift) - f0) +
                      coeff_A(op_pair, coeff, -var) * (f(var - shift) - f0);
  const Complex v =
      eigenvalue_v(op_pair.w1, op_pair.w2, coeff, spectral ? pt.x : pt.lambda);
  return std::abs(lhs - v * f0);
}

// Discrete Wronskian S(z+iw1/2) R(z-iw1/2) - S(z-iw1/2) R(z+iw1/2); it
// vanishes identically because R and S solve the same second-order equation
// and agree on the discrete spectrum.
inline Complex casorati(const HypGammaContext& ctx, const GammaSet& gamma,
                        Complex z, Complex lambda, const QuadratureSpec& spec = {}) {
  const Complex h(0.0, 0.5 * ctx.pair().w1);
  const Complex sp = s_function(ctx, gamma, {z + h, lambda}, spec).value;
  const Complex sm = s_function(ctx, gamma, {z - h, lambda}, spec).value;
  const Complex rp = r_function(ctx, gamma, {z + h, lambda}, spec).value;
  const Complex rm = r_function(ctx, gamma, {z - h, lambda}, spec).value;
  return sp * rm - sm * rp;
}

// T(z) = sinh(2 pi z/w2) prod_j G(z-i g_j-i w1/2)/G(z+i g_j+i w1/2).  T
// satisfies the same first-order equation as the Casorati determinant, so
// their quotient is iw1-periodic (and, being entire and decaying, zero).
inline Complex casorati_gauge(const HypGammaContext& ctx, const GammaSet& gamma, Complex z) {
  const Complex h(0.0, 0.5 * ctx.pair().w1);
  Complex v = std::sinh(2.0 * pi * z / ctx.pair().w2);
  for (const Complex& gj : gamma.g)
    v *= ctx(z - 1.0i * gj - h) * ctx.recip(z + 1.0i * gj + h);
  return v;
}

// Least-squares slope of log|f| against Re x along a horizontal ray.  The
// asymptotic envelope is alpha (|Im la| - Re ghat0 - w); S attains it while
// R is only bounded by it.  A sample landing on a pole shifts the ray.
inline double growth_estimate(const HypGammaContext& ctx, WhichFunction which,
                              const GammaSet& gamma, Complex lambda,
                              const QuadratureSpec& spec = {}, double re_lo = 0.0,
                              double re_hi = 0.0, int samples = 10) {
  const double w = ctx.pair().w();
  if (re_lo <= 0.0) re_lo = 1.5 * w;
  if (re_hi <= 0.0) re_hi = 3.5 * w;
  if (samples < 3) throw DomainError("slope fit needs at least 3 samples");
  QuadratureSpec fit = spec;
  fit.abs_tol = std::min(fit.abs_tol, 1e-15);  // sampled values decay below default tolerances
  double im = 0.0;
  for (int attempt = 0;; ++attempt) {
    try {
      double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
      for (int i = 0; i < samples; ++i) {
        const double t = re_lo + (re_hi - re_lo) * i / (samples - 1);
        const EvalPoint p{Complex(t, im), lambda};
        const Complex v = (which == WhichFunction::r ? r_function(ctx, gamma, p, fit)
                                                     : s_function(ctx, gamma, p, fit))
                              .value;
        const double y = std::log(std::abs(v));
        sx += t;
        sy += y;
        sxx += t * t;
        sxy += t * y;
      }
      return (samples * sxy - sx * sy) / (samples * sxx - sx * sx);
    } catch (const PoleError&) {
      if (attempt >= 2) throw;
      im += 0.05 * w;
    }
  }
}

// Extrapolation onto a point the direct integrals cannot reach: f is analytic
// at `at`, so symmetric real offsets leave an even error expansion, and the
// Richardson weights (56, -28, 8, -1)/35 over the pair averages at h..4h
// cancel it through O(h^6), leaving O(h^8).  Offsets stay on the real line
// because complex ones can push the integrand poles past the contour.
template <class F>
Complex extrapolate_even(F&& f, Complex at, double h) {
  const auto pair_avg = [&](int k) {
    return 0.5 * (f(at + double(k) * h) + f(at - double(k) * h));
  };
  return (56.0 * pair_avg(1) - 28.0 * pair_avg(2) + 8.0 * pair_avg(3) -
          pair_avg(4)) /
         35.0;
}

namespace detail {

// f(base + i n w1) by climbing the spectral difference equation from two
// evaluations at base and base - iw1: each step expresses f(mu + iw1)
// through the two values below it.  Direct integrals then stay below la_0,
// where the integrand's pole columns are well separated; from la_1 upward a
// descending column tops out above the axis and the contour has to squeeze
// through a near-closed gap, which adaptive quadrature cannot afford.
template <class F>
Complex spectral_climb(const F& f, const ModulusPair& pr, const GammaSet& dual,
                       Complex x, Complex base, int n) {
  if (n <= 0) return f(base);
  Complex lo = f(base - Complex(0.0, pr.w1));
  Complex cur = f(base);
  Complex mu = base;
  const Complex v = eigenvalue_v(pr.w1, pr.w2, dual, x);
  for (int k = 0; k < n; ++k) {
    const Complex up =
        cur + (v * cur - coeff_A(pr, dual, -mu) * (lo - cur)) / coeff_A(pr, dual, mu);
    lo = cur;
    cur = up;
    mu += Complex(0.0, pr.w1);
  }
  return cur;
}

// The climb's lower rung runs the contour close past the origin pole; its
// noise floor sits just above 1e-8 relative, so pinning the request above
// that keeps the evaluation honest without tripping AccuracyError.  The
// extrapolation weights amplify by under 3x, so the discrete values still
// come out well inside 1e-6.
inline QuadratureSpec climb_spec(const QuadratureSpec& spec, int n) {
  QuadratureSpec out = spec;
  if (n > 0) out.rel_tol = std::max(spec.rel_tol, 5e-8);
  return out;
}

}  // namespace detail

inline Complex r_at_discrete(const HypGammaContext& ctx, const GammaSet& gamma,
                             int n, Complex x, const QuadratureSpec& spec = {},
                             double h = 0.0) {
  const Complex l0 = lambda_n(ctx.pair(), gamma, 0);
  if (h <= 0.0) h = 1.5e-3 * ctx.pair().w();
  const QuadratureSpec cs = detail::climb_spec(spec, n);
  const GammaSet dual = dual_gamma(gamma);
  return extrapolate_even(
      [&](Complex la) {
        return detail::spectral_climb(
            [&](Complex l) { return r_function(ctx, gamma, {x, l}, cs).value; },
            ctx.pair(), dual, x, la, n);
      },
      l0, h);
}

inline Complex s_at_discrete(const HypGammaContext& ctx, const GammaSet& gamma,
                             int n, Complex x, const QuadratureSpec& spec = {},
                             double h = 0.0) {
  const Complex l0 = lambda_n(ctx.pair(), gamma, 0);
  if (h <= 0.0) h = 1.5e-3 * ctx.pair().w();
  const QuadratureSpec cs = detail::climb_spec(spec, n);
  const GammaSet dual = dual_gamma(gamma);
  return extrapolate_even(
      [&](Complex la) {
        return detail::spectral_climb(
            [&](Complex l) { return s_function(ctx, gamma, {x, l}, cs).value; },
            ctx.pair(), dual, x, la, n);
      },
      l0, h);
}

// |R - S| / (|R| + |S|) inside the window Re g_j > 0, |x|,|la|,|g_j| < w/6
// where both integral representations hold simultaneously.
inline double verify_r_equals_s(const HypGammaContext& ctx, const GammaSet& gamma,
                                EvalPoint pt, const QuadratureSpec& spec = {}) {
  const DomainReport rep = domain_report(ctx.pair(), gamma, pt.x, pt.lambda);
  if (!rep.window_ok)
    throw DomainError("comparison point outside the common validity window");
  const Complex r = r_function(ctx, gamma, pt, spec).value;
  const Complex s = s_function(ctx, gamma, pt, spec).value;
  return std::abs(r - s) / (std::abs(r) + std::abs(s));
}

}  // namespace hypeval
