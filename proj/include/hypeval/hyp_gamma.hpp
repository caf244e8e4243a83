#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "errors.hpp"
#include "params.hpp"
#include "quadrature.hpp"

namespace hypeval {

// The building block G(w1,w2;z) = exp(i g(z)) with
//
//   g(z) = int_0^inf [ sin(2yz) / (2 sinh(w1 y) sinh(w2 y)) - z/(w1 w2 y) ] dy/y,
//
// convergent on the strip |Im z| < w.  Outside the strip the value is pulled
// back in with the shift identities
//
//   G(z + i w1/2) = 2 cosh(pi z / w2) G(z - i w1/2)      (and w1 <-> w2),
//
// so G extends to a meromorphic function with zeros on iw + i w1 N + i w2 N
// and poles mirrored across the origin.
//
// Numerical layout of the strip integral:
//   [0, y0]   power series in y^2 (the integrand is even and analytic at 0;
//             direct evaluation would cancel catastrophically),
//   [y0, Y]   adaptive panels seeded at the oscillation wavelength of
//             sin(2yz),
//   [Y, inf)  the sinh part is below tolerance; the subtracted z/(w1 w2 y^2)
//             term is integrated exactly, contributing -z/(w1 w2 Y).
//
// For |Re z| large the phase settles onto a quadratic; past a pair-dependent
// threshold we use
//
//   g(z) ~ -+ ( pi z^2/(2 w1 w2) + pi (w1^2 + w2^2)/(24 w1 w2) ),  Re z -> +-inf,
//
// whose defect decays like exp(-2 pi |Re z| / max(w1, w2)) (checked against
// quadrature in the test suite at the switchover).

struct LatticePoint {
  int m = 0, n = 0;
  Complex location;
  int order = 1;
};

struct GammaEval {
  Complex value;
  int steps = 0;          // continuation steps used
  double pole_distance = 0.0;
  double zero_distance = 0.0;
};

class HypGammaContext {
 public:
  explicit HypGammaContext(const ModulusPair& pair, double tol = 1e-13)
      : pair_(pair), tol_(tol) {
    const double mx = std::max(pair.w1, pair.w2);
    y0_ = 0.25 / mx;
    asym_threshold_ = 6.0 * mx;
    chi_ = pi * (pair.w1 * pair.w1 + pair.w2 * pair.w2) / (24.0 * pair.w1 * pair.w2);
    pull_target_ = 0.5 * std::min(pair.w1, pair.w2) + 1e-14;
  }

  const ModulusPair& pair() const { return pair_; }
  double chi() const { return chi_; }
  double asym_threshold() const { return asym_threshold_; }

  // Distance from z to the zero lattice iw + i(m w1 + n w2) (sign=+1) or the
  // pole lattice -iw - i(m w1 + n w2) (sign=-1).
  double lattice_distance(Complex z, int sign) const {
    const double target = sign > 0 ? z.imag() - pair_.w() : -z.imag() - pair_.w();
    double best = std::numeric_limits<double>::infinity();
    const double w1 = pair_.w1, w2 = pair_.w2;
    for (int m = 0; m <= int(std::max(0.0, target) / w1) + 1; ++m) {
      const double rem = target - m * w1;
      for (double n : {std::floor(rem / w2), std::ceil(rem / w2), 0.0}) {
        if (n < 0) n = 0;
        const double d = m * w1 + n * w2;
        best = std::min(best, std::abs(target - d));
      }
      if (m * w1 > target + w1) break;
    }
    return std::hypot(z.real(), best);
  }

  // g on the strip |Im z| < w.  The asymptotic defect decays in |Re z| alone
  // (its terms have modulus exp(-2 pi m Re z / w_j)), so the switch does not
  // depend on Im z.
  Complex g_strip(Complex z) const {
    if (!(std::abs(z.imag()) < pair_.w()))
      throw StripError("argument outside the convergence strip |Im z| < w", z);
    if (std::abs(z.real()) > asym_threshold_) return g_asym(z);
    return g_quad_cached(z);
  }

  Complex g_asym(Complex z) const {
    const double s = z.real() >= 0.0 ? 1.0 : -1.0;
    return -s * (pi * z * z / (2.0 * pair_.w1 * pair_.w2) + chi_);
  }

  GammaEval eval(Complex z) const {
    GammaEval out;
    out.zero_distance = lattice_distance(z, +1);
    out.pole_distance = lattice_distance(z, -1);
    const double delta_min = 1e-8 * pair_.w();
    if (out.pole_distance < delta_min)
      throw PoleError("evaluation point touches a pole of the gamma function", z);

    Complex mul = 1.0;
    Complex zz = z;
    while (std::abs(zz.imag()) > pull_target_) {
      // Greedy step: whichever modulus overshoots least, ties to w1.
      const double im = std::abs(zz.imag());
      const double r1 = std::abs(im - pair_.w1), r2 = std::abs(im - pair_.w2);
      const double wj = (r1 <= r2) ? pair_.w1 : pair_.w2;
      const double wk = (r1 <= r2) ? pair_.w2 : pair_.w1;
      if (zz.imag() > 0.0) {
        const Complex f = 2.0 * std::cosh(pi * (zz - 0.5i * wj) / wk);
        mul *= f;
        zz -= Complex(0.0, wj);
      } else {
        const Complex f = 2.0 * std::cosh(pi * (zz + 0.5i * wj) / wk);
        // Dividing by a vanishing factor means z sits on the pole lattice;
        // caught by the distance guard above.
        mul /= f;
        zz += Complex(0.0, wj);
      }
      ++out.steps;
    }
    const Complex g = (std::abs(zz.real()) > asym_threshold_) ? g_asym(zz) : g_quad_cached(zz);
    out.value = mul * std::exp(1.0i * g);
    return out;
  }

  Complex operator()(Complex z) const { return eval(z).value; }

  // 1/G through the reflection identity G(z) G(-z) = 1; this stays accurate
  // next to zeros of G where direct division would not.
  Complex recip(Complex z) const { return eval(-z).value; }

  size_t cache_size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return cache_.size();
  }

  double tol() const { return tol_; }

 private:
  struct KeyHash {
    size_t operator()(const std::pair<uint64_t, uint64_t>& k) const {
      // splitmix-style scramble of the two bit patterns
      uint64_t h = k.first * 0x9e3779b97f4a7c15ull;
      h ^= (h >> 30);
      h *= 0xbf58476d1ce4e5b9ull;
      h ^= k.second + 0x9e3779b97f4a7c15ull + (h << 6);
      h ^= (h >> 27);
      return size_t(h * 0x94d049bb133111ebull);
    }
  };

  Complex g_quad_cached(Complex z) const {
    uint64_t a, b;
    std::memcpy(&a, &reinterpret_cast<const double(&)[2]>(z)[0], 8);
    std::memcpy(&b, &reinterpret_cast<const double(&)[2]>(z)[1], 8);
    const std::pair<uint64_t, uint64_t> key{a, b};
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = cache_.find(key);
      if (it != cache_.end()) return it->second;
    }
    const Complex g = g_quadrature(z);
    {
      std::lock_guard<std::mutex> lock(mu_);
      if (cache_.size() < (1u << 22)) cache_.emplace(key, g);
    }
    return g;
  }

  // Series for the integrand on [0, y0], integrated termwise.  With
  // u = y^2:  F(y) = (z/(w1 w2)) * sum_k r_k y^{2k-2},  r = s/(1+e) - 1,
  // where s collects sin(2yz)/(2yz) and 1+e collects the sinh product
  // normalized by its leading 2 w1 w2 y^2.
  Complex g_series_part(Complex z) const {
    const int K = 48;
    const double w1 = pair_.w1, w2 = pair_.w2;
    const double tw = 2.0 * pair_.w(), tv = 2.0 * pair_.vshift();
    std::vector<Complex> s(K + 1);
    std::vector<double> e(K + 1, 0.0);
    s[0] = 1.0;
    const Complex zz4 = 4.0 * z * z;  // (2z)^2
    Complex spow = 1.0;
    double fact = 1.0;  // (2m+1)!
    double pw = tw * tw, pv = tv * tv;
    double factd = 2.0;  // (2k+2)! running
    for (int k = 1; k <= K; ++k) {
      spow *= -zz4;
      fact *= (2.0 * k) * (2.0 * k + 1.0);
      s[k] = spow / fact;
      pw *= tw * tw;
      pv *= tv * tv;
      factd *= (2.0 * k + 1.0) * (2.0 * k + 2.0);
      e[k] = (pw - pv) / (factd * 2.0 * w1 * w2);
    }
    std::vector<Complex> t(K + 1);
    t[0] = 1.0;
    for (int k = 1; k <= K; ++k) {
      Complex acc = s[k];
      for (int j = 1; j <= k; ++j) acc -= e[j] * t[k - j];
      t[k] = acc;
    }
    Complex integral = 0.0;
    const double u0 = y0_ * y0_;
    double ypow = y0_;  // y0^{2k-1}, k starting at 1
    int small_run = 0;
    for (int k = 1; k <= K; ++k) {
      const Complex term = t[k] * ypow / (2.0 * k - 1.0);
      integral += term;
      ypow *= u0;
      if (std::abs(term) < 1e-3 * tol_) {
        if (++small_run >= 2) break;
      } else {
        small_run = 0;
      }
    }
    return z / (w1 * w2) * integral;
  }

  Complex g_quadrature(Complex z) const {
    const double w1 = pair_.w1, w2 = pair_.w2;
    const double rate = 2.0 * (pair_.w() - std::abs(z.imag()));
    double Y = std::log(20.0 / (tol_ * rate)) / rate;
    Y = std::log(std::max(20.0 / (tol_ * rate * Y), 10.0)) / rate;
    Y = std::max(Y, y0_ * 2.0);

    const Complex head = g_series_part(z);

    const double tw = 2.0 * pair_.w(), tv = 2.0 * pair_.vshift();
    auto F = [&](Complex yc) {
      const double y = yc.real();
      const Complex num = std::sin(2.0 * y * z);
      const double den = std::cosh(tw * y) - std::cosh(tv * y);
      return (num / den - z / (w1 * w2 * y)) / y;
    };

    const double period = pi / std::max(1.0, std::abs(z.real()));
    const double h = std::min(2.0 * period, (Y - y0_));
    const int k0 = std::min(20000, (int)std::ceil((Y - y0_) / h));

    const GLRule& rule = detail::gl_rule(15);
    detail::PanelOutcome out;
    for (int j = 0; j < k0; ++j) {
      const Complex a = Complex(y0_ + (Y - y0_) * double(j) / k0, 0.0);
      const Complex b = Complex(y0_ + (Y - y0_) * double(j + 1) / k0, 0.0);
      const Complex coarse = detail::gl_apply(F, a, b, rule);
      detail::refine_panel(F, a, b, coarse, tol_ / k0, 0, 48, rule, out);
    }
    if (out.exhausted)
      throw AccuracyError("strip integral for g did not reach tolerance",
                          IntegralResult{out.value, out.err, out.panels, 0.0});
    const Complex tail = -z / (w1 * w2 * Y);
    return head + out.value + tail;
  }

  ModulusPair pair_;
  double tol_;
  double y0_;
  double asym_threshold_;
  double chi_;
  double pull_target_;
  mutable std::mutex mu_;
  mutable std::unordered_map<std::pair<uint64_t, uint64_t>, Complex, KeyHash> cache_;
};

inline Complex g_strip(const HypGammaContext& ctx, Complex z) { return ctx.g_strip(z); }
inline Complex hyp_gamma(const HypGammaContext& ctx, Complex z) { return ctx(z); }
inline Complex hyp_gamma_recip(const HypGammaContext& ctx, Complex z) { return ctx.recip(z); }

// Residue of G at the topmost pole z = -iw.
inline Complex residue_minus_iw(const ModulusPair& pair) {
  return 0.5i / pi * std::sqrt(pair.w1 * pair.w2);
}

// Leading quotient behaviour G(z-a)/G(z-b) for Re z large; the dropped
// defect decays exponentially once Re z > max(w1,w2) + max(Re a, Re b).
inline Complex quotient_asymptotic(const ModulusPair& pair, Complex z, Complex a, Complex b) {
  const Complex arg = 2.0 * z * (b - a) + a * a - b * b;
  return std::exp(pi / (2.0i * pair.w1 * pair.w2) * arg);
}

// Zero lattice (sign=+1) or pole lattice (sign=-1) down to the given depth;
// order counts lattice coincidences (1 for generic pairs).
inline std::vector<LatticePoint> pole_zero_lattice(const ModulusPair& pair, int sign,
                                                   double max_depth) {
  std::vector<LatticePoint> pts;
  for (int m = 0; m * pair.w1 <= max_depth; ++m)
    for (int n = 0; m * pair.w1 + n * pair.w2 <= max_depth; ++n) {
      LatticePoint p;
      p.m = m;
      p.n = n;
      const double d = pair.w() + m * pair.w1 + n * pair.w2;
      p.location = Complex(0.0, sign > 0 ? d : -d);
      pts.push_back(p);
    }
  for (auto& p : pts) {
    p.order = 0;
    for (const auto& q : pts)
      if (std::abs(q.location - p.location) < 1e-12 * pair.w()) ++p.order;
  }
  return pts;
}

}  // namespace hypeval
