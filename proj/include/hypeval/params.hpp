#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "errors.hpp"

namespace hypeval {

using Complex = std::complex<double>;
using namespace std::complex_literals;

inline constexpr double pi = std::numbers::pi;

// Pair of quasi-periods (w1, w2).  Everything downstream is symmetric under
// swapping them; the pair also carries the derived constants that appear all
// over the difference equations.
//
// q lies on the unit circle for real moduli, so |q| == 1 up to rounding and
// none of the usual |q| < 1 series tricks apply.
struct ModulusPair {
  double w1 = 1.0;
  double w2 = 1.0;

  double w() const { return 0.5 * (w1 + w2); }       // mean modulus
  double vshift() const { return 0.5 * (w1 - w2); }  // antisymmetric half-difference
  double alpha() const { return 2.0 * pi / (w1 * w2); }

  // q^beta means exp(i pi beta w1/w2): continuous in beta, not a principal power.
  Complex qpow(Complex beta) const { return std::exp(1.0i * pi * beta * (w1 / w2)); }
  Complex qpow_tilde(Complex beta) const { return std::exp(1.0i * pi * beta * (w2 / w1)); }
  Complex q() const { return qpow(1.0); }
  Complex q_tilde() const { return qpow_tilde(1.0); }

  ModulusPair swapped() const;
  ModulusPair scaled(double mu) const;

  // Genericity bookkeeping: ratios that are (close to) small rationals make
  // the zero/pole lattice collide, so suites that need simple poles check
  // these flags before running.
  bool integer_ratio = false;
  bool near_resonance = false;
  int resonance_p = 0;
  int resonance_q = 0;
};

inline ModulusPair make_modulus_pair(double w1, double w2) {
  if (!(w1 > 0.0) || !(w2 > 0.0))
    throw DomainError("modulus pair requires w1 > 0 and w2 > 0");
  ModulusPair p;
  p.w1 = w1;
  p.w2 = w2;
  const double r = w1 / w2;
  auto near_int = [](double x) {
    return std::abs(x - std::round(x)) < 1e-12 * std::max(1.0, std::abs(x));
  };
  p.integer_ratio = near_int(r) || near_int(1.0 / r);
  for (int q = 1; q <= 8 && !p.near_resonance; ++q) {
    for (int pp = 1; pp <= 8; ++pp) {
      if (std::abs(r - double(pp) / double(q)) < 1e-6) {
        p.near_resonance = true;
        p.resonance_p = pp;
        p.resonance_q = q;
        break;
      }
    }
  }
  return p;
}

inline ModulusPair ModulusPair::swapped() const { return make_modulus_pair(w2, w1); }
inline ModulusPair ModulusPair::scaled(double mu) const {
  return make_modulus_pair(mu * w1, mu * w2);
}

// Four coupling parameters gamma_0..gamma_3 plus the (rho, sigma, tau,
// upsilon) chart used on the representation side:
//   gamma0 = -rho + sigma   gamma1 = rho + sigma
//   gamma2 = -tau - upsilon gamma3 = tau - upsilon
struct GammaSet {
  std::array<Complex, 4> g{};

  Complex ghat0() const { return 0.5 * (g[0] + g[1] + g[2] + g[3]); }

  Complex rho() const { return 0.5 * (g[1] - g[0]); }
  Complex sigma() const { return 0.5 * (g[0] + g[1]); }
  Complex tau() const { return 0.5 * (g[3] - g[2]); }
  Complex upsilon() const { return -0.5 * (g[2] + g[3]); }
};

inline GammaSet gamma_from_rstu(Complex rho, Complex sigma, Complex tau,
                                Complex upsilon) {
  GammaSet s;
  s.g = {-rho + sigma, rho + sigma, -tau - upsilon, tau - upsilon};
  return s;
}

// Self-dual involution gamma -> (1/2) H gamma with H the 4x4 sign matrix
// [[1,1,1,1],[1,1,-1,-1],[1,-1,1,-1],[1,-1,-1,1]].  In the chart it just
// exchanges rho and upsilon.
inline GammaSet dual_gamma(const GammaSet& s) {
  const auto& g = s.g;
  GammaSet d;
  d.g[0] = 0.5 * (g[0] + g[1] + g[2] + g[3]);
  d.g[1] = 0.5 * (g[0] + g[1] - g[2] - g[3]);
  d.g[2] = 0.5 * (g[0] - g[1] + g[2] - g[3]);
  d.g[3] = 0.5 * (g[0] - g[1] - g[2] + g[3]);
  return d;
}

// Askey-Wilson parameters attached to (pair, gamma):
//   a = -exp(2 pi i gamma_0 / w2) q, and cyclically for b, c, d; base q^2.
struct AWParams {
  Complex a, b, c, d;
  Complex base;

  Complex abcd() const { return a * b * c * d; }
  Complex at(int j) const {
    switch (j) {
      case 0: return a;
      case 1: return b;
      case 2: return c;
      default: return d;
    }
  }
};

inline AWParams aw_params(const ModulusPair& pair, const GammaSet& gamma) {
  AWParams p;
  const Complex q = pair.q();
  auto mk = [&](Complex gj) { return -std::exp(2.0 * pi * 1.0i * gj / pair.w2) * q; };
  p.a = mk(gamma.g[0]);
  p.b = mk(gamma.g[1]);
  p.c = mk(gamma.g[2]);
  p.d = mk(gamma.g[3]);
  p.base = q * q;
  return p;
}

// Discrete spectral points lambda_n = i(w + ghat0 + n w1), n >= 0.
inline Complex lambda_n(const ModulusPair& pair, const GammaSet& gamma, int n) {
  if (n < 0) throw DomainError("lambda_n requires n >= 0");
  return 1.0i * (pair.w() + gamma.ghat0() + double(n) * pair.w1);
}

// Validity report for a spectral/geometric point (x, lambda).
//
//   xi    = max |Re| over the chart (rho, sigma, tau, upsilon)
//   zeta  = w/2 - xi - |Im lambda/2|
//
// The pairing integral over the real line needs zeta > 0 and |Im x| < zeta;
// the polynomial-window flag asks for Re gamma_j > 0 and |x|, |lambda|,
// |gamma_j| < w/6; asymptotic estimates need lambda off the real axis.
struct DomainReport {
  double xi = 0.0;
  double zeta = 0.0;
  bool psi_ok = false;
  bool window_ok = false;
  bool asymptotics_ok = false;
};

inline DomainReport domain_report(const ModulusPair& pair, const GammaSet& gamma,
                                  Complex x, Complex lambda) {
  DomainReport r;
  r.xi = std::max(std::max(std::abs(gamma.rho().real()), std::abs(gamma.sigma().real())),
                  std::max(std::abs(gamma.tau().real()), std::abs(gamma.upsilon().real())));
  r.zeta = 0.5 * pair.w() - r.xi - std::abs(0.5 * lambda.imag());
  r.psi_ok = r.zeta > 0.0 && std::abs(x.imag()) < r.zeta;
  const double win = pair.w() / 6.0;
  r.window_ok = std::abs(x) < win && std::abs(lambda) < win;
  for (const auto& gj : gamma.g)
    r.window_ok = r.window_ok && gj.real() > 0.0 && std::abs(gj) < win;
  r.asymptotics_ok = lambda.imag() != 0.0 && r.zeta > 0.0;
  return r;
}

}  // namespace hypeval
