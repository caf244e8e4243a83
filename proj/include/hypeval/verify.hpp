#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "functions.hpp"
#include "representation.hpp"

namespace hypeval::verify {

// Named verification suites.  Each suite bundles the residual checks that
// certify one family of identities; a check is a closure returning a single
// nonnegative residual, and it passes iff residual <= tolerance.  Checks are
// deterministic given (config, seed): randomized probes draw from an RNG
// seeded by seed ^ hash(check id), so reports are reproducible regardless of
// how the worker pool interleaves them.

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CheckRecord {
  std::string id;
  std::string anchor;  // the identity being certified, stated as a formula
  std::string params;
  double residual = 0.0;
  double tol = 0.0;
  bool pass = false;
  double ms = 0.0;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckRecord> checks;
  int passed() const {
    int n = 0;
    for (const auto& c : checks) n += c.pass ? 1 : 0;
    return n;
  }
  int failed() const { return int(checks.size()) - passed(); }
  bool all_pass() const { return failed() == 0; }
};

struct SuiteConfig {
  std::string suite;
  ModulusPair pair = make_modulus_pair(1.0, std::sqrt(2.0));
  std::vector<GammaSet> gammas = {
      GammaSet{{Complex(0.05), Complex(0.04), Complex(0.03), Complex(0.02)}}};
  Complex x{0.1, 0.0};
  Complex lambda{0.12, 0.0};
  QuadratureSpec spec{};
  // grid sizes by role; zero entries fall back to the per-suite defaults
  std::map<std::string, int> grid_override;
  // tolerance by check id; everything else uses the tier defaults
  // (operator identities 1e-9, single integrals 1e-7, double pipelines 1e-6)
  std::map<std::string, double> tol_override;
  std::string out_path;  // empty: no files; else JSON here + CSV sibling
  std::uint64_t seed = 0;
  int threads = 0;  // 0: HYPEVAL_THREADS, else 1
  bool record_timing = true;  // false zeroes the ms column for byte-stable reports
};

struct SuiteInfo {
  std::string id;
  std::string summary;
  std::vector<std::string> anchors;
};

namespace detail {

struct CheckSpec {
  std::string id;
  std::string anchor;
  std::string params;
  double tol = 0.0;
  std::function<double(std::mt19937_64&)> run;
};

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline double unif(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1p-53; }

inline Complex rand_box(std::mt19937_64& rng, double re, double im) {
  return Complex(re * (2.0 * unif(rng) - 1.0), im * (2.0 * unif(rng) - 1.0));
}

inline double rel_diff(Complex a, Complex b) {
  const double s = std::abs(a) + std::abs(b);
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

inline std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

inline std::string fmt(Complex z) {
  if (z.imag() == 0.0) return fmt(z.real());
  return "(" + fmt(z.real()) + "," + fmt(z.imag()) + ")";
}

inline std::string fmt(const GammaSet& g) {
  return "(" + fmt(g.g[0]) + "," + fmt(g.g[1]) + "," + fmt(g.g[2]) + "," +
         fmt(g.g[3]) + ")";
}

inline std::string base_params(const SuiteConfig& cfg) {
  return "w=(" + fmt(cfg.pair.w1) + "," + fmt(cfg.pair.w2) + ")";
}

inline int grid(const SuiteConfig& cfg, const std::string& key, int dflt) {
  const auto it = cfg.grid_override.find(key);
  return it == cfg.grid_override.end() ? dflt : it->second;
}

// Gaussian probes: entire, even-order decay, safe for every shift operator.
inline Complex gauss_probe(Complex z, Complex c) {
  const Complex d = z - c;
  return std::exp(-d * d);
}

inline FunctionHandle gaussian_handle(Complex c) {
  FunctionHandle h;
  h.eval = [c](Complex z) { return gauss_probe(z, c); };
  h.growth_rate = -4.0;
  return h;
}

// max over seeded probes and points of |a f - b f| / max(|a f|, |b f|, 1)
inline double op_mismatch(const DifferenceOperator& a, const DifferenceOperator& b,
                          std::mt19937_64& rng, int probes, int points) {
  double worst = 0.0;
  for (int p = 0; p < probes; ++p) {
    const Complex c = rand_box(rng, 0.5, 0.5);
    const auto f = [c](Complex z) { return gauss_probe(z, c); };
    for (int k = 0; k < points; ++k) {
      const Complex z = rand_box(rng, 1.2, 1.2);
      const Complex va = a.apply(f, z), vb = b.apply(f, z);
      worst = std::max(worst,
                       std::abs(va - vb) / std::max({std::abs(va), std::abs(vb), 1.0}));
    }
  }
  return worst;
}

using Checks = std::vector<CheckSpec>;

// ---- gamma: identities of the hyperbolic gamma function -------------------

inline void build_gamma(const SuiteConfig& cfg, Checks& out) {
  const ModulusPair pr = cfg.pair;
  const int pts = grid(cfg, "strip", 100);
  const std::string pp = base_params(cfg) + " pts=" + std::to_string(pts);

  // strip samples keep |Im z| clear of the first pole/zero rows for the
  // shifted arguments of each identity
  const auto strip_point = [pr](std::mt19937_64& rng, double margin) {
    const double smax = 0.85 * (pr.w() - margin);
    return Complex(5.0 * (2.0 * unif(rng) - 1.0), smax * (2.0 * unif(rng) - 1.0));
  };

  const auto diffeq = [pr, pts, strip_point](double step_w, double period_w,
                                             std::shared_ptr<HypGammaContext> ctx) {
    return [=](std::mt19937_64& rng) {
      double worst = 0.0;
      for (int k = 0; k < pts; ++k) {
        const Complex z = strip_point(rng, 0.5 * step_w);
        const Complex ih(0.0, 0.5 * step_w);
        const Complex lhs = (*ctx)(z + ih);
        const Complex rhs = 2.0 * std::cosh(pi * z / period_w) * (*ctx)(z - ih);
        worst = std::max(worst, rel_diff(lhs, rhs));
      }
      return worst;
    };
  };

  auto ctx = std::make_shared<HypGammaContext>(pr);
  out.push_back({"gamma.diffeq.w1", "G(z+iw1/2) = 2 cosh(pi z/w2) G(z-iw1/2)", pp,
                 1e-9, diffeq(pr.w1, pr.w2, ctx)});
  out.push_back({"gamma.diffeq.w2", "G(z+iw2/2) = 2 cosh(pi z/w1) G(z-iw2/2)", pp,
                 1e-9, diffeq(pr.w2, pr.w1, ctx)});

  out.push_back({"gamma.reflection", "G(z) G(-z) = 1", pp, 1e-9,
                 [pr, pts, strip_point, ctx](std::mt19937_64& rng) {
                   double worst = 0.0;
                   for (int k = 0; k < pts; ++k) {
                     const Complex z = strip_point(rng, 0.0);
                     worst = std::max(worst,
                                      std::abs((*ctx)(z) * (*ctx)(-z) - 1.0));
                   }
                   return worst;
                 }});

  out.push_back({"gamma.swap", "G(w1,w2;z) = G(w2,w1;z)", pp, 1e-9,
                 [pr, pts, strip_point, ctx](std::mt19937_64& rng) {
                   HypGammaContext sw(pr.swapped());
                   double worst = 0.0;
                   for (int k = 0; k < pts; ++k) {
                     const Complex z = strip_point(rng, 0.0);
                     worst = std::max(worst, rel_diff((*ctx)(z), sw(z)));
                   }
                   return worst;
                 }});

  for (double mu : {0.5, 2.0}) {
    out.push_back({"gamma.scale." + fmt(mu), "G(mu w1, mu w2; mu z) = G(w1,w2;z)",
                   pp + " mu=" + fmt(mu),
                   1e-9, [pr, pts, strip_point, ctx, mu](std::mt19937_64& rng) {
                     HypGammaContext sc(pr.scaled(mu));
                     double worst = 0.0;
                     for (int k = 0; k < pts; ++k) {
                       const Complex z = strip_point(rng, 0.0);
                       worst = std::max(worst, rel_diff((*ctx)(z), sc(mu * z)));
                     }
                     return worst;
                   }});
  }

  out.push_back({"gamma.conjugation", "conj(G(z)) = G(-conj(z))", pp, 1e-9,
                 [pr, pts, strip_point, ctx](std::mt19937_64& rng) {
                   double worst = 0.0;
                   for (int k = 0; k < pts; ++k) {
                     const Complex z = strip_point(rng, 0.0);
                     worst = std::max(
                         worst, rel_diff(std::conj((*ctx)(z)), (*ctx)(-std::conj(z))));
                   }
                   return worst;
                 }});

  // Independent oracle: trapezoid over a circle around the first pole (the
  // trapezoid rule is geometrically convergent on closed contours, so 64
  // nodes deliver far below the 1e-6 target).
  out.push_back({"gamma.residue", "Res_{z=-iw} G = (i/2pi) sqrt(w1 w2)", pp, 1e-6,
                 [pr, ctx](std::mt19937_64&) {
                   const Complex c(0.0, -pr.w());
                   const double rad = 0.25 * std::min(pr.w1, pr.w2);
                   const int nodes = 64;
                   Complex acc = 0.0;
                   for (int k = 0; k < nodes; ++k) {
                     const double th = 2.0 * pi * k / nodes;
                     const Complex e(std::cos(th), std::sin(th));
                     acc += (*ctx)(c + rad * e) * e;
                   }
                   const Complex res = acc * rad / double(nodes);
                   const Complex expect =
                       Complex(0.0, 1.0 / (2.0 * pi)) * std::sqrt(pr.w1 * pr.w2);
                   return rel_diff(res, expect);
                 }});
}

// ---- representation: the two commuting algebra copies and their action ----

inline void build_representation(const SuiteConfig& cfg, Checks& out) {
  const ModulusPair pr = cfg.pair;
  const Complex lam = cfg.lambda;
  const int probes = grid(cfg, "probes", 5);
  const int points = grid(cfg, "points", 20);
  const std::string pp =
      base_params(cfg) + " la=" + fmt(lam) + " probes=" + std::to_string(probes) +
      " pts=" + std::to_string(points);

  using G = Generator;
  const auto op = [pr, lam](G g) { return pi_lambda(g, lam, pr); };
  const Complex q = pr.q(), qt = pr.q_tilde();

  const auto relation = [probes, points](DifferenceOperator a, DifferenceOperator b) {
    return [a = std::move(a), b = std::move(b), probes, points](std::mt19937_64& rng) {
      return op_mismatch(a, b, rng, probes, points);
    };
  };

  out.push_back({"rep.kkinv", "K K^{-1} = 1 (and the tilde twin)", pp, 1e-9,
                 [op, probes, points](std::mt19937_64& rng) {
                   const DifferenceOperator one = DifferenceOperator::identity();
                   return std::max(
                       op_mismatch(op(G::k).compose(op(G::k_inv)), one, rng, probes,
                                   points),
                       op_mismatch(op(G::k_tilde).compose(op(G::k_tilde_inv)), one,
                                   rng, probes, points));
                 }});
  out.push_back({"rep.ke", "K E = q^2 E K", pp, 1e-9,
                 relation(op(G::k).compose(op(G::e)),
                          op(G::e).compose(op(G::k)).scaled(q * q))});
  out.push_back({"rep.kf", "K F = q^{-2} F K", pp, 1e-9,
                 relation(op(G::k).compose(op(G::f)),
                          op(G::f).compose(op(G::k)).scaled(1.0 / (q * q)))});
  out.push_back({"rep.ef", "[E,F] = (K - K^{-1})/(q - q^{-1})", pp, 1e-9,
                 relation(op(G::e).compose(op(G::f)) - op(G::f).compose(op(G::e)),
                          (op(G::k) - op(G::k_inv)).scaled(1.0 / (q - 1.0 / q)))});
  out.push_back({"rep.tilde.ke", "K~ E~ = q~^2 E~ K~", pp, 1e-9,
                 relation(op(G::k_tilde).compose(op(G::e_tilde)),
                          op(G::e_tilde).compose(op(G::k_tilde)).scaled(qt * qt))});
  out.push_back({"rep.tilde.kf", "K~ F~ = q~^{-2} F~ K~", pp, 1e-9,
                 relation(op(G::k_tilde).compose(op(G::f_tilde)),
                          op(G::f_tilde).compose(op(G::k_tilde)).scaled(1.0 / (qt * qt)))});
  out.push_back({"rep.tilde.ef", "[E~,F~] = (K~ - K~^{-1})/(q~ - q~^{-1})", pp, 1e-9,
                 relation(op(G::e_tilde).compose(op(G::f_tilde)) -
                              op(G::f_tilde).compose(op(G::e_tilde)),
                          (op(G::k_tilde) - op(G::k_tilde_inv))
                              .scaled(1.0 / (qt - 1.0 / qt)))});

  out.push_back({"rep.cross", "[X, Y~] = 0 for X in {K,E,F}, Y~ in the twin copy", pp,
                 1e-9, [op, probes, points](std::mt19937_64& rng) {
                   double worst = 0.0;
                   for (G a : {G::k, G::e, G::f})
                     for (G b : {G::k_tilde, G::e_tilde, G::f_tilde})
                       worst = std::max(
                           worst, op_mismatch(op(a).compose(op(b)),
                                              op(b).compose(op(a)), rng, probes, points));
                   return worst;
                 }});

  out.push_back(
      {"rep.grouplike", "Ad_xhat: E -> -q e^{2pi x/w2} E, F -> -q^{-1} e^{-2pi x/w2} F",
       pp + " x=" + fmt(cfg.x), 1e-9,
       [op, pr, q, qt, x = cfg.x, probes, points](std::mt19937_64& rng) {
         const DifferenceOperator ad = pi_xhat(x, pr);
         const DifferenceOperator ad_inv =
             DifferenceOperator::shift_op(-(x + Complex(0.0, pr.w())));
         const auto conj_by = [&](const DifferenceOperator& d) {
           return ad.compose(d).compose(ad_inv);
         };
         double worst = op_mismatch(
             conj_by(op(G::e)), op(G::e).scaled(-q * std::exp(2.0 * pi * x / pr.w2)),
             rng, probes, points);
         worst = std::max(
             worst, op_mismatch(conj_by(op(G::f)),
                                op(G::f).scaled(-std::exp(-2.0 * pi * x / pr.w2) / q),
                                rng, probes, points));
         worst = std::max(
             worst, op_mismatch(conj_by(op(G::e_tilde)),
                                op(G::e_tilde).scaled(-qt * std::exp(2.0 * pi * x / pr.w1)),
                                rng, probes, points));
         return std::max(worst, op_mismatch(conj_by(op(G::k)), op(G::k), rng, probes,
                                            points));
       }});

  out.push_back({"rep.casimir", "Omega acts as the scalar -2 cosh(2 pi lambda/w2)", pp,
                 1e-9, [pr, lam, probes, points](std::mt19937_64& rng) {
                   const Complex scalar = casimir_scalar(lam, pr);
                   double worst = op_mismatch(
                       casimir_op(lam, pr),
                       DifferenceOperator::identity().scaled(scalar), rng, probes,
                       points);
                   // and again through the handle interface the pairings use
                   for (int p = 0; p < probes; ++p) {
                     const FunctionHandle f = gaussian_handle(rand_box(rng, 0.5, 0.5));
                     const FunctionHandle of = casimir_apply(lam, pr, f);
                     for (int k = 0; k < points; ++k) {
                       const Complex z = rand_box(rng, 1.2, 1.2);
                       worst = std::max(worst, std::abs(of(z) - scalar * f(z)) /
                                                   std::max(1.0, std::abs(f(z))));
                     }
                   }
                   return worst;
                 }});
}

// ---- eigen: twisted primitives and their joint eigenfunctions -------------

inline void build_eigen(const SuiteConfig& cfg, Checks& out) {
  const ModulusPair pr = cfg.pair;
  const Complex lam = cfg.lambda;
  const Complex tau(0.11), rho(-0.07);
  const int pts = grid(cfg, "eigen", 50);
  const std::string pp = base_params(cfg) + " tau=" + fmt(tau) + " rho=" + fmt(rho) +
                         " la=" + fmt(lam) + " pts=" + std::to_string(pts);

  const auto sweep = [pts](auto residual_at) {
    double worst = 0.0;
    for (int k = 0; k < pts; ++k) {
      const Complex z(-1.5 + 3.0 * k / (pts - 1.0));
      worst = std::max(worst, residual_at(z));
    }
    return worst;
  };

  out.push_back({"eigen.y", "pi_la(Y_rho) H = mu_tau(rho) H", pp, 1e-9,
                 [pr, lam, tau, rho, sweep](std::mt19937_64&) {
                   HypGammaContext ctx(pr);
                   const FunctionHandle h = h_eigenfunction(ctx, tau, rho, lam);
                   const DifferenceOperator y =
                       twisted_primitive(rho, lam, pr, PrimitiveKind::plain);
                   const Complex mu = mu_eigen(rho, tau, pr);
                   return sweep([&](Complex z) {
                     const Complex hv = h(z);
                     return std::abs(y.apply(h.eval, z) - mu * hv) /
                            std::max(1.0, std::abs(hv));
                   });
                 }});

  out.push_back({"eigen.ytilde", "pi_la(Y~_rho) H = mu~_tau(rho) H", pp, 1e-9,
                 [pr, lam, tau, rho, sweep](std::mt19937_64&) {
                   HypGammaContext ctx(pr);
                   const FunctionHandle h = h_eigenfunction(ctx, tau, rho, lam);
                   const DifferenceOperator yt =
                       twisted_primitive(rho, lam, pr, PrimitiveKind::tilde);
                   const Complex mut = mu_eigen_tilde(rho, tau, pr);
                   return sweep([&](Complex z) {
                     const Complex hv = h(z);
                     return std::abs(yt.apply(h.eval, z) - mut * hv) /
                            std::max(1.0, std::abs(hv));
                   });
                 }});

  out.push_back(
      {"eigen.adjoint", "adjoint primitive: Y*_sigma(conj la) F = -mu_ups(sigma) F",
       base_params(cfg) + " sigma=0.08 ups=0.03 la=" + fmt(lam), 1e-9,
       [pr, lam, sweep](std::mt19937_64&) {
         HypGammaContext ctx(pr);
         const Complex sigma(0.08), ups(0.03);
         const FunctionHandle fh = f_eigenfunction(ctx, ups, sigma, lam);
         const DifferenceOperator ys =
             twisted_primitive(sigma, std::conj(lam), pr, PrimitiveKind::adjoint);
         const Complex mu = mu_eigen(std::conj(sigma), std::conj(ups), pr);
         return sweep([&](Complex z) {
           const Complex fv = fh(z);
           return std::abs(ys.apply(fh.eval, z) + mu * fv) /
                  std::max(1.0, std::abs(fv));
         });
       }});

  // the first-order form: the half-step quotient of H is an explicit cosh
  // ratio, checked without reference to the operator machinery
  out.push_back({"eigen.recursion",
                 "H(z+iw1/2) = [ch(z+a_n+it)ch(z+a_n-it)/ch(z+a_d+ir)ch(z+a_d-ir)] "
                 "H(z-iw1/2)",
                 pp, 1e-9, [pr, lam, tau, rho, sweep](std::mt19937_64&) {
                   HypGammaContext ctx(pr);
                   const FunctionHandle h = h_eigenfunction(ctx, tau, rho, lam);
                   const Complex iw(0.0, pr.w());
                   const Complex an = lam / 2.0 - 1.5 * iw, ad = -lam / 2.0 - 0.5 * iw;
                   return sweep([&](Complex z) {
                     const auto ch = [&](Complex a) {
                       return std::cosh(pi / pr.w2 * (z + a));
                     };
                     const Complex ratio = ch(an + 1.0i * tau) * ch(an - 1.0i * tau) /
                                           (ch(ad + 1.0i * rho) * ch(ad - 1.0i * rho));
                     const Complex up = h(z + Complex(0.0, pr.w1 / 2.0));
                     const Complex dn = h(z - Complex(0.0, pr.w1 / 2.0));
                     return std::abs(up - ratio * dn) / std::max(1.0, std::abs(up));
                   });
                 }});
}

// ---- adjoint: the star structure under the sesquilinear pairing -----------

inline void build_adjoint(const SuiteConfig& cfg, Checks& out) {
  const ModulusPair pr = cfg.pair;
  const Complex lam = cfg.lambda, lamb = std::conj(cfg.lambda);
  const std::string pp = base_params(cfg) + " la=" + fmt(lam);
  using G = Generator;
  const auto op = [pr](G g, Complex l) { return pi_lambda(g, l, pr); };

  struct Pairing {
    const char* name;
    const char* anchor;
    DifferenceOperator x;
    DifferenceOperator xstar;
  };
  const Pairing cases[] = {
      {"k", "<pi_la(K) f, g> = <f, pi_{conj la}(K) g>", op(G::k, lam), op(G::k, lamb)},
      {"e", "<pi_la(E) f, g> = <f, -pi_{conj la}(E) g>", op(G::e, lam),
       op(G::e, lamb).scaled(-1.0)},
      {"f", "<pi_la(F) f, g> = <f, -pi_{conj la}(F) g>", op(G::f, lam),
       op(G::f, lamb).scaled(-1.0)},
      {"fk", "<pi_la(FK) f, g> = <f, -pi_{conj la}(KF) g>",
       op(G::f, lam).compose(op(G::k, lam)),
       op(G::k, lamb).compose(op(G::f, lamb)).scaled(-1.0)},
      {"ekinv", "<pi_la(EK^{-1}) f, g> = <f, -pi_{conj la}(K^{-1}E) g>",
       op(G::e, lam).compose(op(G::k_inv, lam)),
       op(G::k_inv, lamb).compose(op(G::e, lamb)).scaled(-1.0)},
  };

  for (const auto& c : cases) {
    out.push_back({std::string("adjoint.") + c.name, c.anchor, pp, 1e-6,
                   [x = c.x, xstar = c.xstar](std::mt19937_64&) {
                     QuadratureSpec spec;
                     spec.truncation = 12.0;
                     spec.abs_tol = 1e-12;
                     const FunctionHandle f = gaussian_handle(Complex(0.25, 0.1));
                     const FunctionHandle g = gaussian_handle(Complex(-0.15, -0.2));
                     const Complex lhs = sesquilinear(apply_operator(x, f), g, spec);
                     const Complex rhs = sesquilinear(f, apply_operator(xstar, g), spec);
                     return std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
                   }});
  }
}

// ---- radial: the second-order equation satisfied by psi in x --------------

inline void build_radial(const SuiteConfig& cfg, Checks& out) {
  const int pts = grid(cfg, "line", 10);
  for (std::size_t gi = 0; gi < cfg.gammas.size(); ++gi) {
    const GammaSet gamma = cfg.gammas[gi];
    const std::string sfx = cfg.gammas.size() > 1 ? ".g" + std::to_string(gi) : "";
    const std::string pp = base_params(cfg) + " gamma=" + fmt(gamma) +
                           " la=" + fmt(cfg.lambda) + " pts=" + std::to_string(pts);

    const auto check = [pr = cfg.pair, gamma, la = cfg.lambda, spec = cfg.spec,
                        pts](bool twin) {
      return [=](std::mt19937_64&) {
        HypGammaContext ctx(pr);
        const double step = twin ? pr.w2 : pr.w1;
        const ModulusPair cpair = twin ? pr.swapped() : pr;
        const double period = twin ? pr.w1 : pr.w2;
        double worst = 0.0;
        for (int k = 0; k < pts; ++k) {
          const double x0 = 0.4 + 0.9 * k / (pts - 1.0);
          const RadialCoeffs rc = radial_coeffs(cpair, gamma, Complex(x0));
          const Complex p_up = psi(ctx, gamma, {Complex(x0, step), la}, spec).value;
          const Complex p_0 = psi(ctx, gamma, {Complex(x0, 0.0), la}, spec).value;
          const Complex p_dn = psi(ctx, gamma, {Complex(x0, -step), la}, spec).value;
          const Complex ev = -2.0 * std::cosh(2.0 * pi * la / period);
          const Complex lhs = rc.B * p_up + rc.C * p_0 + rc.D * p_dn;
          const double scale = std::abs(rc.B * p_up) + std::abs(rc.C * p_0) +
                               std::abs(rc.D * p_dn) + std::abs(ev * p_0);
          worst = std::max(worst, std::abs(lhs - ev * p_0) / scale);
        }
        return worst;
      };
    };

    out.push_back({"radial.w1" + sfx,
                   "B psi(x+iw1) + C psi(x) + D psi(x-iw1) = -2 cosh(2pi la/w2) psi(x)",
                   pp, 1e-6, check(false)});
    out.push_back({"radial.w2" + sfx,
                   "B~ psi(x+iw2) + C~ psi(x) + D~ psi(x-iw2) = -2 cosh(2pi la/w1) psi(x)",
                   pp, 1e-6, check(true)});
  }
}

// ---- awpoly: the polynomial eigenfunctions and the operator coefficient ----

inline void build_awpoly(const SuiteConfig& cfg, Checks& out) {
  const ModulusPair pr = cfg.pair;
  for (std::size_t gi = 0; gi < cfg.gammas.size(); ++gi) {
    const GammaSet gamma = cfg.gammas[gi];
    const std::string sfx = cfg.gammas.size() > 1 ? ".g" + std::to_string(gi) : "";
    const std::string pp = base_params(cfg) + " gamma=" + fmt(gamma);

    for (int n = 0; n <= 4; ++n) {
      out.push_back(
          {"awpoly.eigen.n" + std::to_string(n) + sfx,
           "L_gamma r_n = v(lambda_n) r_n", pp + " n=" + std::to_string(n), 1e-8,
           [pr, gamma, n](std::mt19937_64&) {
             const AWParams p = aw_params(pr, gamma);
             const AWOperatorSpec op{gamma, pr, AWOperatorSpec::step_w1};
             const Complex v =
                 eigenvalue_v(pr.w1, pr.w2, gamma, lambda_n(pr, gamma, n));
             const auto rn = [&](Complex z) { return aw_polynomial(n, z, p, pr); };
             double worst = 0.0;
             for (Complex x : {Complex(0.15), Complex(0.3), Complex(0.45),
                               Complex(0.6), Complex(0.2, 0.1)}) {
               const Complex lhs = apply_aw(op, rn, x);
               const Complex rhs = v * rn(x);
               worst = std::max(worst,
                                std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
             }
             return worst;
           }});
    }

    out.push_back({"awpoly.aforms" + sfx,
                   "product and sinh/cosh closed forms of the coefficient A agree", pp,
                   1e-10, [pr, gamma](std::mt19937_64& rng) {
                     double worst = 0.0;
                     for (int k = 0; k < 20; ++k) {
                       const Complex x = rand_box(rng, 1.2, 0.3) + Complex(0.3, 0.0);
                       worst = std::max(worst, rel_diff(coeff_A(pr, gamma, x),
                                                        coeff_A_sinh(pr, gamma, x)));
                     }
                     return worst;
                   }});
  }
}

// ---- diffeq: the four difference equations for each of R and S ------------

inline void build_diffeq(const SuiteConfig& cfg, Checks& out) {
  const ModulusPair pr = cfg.pair;
  static const EvalPoint kWindow[5] = {{Complex(0.1), Complex(0.12)},
                                       {Complex(0.05), Complex(0.06)},
                                       {Complex(0.15), Complex(0.18)},
                                       {Complex(0.08), Complex(0.15)},
                                       {Complex(0.12), Complex(0.09)}};

  for (std::size_t gi = 0; gi < cfg.gammas.size(); ++gi) {
    const GammaSet gamma = cfg.gammas[gi];
    const std::string sfx = cfg.gammas.size() > 1 ? ".g" + std::to_string(gi) : "";
    const std::string pp =
        base_params(cfg) + " gamma=" + fmt(gamma) + " pts=5(window)";

    for (WhichFunction which : {WhichFunction::r, WhichFunction::s}) {
      for (VariableSide side : {VariableSide::geometric, VariableSide::spectral}) {
        for (auto step : {AWOperatorSpec::step_w1, AWOperatorSpec::step_w2}) {
          const std::string id =
              std::string("diffeq.") + (which == WhichFunction::r ? "r" : "s") +
              (side == VariableSide::geometric ? ".geo" : ".spec") +
              (step == AWOperatorSpec::step_w1 ? ".w1" : ".w2") + sfx;
          const std::string var = side == VariableSide::geometric ? "x" : "lambda";
          const std::string fn = which == WhichFunction::r ? "R" : "S";
          const std::string stepw = step == AWOperatorSpec::step_w1 ? "iw1" : "iw2";
          out.push_back(
              {id,
               "A(" + var + ")(" + fn + "(" + var + "+" + stepw + ") - " + fn +
                   ") + A(-" + var + ")(" + fn + "(" + var + "-" + stepw + ") - " +
                   fn + ") = v " + fn,
               pp, 1e-6,
               [pr, gamma, which, side, step, spec = cfg.spec](std::mt19937_64&) {
                 HypGammaContext ctx(pr);
                 const GammaSet coeff =
                     side == VariableSide::geometric ? gamma : dual_gamma(gamma);
                 double worst = 0.0;
                 for (const EvalPoint& pt : kWindow) {
                   const double wa = step == AWOperatorSpec::step_w1 ? pr.w1 : pr.w2;
                   const double wb = step == AWOperatorSpec::step_w1 ? pr.w2 : pr.w1;
                   const Complex on =
                       side == VariableSide::geometric ? pt.lambda : pt.x;
                   const Complex f0 = (which == WhichFunction::r
                                           ? r_function(ctx, gamma, pt, spec)
                                           : s_function(ctx, gamma, pt, spec))
                                          .value;
                   const double scale =
                       std::abs(eigenvalue_v(wa, wb, coeff, on) * f0);
                   worst = std::max(
                       worst,
                       aw_residual(ctx, which, step, side, gamma, pt, spec) / scale);
                 }
                 return worst;
               }});
        }
      }
    }
  }
}

// ---- duality: the exchange (x,gamma) <-> (lambda,ghat) --------------------

inline void build_duality(const SuiteConfig& cfg, Checks& out) {
  const ModulusPair pr = cfg.pair;
  for (std::size_t gi = 0; gi < cfg.gammas.size(); ++gi) {
    const GammaSet gamma = cfg.gammas[gi];
    const std::string sfx = cfg.gammas.size() > 1 ? ".g" + std::to_string(gi) : "";
    const std::string pp = base_params(cfg) + " gamma=" + fmt(gamma) +
                           " x=" + fmt(cfg.x) + " la=" + fmt(cfg.lambda);
    const EvalPoint pt{cfg.x, cfg.lambda};

    out.push_back({"duality.psi" + sfx, "psi(gamma;x,la) = psi(ghat;la,x)", pp, 1e-7,
                   [pr, gamma, pt, spec = cfg.spec](std::mt19937_64&) {
                     HypGammaContext ctx(pr);
                     return rel_diff(
                         psi(ctx, gamma, pt, spec).value,
                         psi(ctx, dual_gamma(gamma), {pt.lambda, pt.x}, spec).value);
                   }});
    out.push_back({"duality.r" + sfx, "R(gamma;x,la) = R(ghat;la,x)", pp, 1e-7,
                   [pr, gamma, pt, spec = cfg.spec](std::mt19937_64&) {
                     HypGammaContext ctx(pr);
                     return rel_diff(
                         r_function(ctx, gamma, pt, spec).value,
                         r_function(ctx, dual_gamma(gamma), {pt.lambda, pt.x}, spec)
                             .value);
                   }});
    out.push_back({"duality.s" + sfx, "S(gamma;x,la) = S(ghat;la,x)", pp, 1e-7,
                   [pr, gamma, pt, spec = cfg.spec](std::mt19937_64&) {
                     HypGammaContext ctx(pr);
                     return rel_diff(
                         s_function(ctx, gamma, pt, spec).value,
                         s_function(ctx, dual_gamma(gamma), {pt.lambda, pt.x}, spec)
                             .value);
                   }});
  }
}

// ---- symmetry: chart sign flips, modulus swap, Weyl invariance ------------

inline void build_symmetry(const SuiteConfig& cfg, Checks& out) {
  const ModulusPair pr = cfg.pair;
  for (std::size_t gi = 0; gi < cfg.gammas.size(); ++gi) {
    const GammaSet gamma = cfg.gammas[gi];
    const std::string sfx = cfg.gammas.size() > 1 ? ".g" + std::to_string(gi) : "";
    const std::string pp = base_params(cfg) + " gamma=" + fmt(gamma) +
                           " x=" + fmt(cfg.x) + " la=" + fmt(cfg.lambda);
    const EvalPoint pt{cfg.x, cfg.lambda};
    const QuadratureSpec spec = cfg.spec;

    // each flip rewrites the chart (rho,sigma,tau,upsilon) and possibly the
    // signs of the two variables; psi must come back unchanged
    struct Flip {
      const char* name;
      const char* anchor;
      int sr, ss, st, su;  // sign on each chart coordinate
      bool swap_pairs;     // (r,s,t,u) -> (t,u,r,s)
      bool transpose;      // (r,s,t,u) -> (u,t,s,r)
      double sx, sl;       // sign on x, lambda
    };
    static const Flip flips[] = {
        {"rho", "psi invariant under rho -> -rho", -1, 1, 1, 1, false, false, 1, 1},
        {"sigma", "psi invariant under sigma -> -sigma", 1, -1, 1, 1, false, false, 1, 1},
        {"tau", "psi invariant under tau -> -tau", 1, 1, -1, 1, false, false, 1, 1},
        {"upsilon", "psi invariant under upsilon -> -upsilon", 1, 1, 1, -1, false,
         false, 1, 1},
        {"x", "psi(r,s,t,u;x,la) = psi(t,u,r,s;-x,la)", 1, 1, 1, 1, true, false, -1, 1},
        {"xlambda", "psi(r,s,t,u;x,la) = psi(u,t,s,r;-x,-la)", 1, 1, 1, 1, false, true,
         -1, -1},
    };
    for (const Flip& f : flips) {
      out.push_back(
          {std::string("symmetry.flip.") + f.name + sfx, f.anchor, pp, 1e-7,
           [pr, gamma, pt, spec, f](std::mt19937_64&) {
             HypGammaContext ctx(pr);
             const Complex r = gamma.rho(), s = gamma.sigma();
             const Complex t = gamma.tau(), u = gamma.upsilon();
             GammaSet flipped;
             if (f.swap_pairs)
               flipped = gamma_from_rstu(t, u, r, s);
             else if (f.transpose)
               flipped = gamma_from_rstu(u, t, s, r);
             else
               flipped = gamma_from_rstu(double(f.sr) * r, double(f.ss) * s,
                                         double(f.st) * t, double(f.su) * u);
             return rel_diff(
                 psi(ctx, gamma, pt, spec).value,
                 psi(ctx, flipped, {f.sx * pt.x, f.sl * pt.lambda}, spec).value);
           }});
    }

    out.push_back({"symmetry.swap" + sfx, "psi(w1,w2;gamma;x,la) = psi(w2,w1;gamma;x,la)",
                   pp, 1e-7, [pr, gamma, pt, spec](std::mt19937_64&) {
                     HypGammaContext ctx(pr);
                     HypGammaContext sw(pr.swapped());
                     return rel_diff(psi(ctx, gamma, pt, spec).value,
                                     psi(sw, gamma, pt, spec).value);
                   }});

    // normalized-form Weyl invariance: sign flips for S, permutations and the
    // even sign change for R
    const auto norm = [pr, pt, spec](WhichFunction which, const GammaSet& g) {
      HypGammaContext ctx(pr);
      return normalized_form(ctx, which, g, pt, spec);
    };
    out.push_back({"symmetry.weyl.s.rho" + sfx,
                   "S/(c(gamma;x) c(ghat;la) N) invariant under rho -> -rho", pp, 1e-6,
                   [norm, gamma](std::mt19937_64&) {
                     const GammaSet f = gamma_from_rstu(-gamma.rho(), gamma.sigma(),
                                                        gamma.tau(), gamma.upsilon());
                     return rel_diff(norm(WhichFunction::s, gamma),
                                     norm(WhichFunction::s, f));
                   }});
    out.push_back({"symmetry.weyl.s.upsilon" + sfx,
                   "S/(c(gamma;x) c(ghat;la) N) invariant under upsilon -> -upsilon",
                   pp, 1e-6, [norm, gamma](std::mt19937_64&) {
                     const GammaSet f = gamma_from_rstu(gamma.rho(), gamma.sigma(),
                                                        gamma.tau(), -gamma.upsilon());
                     return rel_diff(norm(WhichFunction::s, gamma),
                                     norm(WhichFunction::s, f));
                   }});
    out.push_back({"symmetry.weyl.r.cycle" + sfx,
                   "R/(c c N) invariant under the 3-cycle of (gamma1,gamma2,gamma3)",
                   pp, 1e-6, [norm, gamma](std::mt19937_64&) {
                     GammaSet perm = gamma;
                     perm.g = {gamma.g[0], gamma.g[2], gamma.g[3], gamma.g[1]};
                     return rel_diff(norm(WhichFunction::r, gamma),
                                     norm(WhichFunction::r, perm));
                   }});
    out.push_back({"symmetry.weyl.r.swap01" + sfx,
                   "R/(c c N) invariant under gamma0 <-> gamma1", pp, 1e-6,
                   [norm, gamma](std::mt19937_64&) {
                     GammaSet sw = gamma;
                     sw.g = {gamma.g[1], gamma.g[0], gamma.g[2], gamma.g[3]};
                     return rel_diff(norm(WhichFunction::r, gamma),
                                     norm(WhichFunction::r, sw));
                   }});
    out.push_back({"symmetry.weyl.r.evenflip" + sfx,
                   "R/(c c N) invariant under (gamma0,gamma1) -> (-gamma0,-gamma1)", pp,
                   1e-6, [norm, gamma](std::mt19937_64&) {
                     GammaSet fl = gamma;
                     fl.g = {-gamma.g[0], -gamma.g[1], gamma.g[2], gamma.g[3]};
                     return rel_diff(norm(WhichFunction::r, gamma),
                                     norm(WhichFunction::r, fl));
                   }});
  }
}

// ---- reduction: both integrals collapse onto the polynomials --------------

inline void build_reduction(const SuiteConfig& cfg, Checks& out) {
  const ModulusPair pr = cfg.pair;
  const int pts = grid(cfg, "line", 10);
  for (std::size_t gi = 0; gi < cfg.gammas.size(); ++gi) {
    const GammaSet gamma = cfg.gammas[gi];
    const std::string sfx = cfg.gammas.size() > 1 ? ".g" + std::to_string(gi) : "";
    const std::string pp = base_params(cfg) + " gamma=" + fmt(gamma) +
                           " pts=" + std::to_string(pts);

    for (WhichFunction which : {WhichFunction::r, WhichFunction::s}) {
      const std::string fn = which == WhichFunction::r ? "r" : "s";
      const std::string FN = which == WhichFunction::r ? "R" : "S";
      for (int n = 0; n <= 2; ++n) {
        const std::string anchor =
            n == 0 ? FN + "(gamma;x,lambda_0) = 1"
                   : FN + "(gamma;x,lambda_" + std::to_string(n) + ") = r_" +
                         std::to_string(n) + "(x)";
        out.push_back(
            {"reduction." + fn + ".n" + std::to_string(n) + sfx, anchor,
             pp + " n=" + std::to_string(n), n == 0 ? 1e-7 : 1e-6,
             [pr, gamma, which, n, pts, spec = cfg.spec](std::mt19937_64&) {
               HypGammaContext ctx(pr);
               const AWParams p = aw_params(pr, gamma);
               double worst = 0.0;
               for (int k = 0; k < pts; ++k) {
                 const Complex x(0.05 + 0.45 * k / (pts - 1.0));
                 const Complex got = which == WhichFunction::r
                                         ? r_at_discrete(ctx, gamma, n, x, spec)
                                         : s_at_discrete(ctx, gamma, n, x, spec);
                 worst = std::max(worst, n == 0 ? std::abs(got - 1.0)
                                                : rel_diff(got,
                                                           aw_polynomial(n, x, p, pr)));
               }
               return worst;
             }});
      }
    }
  }
}

// ---- casorati: linear dependence of the two solutions ---------------------

inline void build_casorati(const SuiteConfig& cfg, Checks& out) {
  const ModulusPair pr = cfg.pair;
  static const Complex kZ[5] = {Complex(0.3), Complex(0.6), Complex(0.9),
                                Complex(1.3), Complex(0.45, 0.1)};
  for (std::size_t gi = 0; gi < cfg.gammas.size(); ++gi) {
    const GammaSet gamma = cfg.gammas[gi];
    const std::string sfx = cfg.gammas.size() > 1 ? ".g" + std::to_string(gi) : "";
    for (int zi = 0; zi < 5; ++zi) {
      out.push_back(
          {"casorati.z" + std::to_string(zi) + sfx,
           "S(z+iw1/2) R(z-iw1/2) = S(z-iw1/2) R(z+iw1/2)",
           base_params(cfg) + " gamma=" + fmt(gamma) + " z=" + fmt(kZ[zi]) +
               " la=" + fmt(cfg.lambda),
           1e-6, [pr, gamma, z = kZ[zi], la = cfg.lambda, spec = cfg.spec](std::mt19937_64&) {
             HypGammaContext ctx(pr);
             const Complex h(0.0, 0.5 * pr.w1);
             const Complex sp = s_function(ctx, gamma, {z + h, la}, spec).value;
             const Complex sm = s_function(ctx, gamma, {z - h, la}, spec).value;
             const Complex rp = r_function(ctx, gamma, {z + h, la}, spec).value;
             const Complex rm = r_function(ctx, gamma, {z - h, la}, spec).value;
             return std::abs(sp * rm - sm * rp) /
                    (std::abs(sp * rm) + std::abs(sm * rp));
           }});
    }
  }
}

// ---- main: the two integral representations agree on the window -----------

inline void build_main(const SuiteConfig& cfg, Checks& out) {
  const ModulusPair pr = cfg.pair;
  // the gamma axis of the grid; a second set is supplied if the config only
  // carries one, so the default run still covers a non-reference set
  std::vector<GammaSet> gsets = cfg.gammas;
  if (gsets.size() == 1)
    gsets.push_back(GammaSet{{Complex(0.06), Complex(0.04), Complex(0.03), Complex(0.02)}});

  static const double kX[3] = {0.05, 0.1, 0.15};
  static const double kLa[3] = {0.06, 0.12, 0.18};
  for (std::size_t gi = 0; gi < gsets.size(); ++gi) {
    for (int xi = 0; xi < 3; ++xi) {
      for (int li = 0; li < 3; ++li) {
        const EvalPoint pt{Complex(kX[xi]), Complex(kLa[li])};
        out.push_back({"main.g" + std::to_string(gi) + ".x" + std::to_string(xi) +
                           ".la" + std::to_string(li),
                       "R(gamma;x,la) = S(gamma;x,la) on the window",
                       base_params(cfg) + " gamma=" + fmt(gsets[gi]) +
                           " x=" + fmt(pt.x) + " la=" + fmt(pt.lambda),
                       1e-6,
                       [pr, gamma = gsets[gi], pt, spec = cfg.spec](std::mt19937_64&) {
                         HypGammaContext ctx(pr);
                         return verify_r_equals_s(ctx, gamma, pt, spec);
                       }});
      }
    }
  }
}

// ---- asymptotics: growth envelope and the block decomposition -------------

inline void build_asymptotics(const SuiteConfig& cfg, Checks& out) {
  const ModulusPair pr = cfg.pair;
  const GammaSet gamma = cfg.gammas[0];
  const std::string pp = base_params(cfg) + " gamma=" + fmt(gamma);

  out.push_back(
      {"asymptotics.slope",
       "log|S(x,la)| ~ alpha (|Im la| - Re ghat0 - w) x as x -> +inf",
       pp + " la=(0.1,0.2)", 0.05, [pr, gamma](std::mt19937_64&) {
        HypGammaContext ctx(pr);
        const Complex la(0.1, 0.2);
        const double bound =
            pr.alpha() * (std::abs(la.imag()) - gamma.ghat0().real() - pr.w());
        const double slope =
            growth_estimate(ctx, WhichFunction::s, gamma, la, {}, 0.0, 0.0, 6);
        return std::abs(slope - bound) / std::abs(bound);
       }});

  out.push_back(
      {"asymptotics.blocks",
       "psi equals the sum of its five interval blocks split at -x+-eps, +-eps",
       pp + " x=4 la=(0.1,0.2)", 1e-8, [pr, gamma](std::mt19937_64&) {
        HypGammaContext ctx(pr);
        const Complex x(4.0, 0.0), la(0.1, 0.2);
        QuadratureSpec spec;
        spec.abs_tol = 1e-22;
        spec.rel_tol = 3e-10;
        spec.noise = 1e-12;
        const auto direct = psi(ctx, gamma, {x, la}, spec);
        const double T = direct.contour_used.truncation;

        const Complex ihw(0.0, 0.5 * pr.w());
        const Complex la2 = 0.5 * la;
        const Complex it = 1.0i * gamma.tau(), is = 1.0i * gamma.sigma();
        const Complex ir = 1.0i * gamma.rho(), iu = 1.0i * gamma.upsilon();
        const auto f = [&](Complex zz) {
          return ctx(zz + x + la2 - ihw + it) * ctx(zz + x + la2 - ihw - it) *
                 ctx(zz - la2 - ihw + is) * ctx(zz - la2 - ihw - is) *
                 ctx.recip(zz + x - la2 + ihw + ir) * ctx.recip(zz + x - la2 + ihw - ir) *
                 ctx.recip(zz + la2 + ihw + iu) * ctx.recip(zz + la2 + ihw - iu);
        };
        const double chart =
            std::max({std::abs(gamma.rho().imag()), std::abs(gamma.sigma().imag()),
                      std::abs(gamma.tau().imag()), std::abs(gamma.upsilon().imag())});
        const double eps = std::max(pr.w1, pr.w2) + 0.5 * std::abs(la.real()) + chart;
        const double cuts[6] = {-T, -x.real() - eps, -x.real() + eps, -eps, eps, T};
        Complex sum = 0.0;
        for (int i = 0; i < 5; ++i)
          sum += hypeval::detail::integrate_vertices(
                     f, {Complex(cuts[i], 0.0), Complex(cuts[i + 1], 0.0)}, spec)
                     .value;
        return std::abs(sum - direct.value) / std::abs(direct.value);
       }});
}

inline const std::vector<SuiteInfo>& catalog() {
  static const std::vector<SuiteInfo> suites = {
      {"gamma", "difference equations, reflection, modular swap, scaling, "
                "conjugation, and the residue of the hyperbolic gamma function",
       {"G(z+iw1/2) = 2 cosh(pi z/w2) G(z-iw1/2)",
        "G(z+iw2/2) = 2 cosh(pi z/w1) G(z-iw2/2)", "G(z) G(-z) = 1",
        "G(w1,w2;z) = G(w2,w1;z)", "G(mu w1, mu w2; mu z) = G(w1,w2;z)",
        "conj(G(z)) = G(-conj(z))", "Res_{z=-iw} G = (i/2pi) sqrt(w1 w2)"}},
      {"representation", "relations of the two commuting algebra copies and the "
                         "group-like conjugation, as operator identities on probes",
       {"K K^{-1} = 1", "K E = q^2 E K", "K F = q^{-2} F K",
        "[E,F] = (K - K^{-1})/(q - q^{-1})", "[X, Y~] = 0 across the copies",
        "Ad_xhat rescales E, F, E~ by explicit exponentials",
        "Omega acts as -2 cosh(2 pi lambda/w2)"}},
      {"eigen", "twisted-primitive eigenfunction equations and the first-order "
                "half-step recursion",
       {"pi_la(Y_rho) H = mu_tau(rho) H", "pi_la(Y~_rho) H = mu~_tau(rho) H",
        "Y*_sigma(conj la) F = -mu_ups(sigma) F",
        "H(z+iw1/2)/H(z-iw1/2) is an explicit cosh quotient"}},
      {"adjoint", "star structure of the generators under the sesquilinear pairing",
       {"<pi_la(X) f, g> = <f, pi_{conj la}(X*) g> for X in {K, E, F, FK, EK^{-1}}"}},
      {"radial", "second-order difference equation in x satisfied by the pairing "
                 "integral, both step directions",
       {"B psi(x+iw1) + C psi(x) + D psi(x-iw1) = -2 cosh(2pi la/w2) psi(x)",
        "B~ psi(x+iw2) + C~ psi(x) + D~ psi(x-iw2) = -2 cosh(2pi la/w1) psi(x)"}},
      {"awpoly", "polynomial eigenfunctions of the second-order operator and the "
                 "two closed forms of its coefficient",
       {"L_gamma r_n = v(lambda_n) r_n for n <= 4",
        "product and sinh/cosh closed forms of A agree"}},
      {"diffeq", "the four difference equations satisfied by each of R and S",
       {"A(x)(f(x+iw1)-f) + A(-x)(f(x-iw1)-f) = v(la) f, f in {R,S}",
        "the same with step iw2", "the dual equations in lambda with ghat"}},
      {"duality", "exchange of the geometric and spectral variables",
       {"psi(gamma;x,la) = psi(ghat;la,x)", "R(gamma;x,la) = R(ghat;la,x)",
        "S(gamma;x,la) = S(ghat;la,x)"}},
      {"symmetry", "chart sign flips, variable reflections, the modulus swap, and "
                   "Weyl invariance of the normalized forms",
       {"psi invariant under single sign flips of rho, sigma, tau, upsilon",
        "psi(r,s,t,u;x,la) = psi(t,u,r,s;-x,la)",
        "psi(r,s,t,u;x,la) = psi(u,t,s,r;-x,-la)",
        "psi(w1,w2) = psi(w2,w1)",
        "S/(c c N) invariant under rho -> -rho and upsilon -> -upsilon",
        "R/(c c N) invariant under permutations of (gamma1,gamma2,gamma3) and the "
        "even sign flip"}},
      {"reduction", "both integrals collapse onto the polynomials at the discrete "
                    "spectral points",
       {"R(gamma;x,lambda_0) = S(gamma;x,lambda_0) = 1",
        "R(gamma;x,lambda_n) = S(gamma;x,lambda_n) = r_n(x) for n = 1, 2"}},
      {"casorati", "vanishing discrete Wronskian of the two solutions",
       {"S(z+iw1/2) R(z-iw1/2) = S(z-iw1/2) R(z+iw1/2)"}},
      {"main", "the hypergeometric and matrix-coefficient representations agree",
       {"R(gamma;x,la) = S(gamma;x,la) on the window"}},
      {"asymptotics", "growth envelope in the geometric variable and the "
                      "large-separation block decomposition of the pairing integral",
       {"log|S| slope = alpha(|Im la| - Re ghat0 - w)",
        "psi equals the sum of its five interval blocks"}},
  };
  return suites;
}

inline Checks build_checks(const SuiteConfig& cfg) {
  Checks out;
  if (cfg.suite == "gamma") build_gamma(cfg, out);
  else if (cfg.suite == "representation") build_representation(cfg, out);
  else if (cfg.suite == "eigen") build_eigen(cfg, out);
  else if (cfg.suite == "adjoint") build_adjoint(cfg, out);
  else if (cfg.suite == "radial") build_radial(cfg, out);
  else if (cfg.suite == "awpoly") build_awpoly(cfg, out);
  else if (cfg.suite == "diffeq") build_diffeq(cfg, out);
  else if (cfg.suite == "duality") build_duality(cfg, out);
  else if (cfg.suite == "symmetry") build_symmetry(cfg, out);
  else if (cfg.suite == "reduction") build_reduction(cfg, out);
  else if (cfg.suite == "casorati") build_casorati(cfg, out);
  else if (cfg.suite == "main") build_main(cfg, out);
  else if (cfg.suite == "asymptotics") build_asymptotics(cfg, out);
  return out;
}

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("HYPEVAL_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

// All configuration problems are collected and reported together, before any
// check is evaluated.
inline std::vector<std::string> validate(const SuiteConfig& cfg, const Checks& checks) {
  std::vector<std::string> problems;
  bool known = false;
  for (const auto& s : catalog()) known = known || s.id == cfg.suite;
  if (!known) problems.push_back("unknown suite '" + cfg.suite + "'");
  if (cfg.gammas.empty())
    problems.push_back("parameter set list is empty; nothing to evaluate");
  if (!(cfg.spec.abs_tol > 0.0) || !(cfg.spec.rel_tol > 0.0))
    problems.push_back("quadrature tolerances must be positive");
  if (cfg.spec.max_depth < 1) problems.push_back("quadrature max_depth must be >= 1");
  if (cfg.spec.nodes_per_panel < 4)
    problems.push_back("quadrature nodes_per_panel must be >= 4");
  if (cfg.threads < 0) problems.push_back("threads must be >= 0");

  static const char* grid_keys[] = {"strip", "probes", "points", "eigen", "line"};
  for (const auto& [key, value] : cfg.grid_override) {
    bool ok = false;
    for (const char* k : grid_keys) ok = ok || key == k;
    if (!ok) problems.push_back("unknown grid key '" + key + "'");
    if (value < 2) problems.push_back("grid '" + key + "' must be >= 2");
  }

  for (const auto& [id, tol] : cfg.tol_override) {
    bool found = false;
    for (const auto& c : checks) found = found || c.id == id;
    if (!found)
      problems.push_back("tolerance override names unknown check id '" + id + "'");
    if (!(tol > 0.0)) problems.push_back("tolerance for '" + id + "' must be positive");
  }

  // domain gates: suites that evaluate the integrals need every gamma set
  // inside the window the identities are stated on, and the configured
  // variables too when the checks actually read them
  const bool uses_gamma = cfg.suite != "gamma" && cfg.suite != "representation" &&
                          cfg.suite != "eigen" && cfg.suite != "adjoint";
  const bool at_cfg_x = cfg.suite == "duality" || cfg.suite == "symmetry";
  const bool at_cfg_la =
      at_cfg_x || cfg.suite == "radial" || cfg.suite == "casorati";
  if (uses_gamma) {
    for (std::size_t gi = 0; gi < cfg.gammas.size(); ++gi) {
      const DomainReport rep = domain_report(
          cfg.pair, cfg.gammas[gi], at_cfg_x ? cfg.x : Complex(0.0),
          at_cfg_la ? cfg.lambda : Complex(0.0));
      if (!rep.window_ok)
        problems.push_back("parameter set " + std::to_string(gi) +
                           " fails the window gate (need Re gamma_j > 0 and "
                           "|x|,|lambda|,|gamma_j| < w/6)");
    }
  }
  return problems;
}

inline std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace detail

inline const std::vector<SuiteInfo>& list_suites() { return detail::catalog(); }

inline nlohmann::ordered_json suites_json() {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& s : list_suites()) {
    nlohmann::ordered_json e;
    e["suite"] = s.id;
    e["summary"] = s.summary;
    e["anchors"] = s.anchors;
    arr.push_back(e);
  }
  return arr;
}

inline nlohmann::ordered_json report_json(const SuiteReport& rep) {
  nlohmann::ordered_json j;
  j["suite"] = rep.suite;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& c : rep.checks) {
    nlohmann::ordered_json e;
    e["id"] = c.id;
    e["anchor"] = c.anchor;
    e["params"] = c.params;
    e["residual"] = c.residual;
    e["tol"] = c.tol;
    e["pass"] = c.pass;
    e["ms"] = c.ms;
    arr.push_back(e);
  }
  j["checks"] = arr;
  j["summary"] = {{"pass", rep.passed()}, {"fail", rep.failed()}};
  return j;
}

inline void write_report_files(const SuiteReport& rep, const std::string& out_path) {
  {
    std::ofstream os(out_path);
    if (!os) throw ConfigError("cannot open report path '" + out_path + "'");
    os << report_json(rep).dump(2) << "\n";
  }
  std::string csv_path = out_path;
  const std::size_t slash = csv_path.find_last_of('/');
  const std::size_t dot = csv_path.find_last_of('.');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash))
    csv_path.resize(dot);
  csv_path += ".csv";
  std::ofstream os(csv_path);
  if (!os) throw ConfigError("cannot open report path '" + csv_path + "'");
  os << "id,residual,tol,pass,ms\n" << std::setprecision(17);
  for (const auto& c : rep.checks)
    os << c.id << "," << c.residual << "," << c.tol << "," << (c.pass ? 1 : 0) << ","
       << c.ms << "\n";
}

// Runs every check of the named suite on a worker pool.  Evaluation errors do
// not stop the run: the failing check records an infinite residual (clamped
// to DBL_MAX for serialization) with the message appended to its params.
inline SuiteReport run_suite(const SuiteConfig& cfg) {
  detail::Checks checks = detail::build_checks(cfg);
  const std::vector<std::string> problems = detail::validate(cfg, checks);
  if (!problems.empty()) throw ConfigError(detail::join(problems, "; "));

  for (auto& c : checks) {
    const auto it = cfg.tol_override.find(c.id);
    if (it != cfg.tol_override.end()) c.tol = it->second;
  }

  std::vector<CheckRecord> records(checks.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= checks.size()) return;
      const detail::CheckSpec& c = checks[i];
      CheckRecord rec{c.id, c.anchor, c.params, 0.0, c.tol, false, 0.0};
      const auto t0 = std::chrono::steady_clock::now();
      try {
        std::mt19937_64 rng(cfg.seed ^ detail::fnv1a(c.id));
        rec.residual = c.run(rng);
        rec.pass = rec.residual <= c.tol;
      } catch (const std::exception& e) {
        rec.residual = std::numeric_limits<double>::max();
        rec.pass = false;
        rec.params += std::string(" error=") + e.what();
      }
      if (cfg.record_timing)
        rec.ms = std::chrono::duration<double, std::milli>(
                     std::chrono::steady_clock::now() - t0)
                     .count();
      records[i] = std::move(rec);
    }
  };

  const int nthreads = detail::resolve_threads(cfg.threads);
  std::vector<std::thread> pool;
  for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  SuiteReport rep;
  rep.suite = cfg.suite;
  rep.checks = std::move(records);
  if (!cfg.out_path.empty()) write_report_files(rep, cfg.out_path);
  return rep;
}

// ---- grid emission ---------------------------------------------------------

struct AxisSpec {
  std::string var = "x";  // "z" for G, "x" or "lambda" for the integrals
  double from = 0.0;
  double to = 1.0;
  int steps = 11;
};

// One CSV row per axis point: t, re, im, abs, quadrature error, status.  Rows
// whose evaluation throws keep their place with the message in the status
// column (commas stripped) instead of being dropped.
inline void emit_grid(std::ostream& os, const HypGammaContext& ctx,
                      const std::string& fn, const GammaSet& gamma, EvalPoint fixed,
                      const AxisSpec& axis, const QuadratureSpec& spec = {}) {
  if (axis.steps < 2) throw ConfigError("grid needs at least 2 steps");
  int aw_n = -1;
  if (fn.rfind("aw:", 0) == 0) {
    aw_n = std::atoi(fn.c_str() + 3);
    if (aw_n < 0) throw ConfigError("bad polynomial degree in '" + fn + "'");
  } else if (fn != "g" && fn != "psi" && fn != "r" && fn != "s") {
    throw ConfigError("unknown function id '" + fn + "' (want g, psi, r, s, aw:N)");
  }
  if (fn == "g" ? axis.var != "z" : axis.var != "x" && axis.var != "lambda")
    throw ConfigError("axis variable '" + axis.var + "' does not apply to '" + fn + "'");

  const AWParams p = aw_params(ctx.pair(), gamma);
  os << "t,re,im,abs,err,status\n" << std::setprecision(17);
  for (int k = 0; k < axis.steps; ++k) {
    const double t = axis.from + (axis.to - axis.from) * k / (axis.steps - 1.0);
    os << t << ",";
    try {
      Complex value;
      double err = 0.0;
      if (fn == "g") {
        const GammaEval ev = ctx.eval(Complex(t, 0.0));
        value = ev.value;
        err = ctx.tol() * std::abs(value);
      } else if (aw_n >= 0) {
        value = aw_polynomial(aw_n, Complex(t, 0.0), p, ctx.pair());
      } else {
        EvalPoint pt = fixed;
        (axis.var == "x" ? pt.x : pt.lambda) = Complex(t, 0.0);
        const HypEvalResult res = fn == "psi" ? psi(ctx, gamma, pt, spec)
                                : fn == "r"   ? r_function(ctx, gamma, pt, spec)
                                              : s_function(ctx, gamma, pt, spec);
        value = res.value;
        err = res.quadrature.error_estimate;
      }
      os << value.real() << "," << value.imag() << "," << std::abs(value) << "," << err
         << ",ok\n";
    } catch (const std::exception& e) {
      std::string msg = e.what();
      for (char& c : msg)
        if (c == ',' || c == '\n') c = ';';
      os << ",,,," << msg << "\n";
    }
  }
}

}  // namespace hypeval::verify
