#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "errors.hpp"
#include "params.hpp"

namespace hypeval {

// ---------------------------------------------------------------------------
// Gauss-Legendre rules

struct GLRule {
  std::vector<double> x;  // nodes on (-1, 1)
  std::vector<double> w;
};

namespace detail {

inline GLRule compute_gl(int n) {
  GLRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-16 * (1.0 + std::abs(x))) break;
    }
    r.x[i] = -x;
    r.x[n - 1 - i] = x;
    r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
  return r;
}

inline const GLRule& gl_rule(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<GLRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<GLRule>(compute_gl(n));
  return *slot;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Specs, pole sequences, contours

struct QuadratureSpec {
  double truncation = 0.0;  // half-length of the line contour; 0 = derive from decay
  double abs_tol = 1e-11;
  double rel_tol = 1e-11;
  double noise = 0.0;       // relative uncertainty of integrand values; bisection
                            // cannot resolve structure below this level
  int max_depth = 40;
  int nodes_per_panel = 15;  // >= 4
};

// Vertical lattice of poles: anchor + i*(m*w1 + n*w2)*direction, m, n >= 0.
// direction +1 climbs to +i*inf (the anchor is the lowest point), -1 descends
// (the anchor is the highest point).  Both generators are purely imaginary,
// so every point of one sequence shares the anchor's real part.
struct PoleSequence {
  Complex anchor;
  double w1 = 1.0;
  double w2 = 1.0;
  int direction = +1;

  // Lattice points nearest the anchor, by depth; enough for separation
  // checks since the rest only move further from the real axis.
  std::vector<Complex> leading_points(int count = 20, double max_depth = -1.0) const {
    std::vector<double> depths;
    const double lim = max_depth > 0 ? max_depth
                                     : (std::max(w1, w2) * (count + 1));
    for (int m = 0; m * w1 <= lim; ++m)
      for (int n = 0; m * w1 + n * w2 <= lim; ++n)
        depths.push_back(m * w1 + n * w2);
    std::sort(depths.begin(), depths.end());
    depths.erase(std::unique(depths.begin(), depths.end()), depths.end());
    std::vector<Complex> pts;
    for (double d : depths) {
      if ((int)pts.size() >= count) break;
      pts.push_back(anchor + Complex(0.0, direction * d));
    }
    return pts;
  }
};

// Open left-to-right polyline from -T to +T on the real axis.  Vertices have
// strictly increasing real parts; interior vertices may leave the axis.
struct Contour {
  std::vector<Complex> vertices;
  double truncation = 0.0;

  bool valid() const {
    if (vertices.size() < 2) return false;
    if (vertices.front().imag() != 0.0 || vertices.back().imag() != 0.0) return false;
    for (size_t i = 1; i < vertices.size(); ++i)
      if (!(vertices[i].real() > vertices[i - 1].real())) return false;
    return true;
  }

  // Height of the polyline over a given abscissa.
  double height_at(double x) const {
    if (x <= vertices.front().real()) return vertices.front().imag();
    for (size_t i = 1; i < vertices.size(); ++i) {
      if (x <= vertices[i].real()) {
        const double x0 = vertices[i - 1].real(), x1 = vertices[i].real();
        const double t = (x - x0) / (x1 - x0);
        return (1.0 - t) * vertices[i - 1].imag() + t * vertices[i].imag();
      }
    }
    return vertices.back().imag();
  }
};

inline Contour straight_contour(double T) {
  return Contour{{Complex(-T, 0.0), Complex(T, 0.0)}, T};
}

struct IntegralResult {
  Complex value{0.0, 0.0};
  double error_estimate = 0.0;
  int panels_used = 0;
  double tail_bound = 0.0;
};

// Adaptive refinement gave up before reaching tolerance; `partial` holds the
// best estimate together with its (honest) error estimate.
struct AccuracyError : Error {
  IntegralResult partial;
  AccuracyError(const std::string& msg, IntegralResult r) : Error(msg), partial(r) {}
};

// Meromorphic function plus the metadata integration needs: where its poles
// accumulate, how fast it grows along the real direction, and how wide the
// pole-free strip around the real axis is.
struct FunctionHandle {
  std::function<Complex(Complex)> eval;
  std::vector<PoleSequence> poles;
  double growth_rate = 0.0;  // log|f(z)| <~ growth_rate * |Re z|
  double strip_halfwidth = std::numeric_limits<double>::infinity();
  double scale_hint = 1.0;   // typical magnitude near the contour
  double eval_noise = 0.0;   // relative noise of eval (nested quadrature etc.)

  Complex operator()(Complex z) const { return eval(z); }
};

// Bound on |int_T^inf prefactor*exp(-rate*t) dt|.
inline double tail_bound(double decay_rate, double prefactor, double T) {
  if (!(decay_rate > 0.0)) return std::numeric_limits<double>::infinity();
  return prefactor * std::exp(-decay_rate * T) / decay_rate;
}

// Truncation giving a tail below abs_tol/10, but never shorter than the
// 80/rate default (for the standard pairing decay 2*alpha*w this reproduces
// the 40/(alpha*w) baseline).
inline double default_truncation(double decay_rate, double prefactor, double abs_tol) {
  if (!(decay_rate > 0.0))
    throw DomainError("cannot choose a truncation without a positive decay rate");
  const double pref = std::max(prefactor, 1.0);
  const double from_tol = std::log(std::max(10.0 * pref / (decay_rate * abs_tol), 10.0)) / decay_rate;
  return std::max(from_tol, 80.0 / decay_rate);
}

namespace detail {

inline double dist_point_segment(Complex p, Complex a, Complex b) {
  const Complex ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  double t = ((p.real() - a.real()) * ab.real() + (p.imag() - a.imag()) * ab.imag()) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

template <class F>
Complex gl_apply(const F& f, Complex a, Complex b, const GLRule& rule) {
  const Complex mid = 0.5 * (a + b), half = 0.5 * (b - a);
  Complex acc{0.0, 0.0};
  for (size_t i = 0; i < rule.x.size(); ++i)
    acc += rule.w[i] * f(mid + rule.x[i] * half);
  return acc * half;
}

struct PanelOutcome {
  Complex value{0.0, 0.0};
  double err = 0.0;
  int panels = 0;
  bool exhausted = false;
};

// Quadrature sum together with sum |w_i f_i| |dz|, the scale that sets the
// roundoff floor of the panel.
template <class F>
Complex gl_apply2(const F& f, Complex a, Complex b, const GLRule& rule, double& mag) {
  const Complex mid = 0.5 * (a + b), half = 0.5 * (b - a);
  Complex acc{0.0, 0.0};
  double m = 0.0;
  for (size_t i = 0; i < rule.x.size(); ++i) {
    const Complex v = f(mid + rule.x[i] * half);
    acc += rule.w[i] * v;
    m += rule.w[i] * std::abs(v);
  }
  mag += m * std::abs(half);
  return acc * half;
}

// Depth-first bisection with a two-level (coarse vs. refined) error estimate.
// Deterministic: left child first, contributions accumulated in tree order.
// Panels whose discrepancy sits at the noise scale of their own function
// values are accepted regardless of the requested tolerance; no amount of
// bisection improves them.  The noise scale is machine epsilon for integrands
// built from elementary functions, but integrands whose values come out of
// nested quadrature carry that quadrature's tolerance instead, and splitting
// a panel of such an integrand only resamples the noise.
template <class F>
void refine_panel(const F& f, Complex a, Complex b, Complex coarse, double tol,
                  int depth, int max_depth, const GLRule& rule, PanelOutcome& out,
                  double noise = 0.0) {
  const Complex mid = 0.5 * (a + b);
  double mag = 0.0;
  const Complex left = gl_apply2(f, a, mid, rule, mag);
  const Complex right = gl_apply2(f, mid, b, rule, mag);
  const double err = std::abs(left + right - coarse);
  const double floor = std::max(16.0 * std::numeric_limits<double>::epsilon(), noise) * mag;
  if (err <= tol || err <= floor || depth >= max_depth) {
    out.value += left + right;
    out.err += err;
    out.panels += 2;
    if (err > std::max(tol, floor)) out.exhausted = true;
    return;
  }
  refine_panel(f, a, mid, left, 0.5 * tol, depth + 1, max_depth, rule, out, noise);
  refine_panel(f, mid, b, right, 0.5 * tol, depth + 1, max_depth, rule, out, noise);
}

// Core path integrator over a polyline; pole checks and tails are the
// caller's responsibility.
template <class F>
IntegralResult integrate_vertices(const F& f, const std::vector<Complex>& vertices,
                                  const QuadratureSpec& spec) {
  if (vertices.size() < 2) throw DomainError("path needs at least two vertices");
  const GLRule& rule = gl_rule(std::max(4, spec.nodes_per_panel));

  struct Panel {
    Complex a, b, coarse;
  };
  double total_len = 0.0;
  for (size_t i = 1; i < vertices.size(); ++i) total_len += std::abs(vertices[i] - vertices[i - 1]);

  auto initial_panels = [&](std::vector<Panel>& panels) {
    Complex coarse_total{0.0, 0.0};
    for (size_t i = 1; i < vertices.size(); ++i) {
      const Complex a = vertices[i - 1], b = vertices[i];
      const double len = std::abs(b - a);
      const int k = std::clamp((int)std::ceil(len / 2.0), 1, 256);
      for (int j = 0; j < k; ++j) {
        const Complex pa = a + (b - a) * (double(j) / k);
        const Complex pb = a + (b - a) * (double(j + 1) / k);
        Panel p{pa, pb, gl_apply(f, pa, pb, rule)};
        coarse_total += p.coarse;
        panels.push_back(p);
      }
    }
    return coarse_total;
  };

  std::vector<Panel> panels;
  const Complex coarse_total = initial_panels(panels);

  double tol_req = std::max(spec.abs_tol, spec.rel_tol * std::abs(coarse_total));
  IntegralResult res;
  for (int pass = 0; pass < 2; ++pass) {
    PanelOutcome out;
    for (const Panel& p : panels) {
      const double share = std::abs(p.b - p.a) / total_len;
      refine_panel(f, p.a, p.b, p.coarse, tol_req * share, 0, spec.max_depth, rule, out,
                   spec.noise);
    }
    res.value = out.value;
    res.error_estimate = out.err;
    res.panels_used = out.panels;
    const double tol_final = std::max(spec.abs_tol, spec.rel_tol * std::abs(out.value));
    if (out.err <= tol_final || tol_final >= tol_req) {
      if (out.exhausted && out.err > tol_final)
        throw AccuracyError("max refinement depth reached before tolerance", res);
      return res;
    }
    // The coarse magnitude overestimated |value|; rerun with the honest target.
    tol_req = tol_final;
  }
  if (res.error_estimate > std::max(spec.abs_tol, spec.rel_tol * std::abs(res.value)))
    throw AccuracyError("tolerance not reached", res);
  return res;
}

}  // namespace detail

// Path integral along explicit vertices.  No pole checks, no tails; this is
// the building block for residue probes and closed circuits assembled from
// two opposite passes.
inline IntegralResult integrate_path(const std::function<Complex(Complex)>& f,
                                     const std::vector<Complex>& vertices,
                                     const QuadratureSpec& spec) {
  return detail::integrate_vertices(f, vertices, spec);
}

namespace detail {

inline void check_poles_against_path(const FunctionHandle& f,
                                     const std::vector<Complex>& vertices) {
  if (f.poles.empty()) return;
  double im_lo = 0.0, im_hi = 0.0, re_lo = vertices.front().real(), re_hi = vertices.back().real();
  for (const Complex& v : vertices) {
    im_lo = std::min(im_lo, v.imag());
    im_hi = std::max(im_hi, v.imag());
  }
  for (const PoleSequence& seq : f.poles) {
    const double delta_min = 1e-8 * 0.5 * (seq.w1 + seq.w2);
    if (seq.anchor.real() < re_lo - 1.0 || seq.anchor.real() > re_hi + 1.0) continue;
    const double reach = std::abs(im_lo) + std::abs(im_hi) + seq.w1 + seq.w2 + std::abs(seq.anchor.imag());
    for (const Complex& p : seq.leading_points(256, reach)) {
      if (p.imag() < im_lo - seq.w1 - seq.w2 || p.imag() > im_hi + seq.w1 + seq.w2) continue;
      for (size_t i = 1; i < vertices.size(); ++i) {
        if (dist_point_segment(p, vertices[i - 1], vertices[i]) < delta_min)
          throw ContourError("pole too close to the integration path", p);
      }
    }
  }
}

}  // namespace detail

// Integral along a separating contour plus real-axis tails beyond +-T.  The
// tails are controlled by the declared decay rate and folded into the error
// estimate (with the default truncation they are far below tolerance).
inline IntegralResult integrate_contour(const FunctionHandle& f, const Contour& contour,
                                        const QuadratureSpec& spec) {
  if (!contour.valid()) throw DomainError("contour polyline is not left-to-right");
  detail::check_poles_against_path(f, contour.vertices);
  QuadratureSpec eff = spec;
  eff.noise = std::max(eff.noise, f.eval_noise);
  IntegralResult res = detail::integrate_vertices(f.eval, contour.vertices, eff);
  const double decay = -f.growth_rate;
  if (decay > 0.0) {
    res.tail_bound = 2.0 * tail_bound(decay, f.scale_hint, contour.truncation);
    res.error_estimate += res.tail_bound;
  }
  return res;
}

// Integral over the real line truncated at +-T, with T taken from the spec
// or derived from the declared decay.
inline IntegralResult integrate_line(const FunctionHandle& f, const QuadratureSpec& spec) {
  const double T = spec.truncation > 0.0
                       ? spec.truncation
                       : default_truncation(-f.growth_rate, f.scale_hint, spec.abs_tol);
  return integrate_contour(f, straight_contour(T), spec);
}

// ---------------------------------------------------------------------------
// Separating contour construction
//
// Every sequence is a vertical ray, so separation is a per-abscissa interval
// problem: at the real part of each ascending anchor the path must stay below
// the anchor, at each descending anchor above it.  The clearance at an anchor
// is half its distance to the nearest other pole, capped at min(w1,w2)/4.

inline Contour build_indented_contour(const std::vector<PoleSequence>& descending,
                                      const std::vector<PoleSequence>& ascending,
                                      double T) {
  if (descending.empty() && ascending.empty()) return straight_contour(T);

  double w1 = 0.0, w2 = 0.0;
  std::vector<std::pair<PoleSequence, int>> seqs;  // +1 ascending, -1 descending
  for (const auto& s : ascending) seqs.push_back({s, +1});
  for (const auto& s : descending) seqs.push_back({s, -1});
  for (auto& [s, kind] : seqs) {
    s.direction = kind;
    w1 = s.w1;
    w2 = s.w2;
  }
  const double wbar = 0.5 * (w1 + w2);
  const double cap = std::min(w1, w2) / 4.0;
  const double delta_min = 1e-8 * wbar;

  std::vector<std::vector<Complex>> pts(seqs.size());
  for (size_t i = 0; i < seqs.size(); ++i) pts[i] = seqs[i].first.leading_points(20);

  auto clearance = [&](size_t self) {
    double d = std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < seqs.size(); ++j) {
      if (j == self) continue;
      for (const Complex& p : pts[j])
        d = std::min(d, std::abs(p - seqs[self].first.anchor));
    }
    if (d < 2.0 * delta_min) {
      // Opposite-kind coincidence means the lattices interlock; same-kind
      // coincidence still leaves no room for the stated clearance rule.
      throw ContourError("pole sequences collide; no separating contour",
                         seqs[self].first.anchor);
    }
    return std::min(cap, 0.5 * d);
  };

  // Group constraints by abscissa.
  struct Band {
    double x;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
  };
  std::vector<Band> bands;
  const double same_x = 1e-9 * std::max(1.0, wbar);
  for (size_t i = 0; i < seqs.size(); ++i) {
    const Complex a = seqs[i].first.anchor;
    if (std::abs(a.real()) >= T) continue;
    const double gap = clearance(i);
    Band* b = nullptr;
    for (auto& bb : bands)
      if (std::abs(bb.x - a.real()) < same_x) b = &bb;
    if (!b) {
      bands.push_back(Band{a.real()});
      b = &bands.back();
    }
    if (seqs[i].second > 0)
      b->hi = std::min(b->hi, a.imag() - gap);
    else
      b->lo = std::max(b->lo, a.imag() + gap);
  }
  std::sort(bands.begin(), bands.end(), [](const Band& a, const Band& b) { return a.x < b.x; });

  std::vector<Complex> verts;
  verts.push_back(Complex(-T, 0.0));
  double prev_x = -T;
  std::vector<double> targets(bands.size());
  for (size_t k = 0; k < bands.size(); ++k) {
    const Band& b = bands[k];
    if (b.lo > b.hi)
      throw ContourError("ascending and descending sequences interlock at one abscissa",
                         Complex(b.x, b.lo));
    if (b.hi < -wbar || b.lo > wbar)
      throw ContourError("separating path would leave |Im z| <= w1 + w2 band",
                         Complex(b.x, b.lo > wbar ? b.lo : b.hi));
    targets[k] = std::clamp(0.0, b.lo, b.hi);
  }
  for (size_t k = 0; k < bands.size(); ++k) {
    const double x = bands[k].x, t = targets[k];
    const double left_room = 0.5 * (x - prev_x);
    const double hw_l = std::min(cap, left_room);
    if (t != 0.0 && (k == 0 || targets[k - 1] == 0.0) && x - hw_l > prev_x + same_x)
      verts.push_back(Complex(x - hw_l, 0.0));
    if (t != 0.0 || (k + 1 < bands.size() && targets[k + 1] != 0.0) ||
        (k > 0 && targets[k - 1] != 0.0))
      verts.push_back(Complex(x, t));
    if (t != 0.0 && (k + 1 == bands.size() || targets[k + 1] == 0.0)) {
      const double right_edge = (k + 1 < bands.size()) ? bands[k + 1].x : T;
      const double hw_r = std::min(cap, 0.5 * (right_edge - x));
      if (x + hw_r < right_edge - same_x && x + hw_r < T)
        verts.push_back(Complex(x + hw_r, 0.0));
    }
    prev_x = x;
  }
  verts.push_back(Complex(T, 0.0));

  Contour c{std::move(verts), T};
  if (!c.valid()) throw ContourError("contour construction failed", Complex(0.0, 0.0));

  // Verify the enumerated points end up on the right side of the polyline.
  for (size_t i = 0; i < seqs.size(); ++i) {
    for (const Complex& p : pts[i]) {
      if (std::abs(p.real()) >= T || std::abs(p.imag()) > w1 + w2) continue;
      const double h = c.height_at(p.real());
      if (seqs[i].second > 0 ? (p.imag() <= h + delta_min) : (p.imag() >= h - delta_min))
        throw ContourError("pole ended up on the wrong side of the contour", p);
    }
  }
  return c;
}

}  // namespace hypeval
