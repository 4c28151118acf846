#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "enclosure/core.hpp"
#include "enclosure/errors.hpp"

namespace enclosure {

// One-dimensional Gauss-Legendre rule on [-1, 1]. Nodes are roots of P_n,
// found by Newton iteration on the three-term recurrence from Chebyshev
// initial guesses; converges in a handful of steps for all n used here.
struct PanelRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline PanelRule gauss_legendre(int n) {
  if (n < 1 || n > 64) throw UnsupportedOrder("gauss_legendre: n out of range [1, 64]");
  PanelRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n / 2 + n % 2; ++i) {
    double x = -std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 60; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = x;
    rule.weights[i] = w;
    rule.nodes[n - 1 - i] = -x;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

// Same rule shifted to [0, 1].
inline PanelRule gauss_legendre_01(int n) {
  PanelRule rule = gauss_legendre(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = 0.5 * (rule.nodes[i] + 1.0);
    rule.weights[i] *= 0.5;
  }
  return rule;
}

struct Triangle {
  Vec2 a, b, c;
};

inline double triangle_area(const Triangle& t) {
  return 0.5 * std::abs(cross(t.b - t.a, t.c - t.a));
}

// Quadrature on the reference triangle {(x, y) : x, y >= 0, x + y <= 1}.
// Weights sum to 1/2, the reference area.
struct TriangleRule {
  std::vector<Vec2> points;
  std::vector<double> weights;
};

// Conical product rule: the square [0,1]^2 maps onto the triangle via
// (xi, eta) -> (xi (1 - eta), eta) with Jacobian (1 - eta). With m-point
// Gauss-Legendre in each direction the rule integrates total degree
// <= 2m - 2 exactly (the eta direction carries the extra Jacobian degree),
// so m = ceil((order + 2) / 2) guarantees exactness at the given order.
inline TriangleRule triangle_rule(int order) {
  if (order < 1 || order > 20)
    throw UnsupportedOrder("triangle_rule: order out of range [1, 20]");
  const int m = (order + 3) / 2;
  const PanelRule g = gauss_legendre_01(m);
  TriangleRule rule;
  rule.points.reserve(m * m);
  rule.weights.reserve(m * m);
  for (int j = 0; j < m; ++j) {
    const double eta = g.nodes[j];
    for (int i = 0; i < m; ++i) {
      rule.points.push_back({g.nodes[i] * (1.0 - eta), eta});
      rule.weights.push_back(g.weights[i] * g.weights[j] * (1.0 - eta));
    }
  }
  return rule;
}

// Physical nodes and weights for one triangle; weights sum to its area.
struct CellRule {
  std::vector<Vec2> points;
  std::vector<double> weights;
};

inline CellRule map_rule_to_triangle(const TriangleRule& ref, const Triangle& t) {
  const double jac = 2.0 * triangle_area(t);
  CellRule out;
  out.points.reserve(ref.points.size());
  out.weights.reserve(ref.points.size());
  for (std::size_t i = 0; i < ref.points.size(); ++i) {
    const Vec2 p = ref.points[i];
    out.points.push_back(t.a + (t.b - t.a) * p.x1 + (t.c - t.a) * p.x2);
    out.weights.push_back(ref.weights[i] * jac);
  }
  return out;
}

namespace detail {

inline double polygon_signed_area(const std::vector<Vec2>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2& p = v[i];
    const Vec2& q = v[(i + 1) % v.size()];
    s += cross(p, q);
  }
  return 0.5 * s;
}

inline bool point_in_triangle_strict(Vec2 p, Vec2 a, Vec2 b, Vec2 c, double tol) {
  const double d1 = cross(b - a, p - a);
  const double d2 = cross(c - b, p - b);
  const double d3 = cross(a - c, p - c);
  return d1 > tol && d2 > tol && d3 > tol;
}

}  // namespace detail

// Ear clipping for a simple polygon given as a vertex loop (either
// orientation; reversed internally to counterclockwise). Emits positively
// oriented triangles covering the polygon.
inline std::vector<Triangle> triangulate(std::vector<Vec2> poly) {
  if (poly.size() < 3) throw DegeneratePolygon("triangulate: fewer than 3 vertices");
  const double area = detail::polygon_signed_area(poly);
  double scale = 0.0;
  for (const Vec2& v : poly) scale = std::max({scale, std::abs(v.x1), std::abs(v.x2)});
  if (std::abs(area) < 1e-14 * scale * scale + 1e-300)
    throw DegeneratePolygon("triangulate: polygon has vanishing area");
  if (area < 0.0) std::reverse(poly.begin(), poly.end());

  std::vector<Triangle> tris;
  tris.reserve(poly.size() - 2);
  const double tol = -1e-12 * scale * scale;
  while (poly.size() > 3) {
    bool clipped = false;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const std::size_t n = poly.size();
      const Vec2 prev = poly[(i + n - 1) % n];
      const Vec2 curr = poly[i];
      const Vec2 next = poly[(i + 1) % n];
      if (cross(curr - prev, next - curr) <= 1e-14 * scale * scale) continue;
      bool blocked = false;
      for (std::size_t j = 0; j < n && !blocked; ++j) {
        if (j == i || j == (i + n - 1) % n || j == (i + 1) % n) continue;
        blocked = detail::point_in_triangle_strict(poly[j], prev, curr, next, tol);
      }
      if (blocked) continue;
      tris.push_back({prev, curr, next});
      poly.erase(poly.begin() + (long)i);
      clipped = true;
      break;
    }
    if (!clipped) throw DegeneratePolygon("triangulate: no ear found (self-intersecting or degenerate input)");
  }
  tris.push_back({poly[0], poly[1], poly[2]});
  return tris;
}

// Each level splits every triangle into four congruent children through the
// edge midpoints, so cell diameter halves per level.
inline std::vector<Triangle> refine_uniform(const std::vector<Triangle>& tris, int levels) {
  if (levels < 0) throw DomainError("refine_uniform: negative level count");
  std::vector<Triangle> cur = tris;
  for (int l = 0; l < levels; ++l) {
    std::vector<Triangle> next;
    next.reserve(cur.size() * 4);
    for (const Triangle& t : cur) {
      const Vec2 ab = (t.a + t.b) * 0.5;
      const Vec2 bc = (t.b + t.c) * 0.5;
      const Vec2 ca = (t.c + t.a) * 0.5;
      next.push_back({t.a, ab, ca});
      next.push_back({ab, t.b, bc});
      next.push_back({ca, bc, t.c});
      next.push_back({ab, bc, ca});
    }
    cur = std::move(next);
  }
  return cur;
}

// ---------------------------------------------------------------------------
// Divided differences of exp and exact exponential integrals over triangles.
//
// The n-th divided difference exp[w_0, ..., w_n] equals the integral of
// exp(sum s_j w_j) over the standard simplex (Hermite-Genocchi), which is
// exactly the object appearing when exp(z . x) is integrated over a triangle
// in barycentric form. Two evaluation branches keep full relative accuracy:
//   - nodes clustered after centering at their mean: the complete homogeneous
//     symmetric series exp[c_1..c_n] = e^mu sum_k h_k(c) / (n - 1 + k)!,
//   - nodes spread out: recursive reduction on the farthest pair, whose
//     separation >= the cluster radius, so the division never amplifies.
// The two-node base case is exp[p, q] = e^{(p+q)/2} sinhc((q - p)/2).
// ---------------------------------------------------------------------------

namespace detail {

using ComplexL = std::complex<long double>;

inline ComplexL sinhc(ComplexL u) {
  if (std::abs(u) < 0.5L) {
    const ComplexL u2 = u * u;
    ComplexL term{1.0L, 0.0L}, sum{1.0L, 0.0L};
    for (int m = 1; m <= 10; ++m) {
      term *= u2 / (long double)((2 * m) * (2 * m + 1));
      sum += term;
    }
    return sum;
  }
  return std::sinh(u) / u;
}

// Divided difference of exp over already-centered nodes (mean ~ 0); the
// caller applies the e^mu shift. Series branch.
inline ComplexL exp_dd_series(const std::vector<ComplexL>& c) {
  const int n = (int)c.size();
  const int kmax = 64;
  std::vector<ComplexL> h(kmax + 1, ComplexL{0.0L, 0.0L});
  h[0] = ComplexL{1.0L, 0.0L};
  for (int j = 0; j < n; ++j)
    for (int k = 1; k <= kmax; ++k) h[k] += c[(std::size_t)j] * h[k - 1];
  long double rk = 1.0L;  // 1 / (n - 1 + k)! built incrementally
  for (int j = 2; j <= n - 1; ++j) rk /= j;
  ComplexL sum{0.0L, 0.0L};
  int tiny = 0;
  for (int k = 0; k <= kmax; ++k) {
    if (k > 0) rk /= (long double)(n - 1 + k);
    sum += h[(std::size_t)k] * rk;
    if (std::abs(h[(std::size_t)k]) * rk < 1e-22L * (1.0L + std::abs(sum))) {
      if (++tiny >= 2) break;
    } else {
      tiny = 0;
    }
  }
  return sum;
}

inline ComplexL exp_dd_centered(std::vector<ComplexL> c);

inline ComplexL exp_dd_recurse(const std::vector<ComplexL>& c) {
  std::size_t bi = 0, bj = 1;
  long double best = -1.0L;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = i + 1; j < c.size(); ++j) {
      const long double d = std::abs(c[i] - c[j]);
      if (d > best) {
        best = d;
        bi = i;
        bj = j;
      }
    }
  std::vector<ComplexL> without_i, without_j;
  for (std::size_t m = 0; m < c.size(); ++m) {
    if (m != bi) without_i.push_back(c[m]);
    if (m != bj) without_j.push_back(c[m]);
  }
  // exp[L] = (exp[L \ {c_bi}] - exp[L \ {c_bj}]) / (c_bj - c_bi)
  return (exp_dd_centered(std::move(without_i)) - exp_dd_centered(std::move(without_j))) /
         (c[bj] - c[bi]);
}

inline ComplexL exp_dd_centered(std::vector<ComplexL> c) {
  ComplexL mu{0.0L, 0.0L};
  for (const ComplexL& v : c) mu += v;
  mu /= (long double)c.size();
  for (ComplexL& v : c) v -= mu;
  if (c.size() == 1) return std::exp(mu);
  if (c.size() == 2) return std::exp(mu) * sinhc((c[1] - c[0]) / 2.0L);
  long double spread = 0.0L;
  for (const ComplexL& v : c) spread = std::max(spread, std::abs(v));
  if (spread < 1.0L) return std::exp(mu) * exp_dd_series(c);
  return std::exp(mu) * exp_dd_recurse(c);
}

}  // namespace detail

// exp[w_0, ..., w_{n-1}], symmetric in its arguments, repeated nodes allowed
// (confluent case = derivative values). Accurate to ~1e-14 relative across
// clustered and spread node sets.
inline Complex exp_divided_difference(const std::vector<Complex>& nodes) {
  if (nodes.empty()) throw DomainError("exp_divided_difference: no nodes");
  if (nodes.size() > 8) throw DomainError("exp_divided_difference: more than 8 nodes");
  std::vector<detail::ComplexL> c(nodes.begin(), nodes.end());
  const detail::ComplexL r = detail::exp_dd_centered(std::move(c));
  return {(double)r.real(), (double)r.imag()};
}

// Exact integral of exp(z . x) over a triangle: with w_j = z . v_j at the
// three vertices, the value is 2 Area exp[w_0, w_1, w_2].
inline Complex integrate_exp_triangle(CVec2 z, const Triangle& t) {
  const std::vector<Complex> w{dot(z, t.a), dot(z, t.b), dot(z, t.c)};
  return 2.0 * triangle_area(t) * exp_divided_difference(w);
}

// Exact integrals of exp(z . x) and of x_m exp(z . x) over a triangle. The
// first moments follow from differentiating the vertex representation:
// int x_m e^{z.x} = 2 Area sum_j v_{j,m} exp[w_0, w_1, w_2, w_j], the
// four-node divided differences with one vertex value repeated.
struct TriangleExpIntegrals {
  Complex mass;
  CVec2 moment;
};

inline TriangleExpIntegrals integrate_exp_triangle_with_moments(CVec2 z, const Triangle& t) {
  const Vec2 v[3] = {t.a, t.b, t.c};
  const Complex w[3] = {dot(z, t.a), dot(z, t.b), dot(z, t.c)};
  const double jac = 2.0 * triangle_area(t);
  TriangleExpIntegrals out;
  out.mass = jac * exp_divided_difference({w[0], w[1], w[2]});
  out.moment = {Complex{0.0, 0.0}, Complex{0.0, 0.0}};
  for (int j = 0; j < 3; ++j) {
    const Complex dd = exp_divided_difference({w[0], w[1], w[2], w[j]});
    out.moment.x1 += jac * v[j].x1 * dd;
    out.moment.x2 += jac * v[j].x2 * dd;
  }
  return out;
}

// Polar product rule on a disk: trapezoid in angle (periodic, so spectrally
// accurate) times Gauss-Legendre in radius with the r Jacobian folded in.
// Weights sum to the disk area.
inline CellRule disk_rule(Vec2 center, double radius, int n_r, int n_theta) {
  if (radius <= 0.0) throw DomainError("disk_rule: radius must be positive");
  if (n_r < 1 || n_theta < 4) throw UnsupportedOrder("disk_rule: need n_r >= 1, n_theta >= 4");
  const PanelRule g = gauss_legendre_01(n_r);
  CellRule out;
  out.points.reserve((std::size_t)n_r * n_theta);
  out.weights.reserve((std::size_t)n_r * n_theta);
  const double dtheta = 2.0 * kPi / n_theta;
  for (int j = 0; j < n_theta; ++j) {
    const double th = dtheta * j;
    const Vec2 e{std::cos(th), std::sin(th)};
    for (int i = 0; i < n_r; ++i) {
      const double r = radius * g.nodes[i];
      out.points.push_back(center + e * r);
      out.weights.push_back(radius * g.weights[i] * r * dtheta);
    }
  }
  return out;
}

// Minimum boundary node count resolving the probe oscillation exp(i s x . w),
// s = sqrt(tau^2 + k^2): ten nodes per wavelength along the curve, floored.
inline int min_boundary_nodes(double tau, double k, double perimeter, double oversample) {
  const double s = std::sqrt(tau * tau + k * k);
  const double wanted = oversample * 10.0 * s * perimeter / (2.0 * kPi);
  return std::max(64, (int)std::ceil(wanted));
}

}  // namespace enclosure
