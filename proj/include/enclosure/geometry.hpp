#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "enclosure/core.hpp"
#include "enclosure/errors.hpp"

namespace enclosure {

inline Vec2 unit_vector(double angle) { return {std::cos(angle), std::sin(angle)}; }

inline double polygon_area(const std::vector<Vec2>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += cross(v[i], v[(i + 1) % v.size()]);
  return 0.5 * s;
}

inline double polygon_perimeter(const std::vector<Vec2>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += norm(v[(i + 1) % v.size()] - v[i]);
  return s;
}

inline double polygon_scale(const std::vector<Vec2>& v) {
  double s = 0.0;
  for (const Vec2& p : v) s = std::max({s, std::abs(p.x1), std::abs(p.x2)});
  return s;
}

// Support function h(omega) = max over the vertex loop of v . omega. Equals
// the support function of the convex hull, so nonconvex loops are fine.
inline double support_function(const std::vector<Vec2>& poly, Vec2 omega) {
  if (poly.empty()) throw DegeneratePolygon("support_function: empty polygon");
  double h = -std::numeric_limits<double>::infinity();
  for (const Vec2& v : poly) h = std::max(h, dot(v, omega));
  return h;
}

// A direction is regular when exactly one vertex attains the support value,
// i.e. the supporting line touches at a corner rather than along an edge.
// The margin is an absolute gap between the two largest projections.
inline bool is_regular_direction(const std::vector<Vec2>& poly, Vec2 omega, double margin = 1e-9) {
  if (poly.size() < 3) throw DegeneratePolygon("is_regular_direction: need at least 3 vertices");
  double best = -std::numeric_limits<double>::infinity(), second = best;
  for (const Vec2& v : poly) {
    const double d = dot(v, omega);
    if (d > best) {
      second = best;
      best = d;
    } else if (d > second) {
      second = d;
    }
  }
  return best - second > margin;
}

// Corner data at the unique supporting vertex p for direction omega: in the
// frame (omega, omega_perp) the two incident edges leave p with lateral
// slopes f >= g measured per unit of depth (p - q) . omega > 0, and the
// corner opening enters leading-order constants through
//   amplitude = (f - g) / ((1 - i f)(1 - i g)).
// The slopes are not sign-constrained: both can be positive when the corner
// is tilted far from the supporting line's normal.
struct VertexData {
  Vec2 p;
  double f, g;
  Complex amplitude;
};

inline VertexData vertex_data(const std::vector<Vec2>& poly, Vec2 omega, double margin = 1e-9) {
  if (poly.size() < 3) throw DegeneratePolygon("vertex_data: need at least 3 vertices");
  if (!is_regular_direction(poly, omega, margin))
    throw NonRegularDirection("vertex_data: support attained by more than one vertex");
  std::size_t imax = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const double d = dot(poly[i], omega);
    if (d > best) {
      best = d;
      imax = i;
    }
  }
  const Vec2 p = poly[imax];
  const Vec2 wp = perp(omega);
  const Vec2 nbr[2] = {poly[(imax + poly.size() - 1) % poly.size()],
                       poly[(imax + 1) % poly.size()]};
  double slope[2];
  for (int s = 0; s < 2; ++s) {
    const Vec2 q = nbr[s];
    const double depth = dot(p - q, omega);
    if (depth <= 0.0)
      throw NonRegularDirection("vertex_data: incident edge parallel to the supporting line");
    slope[s] = (dot(q, wp) - dot(p, wp)) / depth;
  }
  VertexData out;
  out.p = p;
  out.f = std::max(slope[0], slope[1]);
  out.g = std::min(slope[0], slope[1]);
  if (out.f - out.g <= 1e-12)
    throw DegenerateCone("vertex_data: corner opening collapses");
  const Complex i{0.0, 1.0};
  out.amplitude = (out.f - out.g) / ((1.0 - i * out.f) * (1.0 - i * out.g));
  return out;
}

namespace detail {

// Rotate a CCW vertex loop so the lexicographically smallest vertex leads;
// canonical form keeps serialized output stable.
inline void canonicalize_loop(std::vector<Vec2>& v) {
  if (v.empty()) return;
  std::size_t lead = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i].x1 < v[lead].x1 || (v[i].x1 == v[lead].x1 && v[i].x2 < v[lead].x2)) lead = i;
  }
  std::rotate(v.begin(), v.begin() + (long)lead, v.end());
}

}  // namespace detail

// Andrew's monotone chain; returns the hull CCW with strict corners only
// (collinear interior points dropped), lexicographically smallest vertex
// first.
inline std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) {
    return a.x1 < b.x1 || (a.x1 == b.x1 && a.x2 < b.x2);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](Vec2 a, Vec2 b) { return a.x1 == b.x1 && a.x2 == b.x2; }),
            pts.end());
  if (pts.size() < 3) throw CollinearInput("convex_hull: fewer than 3 distinct points");
  const auto build = [&](bool lower) {
    std::vector<Vec2> chain;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const Vec2 p = lower ? pts[k] : pts[pts.size() - 1 - k];
      while (chain.size() >= 2 &&
             cross(chain.back() - chain[chain.size() - 2], p - chain.back()) <= 0.0)
        chain.pop_back();
      chain.push_back(p);
    }
    return chain;
  };
  std::vector<Vec2> lower = build(true), upper = build(false);
  lower.pop_back();
  upper.pop_back();
  lower.insert(lower.end(), upper.begin(), upper.end());
  if (lower.size() < 3) throw CollinearInput("convex_hull: all points collinear");
  detail::canonicalize_loop(lower);
  return lower;
}

// Half-plane {x : x . omega <= offset}.
struct HalfPlane {
  Vec2 omega;
  double offset;
};

// Intersection of half-planes with a bounding box, by successive clipping
// (Sutherland-Hodgman against each half-plane). The box must be large enough
// to contain the expected intersection; pass the working domain inflated.
inline std::vector<Vec2> halfplane_hull(const std::vector<HalfPlane>& planes, Vec2 box_lo,
                                        Vec2 box_hi) {
  if (planes.size() < 3)
    throw InsufficientDirections("halfplane_hull: need at least 3 half-planes");
  if (!(box_lo.x1 < box_hi.x1 && box_lo.x2 < box_hi.x2))
    throw DomainError("halfplane_hull: empty bounding box");
  std::vector<Vec2> poly{{box_lo.x1, box_lo.x2},
                         {box_hi.x1, box_lo.x2},
                         {box_hi.x1, box_hi.x2},
                         {box_lo.x1, box_hi.x2}};
  const double scale = std::max({std::abs(box_lo.x1), std::abs(box_lo.x2), std::abs(box_hi.x1),
                                 std::abs(box_hi.x2), 1.0});
  for (const HalfPlane& hp : planes) {
    std::vector<Vec2> next;
    next.reserve(poly.size() + 1);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Vec2 a = poly[i];
      const Vec2 b = poly[(i + 1) % poly.size()];
      const double da = dot(a, hp.omega) - hp.offset;
      const double db = dot(b, hp.omega) - hp.offset;
      if (da <= 0.0) next.push_back(a);
      if ((da < 0.0 && db > 0.0) || (da > 0.0 && db <= 0.0)) {
        const double t = da / (da - db);
        next.push_back(a + (b - a) * t);
      }
    }
    poly = std::move(next);
    if (poly.size() < 3) throw EmptyIntersection("halfplane_hull: intersection is empty");
  }
  // Merge near-duplicate vertices and collinear corners left by clipping.
  std::vector<Vec2> clean;
  for (const Vec2& v : poly) {
    if (clean.empty() || norm(v - clean.back()) > 1e-12 * scale) clean.push_back(v);
  }
  while (clean.size() >= 2 && norm(clean.front() - clean.back()) <= 1e-12 * scale)
    clean.pop_back();
  if (clean.size() < 3) throw EmptyIntersection("halfplane_hull: intersection is degenerate");
  std::vector<Vec2> out;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    const Vec2 prev = clean[(i + clean.size() - 1) % clean.size()];
    const Vec2 next = clean[(i + 1) % clean.size()];
    if (std::abs(cross(clean[i] - prev, next - clean[i])) > 1e-12 * scale * scale)
      out.push_back(clean[i]);
  }
  if (out.size() < 3 || polygon_area(out) <= 0.0)
    throw EmptyIntersection("halfplane_hull: intersection is degenerate");
  detail::canonicalize_loop(out);
  return out;
}

inline double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = norm_sq(ab);
  if (len2 == 0.0) return norm(p - a);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return norm(p - (a + ab * t));
}

// Distance from a point to the polygon boundary (vertex loop edges).
inline double distance_to_polygon(const std::vector<Vec2>& poly, Vec2 p) {
  if (poly.size() < 2) throw DegeneratePolygon("distance_to_polygon: need at least 2 vertices");
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i)
    d = std::min(d, point_segment_distance(p, poly[i], poly[(i + 1) % poly.size()]));
  return d;
}

// Crossing-number point-in-polygon test; points on the boundary count as
// inside within the caller's tolerance handling (exact hits are rare and the
// callers guard with distance_to_polygon anyway).
inline bool point_in_polygon(const std::vector<Vec2>& poly, Vec2 p) {
  if (poly.size() < 3) throw DegeneratePolygon("point_in_polygon: need at least 3 vertices");
  bool inside = false;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2 a = poly[i], b = poly[(i + 1) % poly.size()];
    if ((a.x2 > p.x2) != (b.x2 > p.x2)) {
      const double xcut = a.x1 + (p.x2 - a.x2) / (b.x2 - a.x2) * (b.x1 - a.x1);
      if (p.x1 < xcut) inside = !inside;
    }
  }
  return inside;
}

// Symmetric vertex-to-boundary Hausdorff residual: the larger of the two
// one-sided maxima of vertex distances to the other polygon's boundary. For
// nearby convex polygons this matches the set Hausdorff distance.
inline double hausdorff_distance(const std::vector<Vec2>& p, const std::vector<Vec2>& q) {
  if (p.size() < 3 || q.size() < 3)
    throw DegeneratePolygon("hausdorff_distance: need at least 3 vertices");
  double h = 0.0;
  for (const Vec2& v : p) h = std::max(h, distance_to_polygon(q, v));
  for (const Vec2& v : q) h = std::max(h, distance_to_polygon(p, v));
  return h;
}

}  // namespace enclosure
