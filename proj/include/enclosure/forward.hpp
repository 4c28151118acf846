#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "enclosure/core.hpp"
#include "enclosure/errors.hpp"
#include "enclosure/geometry.hpp"
#include "enclosure/quadrature.hpp"
#include "enclosure/special_functions.hpp"

namespace enclosure {

// Source term rho * chi_D (monopole) or its directional derivative
// a . grad(rho * chi_D) (dipole), with D a simple polygon or a disk and rho
// affine over D.
enum class SourceKind { Monopole, Dipole };

struct SourceSpec {
  SourceKind kind = SourceKind::Monopole;
  bool disk = false;
  std::vector<Vec2> polygon;             // used when !disk
  Vec2 center{0.0, 0.0};                 // used when disk
  double radius = 0.0;
  double rho0 = 1.0, rho1 = 0.0, rho2 = 0.0;  // rho(y) = rho0 + rho1 y1 + rho2 y2
  Vec2 axis{1.0, 0.0};                   // dipole direction a
};

inline double density(const SourceSpec& s, Vec2 y) {
  return s.rho0 + s.rho1 * y.x1 + s.rho2 * y.x2;
}

inline double source_support(const SourceSpec& s, Vec2 omega) {
  if (s.disk) return dot(s.center, omega) + s.radius;
  return support_function(s.polygon, omega);
}

inline void validate_source(const SourceSpec& s) {
  if (s.disk) {
    if (!(s.radius > 0.0)) throw ConfigInvalid("source: disk radius must be positive");
  } else {
    if (s.polygon.size() < 3) throw DegeneratePolygon("source: polygon needs >= 3 vertices");
    const double scale = std::max(polygon_scale(s.polygon), 1e-30);
    if (std::abs(polygon_area(s.polygon)) < 1e-14 * scale * scale)
      throw DegeneratePolygon("source: polygon has vanishing area");
  }
  if (s.kind == SourceKind::Dipole && norm(s.axis) == 0.0)
    throw ConfigInvalid("source: dipole axis must be nonzero");
}

// Measurement curve: a circle or a convex polygon traversed counterclockwise.
struct OmegaShape {
  bool circle = true;
  Vec2 center{0.0, 0.0};
  double radius = 1.0;
  std::vector<Vec2> vertices;  // used when !circle

  double perimeter() const {
    if (circle) return 2.0 * kPi * radius;
    return polygon_perimeter(vertices);
  }
};

struct BoundaryNode {
  Vec2 pos;
  Vec2 normal;    // unit outward
  double weight;  // arclength weight; weights sum to the perimeter
  Complex u{0.0, 0.0};
  Complex dnu{0.0, 0.0};
};

struct NoiseInfo {
  double level = 0.0;
  std::uint64_t seed = 0;
  bool applied = false;
};

struct CauchyMeta {
  std::string kind = "monopole";  // "monopole" | "dipole" | "ibvp"
  std::string scenario;
  double oversample = 1.5;
  NoiseInfo noise;
};

struct CauchyData {
  double k = 0.0;
  std::vector<BoundaryNode> nodes;
  CauchyMeta meta;
};

// Quadrature nodes along the measurement curve. Circles get the periodic
// trapezoid rule (spectrally accurate for the analytic integrands here);
// polygon edges get composite 10-point Gauss panels, at least n_min nodes in
// total, distributed by edge length.
inline std::vector<BoundaryNode> boundary_nodes(const OmegaShape& shape, int n_min) {
  if (n_min < 4) throw ConfigInvalid("boundary_nodes: need at least 4 nodes");
  std::vector<BoundaryNode> out;
  if (shape.circle) {
    if (!(shape.radius > 0.0)) throw ConfigInvalid("boundary_nodes: circle radius must be positive");
    const int n = n_min;
    out.reserve((std::size_t)n);
    const double w = 2.0 * kPi * shape.radius / n;
    for (int i = 0; i < n; ++i) {
      const double th = 2.0 * kPi * i / n;
      const Vec2 e{std::cos(th), std::sin(th)};
      out.push_back({shape.center + e * shape.radius, e, w, {0, 0}, {0, 0}});
    }
    return out;
  }
  const auto& v = shape.vertices;
  if (v.size() < 3) throw ConfigInvalid("boundary_nodes: polygon needs >= 3 vertices");
  if (polygon_area(v) <= 0.0)
    throw ConfigInvalid("boundary_nodes: polygon must be counterclockwise");
  const double per = polygon_perimeter(v);
  const PanelRule g = gauss_legendre_01(10);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2 a = v[i], b = v[(i + 1) % v.size()];
    const double len = norm(b - a);
    const int panels = std::max(1, (int)std::ceil((double)n_min * len / per / 10.0));
    const Vec2 t = (b - a) / len;
    const Vec2 nrm{t.x2, -t.x1};  // outward for a counterclockwise loop
    for (int p = 0; p < panels; ++p) {
      for (int q = 0; q < 10; ++q) {
        const double s = (p + g.nodes[q]) / panels;
        out.push_back({a + (b - a) * s, nrm, len * g.weights[q] / panels, {0, 0}, {0, 0}});
      }
    }
  }
  return out;
}

// Interior quadrature resolution for the synthesis integrals.
struct InteriorRule {
  int order = 16;   // triangle rule exactness degree
  int refine = 3;   // uniform refinement levels of the coarse triangulation
  int disk_nr = 32;
  int disk_ntheta = 96;
};

// Discrete interior measure: nodes with weights w_i rho(y_i).
struct SourceMeasure {
  std::vector<Vec2> points;
  std::vector<double> rho_weights;
};

inline SourceMeasure build_source_measure(const SourceSpec& s, const InteriorRule& rule,
                                          const std::function<double(Vec2)>& rho = {}) {
  validate_source(s);
  const auto rho_at = [&](Vec2 y) { return rho ? rho(y) : density(s, y); };
  SourceMeasure m;
  if (s.disk) {
    const CellRule cr = disk_rule(s.center, s.radius, rule.disk_nr, rule.disk_ntheta);
    m.points = cr.points;
    m.rho_weights.resize(cr.points.size());
    for (std::size_t i = 0; i < cr.points.size(); ++i)
      m.rho_weights[i] = cr.weights[i] * rho_at(cr.points[i]);
    return m;
  }
  const std::vector<Triangle> tris = refine_uniform(triangulate(s.polygon), rule.refine);
  const TriangleRule ref = triangle_rule(rule.order);
  m.points.reserve(tris.size() * ref.points.size());
  m.rho_weights.reserve(tris.size() * ref.points.size());
  for (const Triangle& t : tris) {
    const CellRule cr = map_rule_to_triangle(ref, t);
    for (std::size_t i = 0; i < cr.points.size(); ++i) {
      m.points.push_back(cr.points[i]);
      m.rho_weights.push_back(cr.weights[i] * rho_at(cr.points[i]));
    }
  }
  return m;
}

namespace detail {

struct FieldPair {
  Complex u, dnu;
};

// Field and normal derivative at one exterior point from the discrete
// measure, with the convention u = -Phi * F, so (Laplacian + k^2) u = F:
//   monopole  u(x) = - int_D Phi(x - y) rho(y) dy
//   dipole    u(x) = - int_D (grad Phi)(x - y) . a rho(y) dy
// (the dipole form is the convolution of -Phi with a . grad(rho chi_D),
// integrated by parts). Long-double accumulation keeps the roundoff floor of
// the large cancelling sums near the rounding limit of the stored result.
inline FieldPair field_at(const SourceSpec& s, double k, Vec2 x, Vec2 nu,
                          const SourceMeasure& m) {
  std::complex<long double> au{0.0L, 0.0L}, ad{0.0L, 0.0L};
  const bool dipole = s.kind == SourceKind::Dipole;
  const Vec2 a = s.axis;
  for (std::size_t i = 0; i < m.points.size(); ++i) {
    const Vec2 r = x - m.points[i];
    const double w = m.rho_weights[i];
    if (!dipole) {
      const FundamentalSolution fs = fundamental_solution(k, r);
      au -= (std::complex<long double>)(w * fs.phi);
      ad -= (std::complex<long double>)(w * (fs.grad.x1 * nu.x1 + fs.grad.x2 * nu.x2));
    } else {
      const FundamentalSolution fs = fundamental_solution(k, r);
      const FundamentalHessian hs = fundamental_solution_hessian(k, r);
      au -= (std::complex<long double>)(w * (fs.grad.x1 * a.x1 + fs.grad.x2 * a.x2));
      const Complex hn1 = hs.h11 * nu.x1 + hs.h12 * nu.x2;
      const Complex hn2 = hs.h12 * nu.x1 + hs.h22 * nu.x2;
      ad -= (std::complex<long double>)(w * (a.x1 * hn1 + a.x2 * hn2));
    }
  }
  return {Complex{(double)au.real(), (double)au.imag()},
          Complex{(double)ad.real(), (double)ad.imag()}};
}

inline void run_chunked(std::size_t n, int threads, const std::function<void(std::size_t, std::size_t)>& body) {
  if (threads <= 1 || n < 64) {
    body(0, n);
    return;
  }
  const int t = std::min<int>(threads, (int)n);
  std::vector<std::thread> pool;
  pool.reserve((std::size_t)t);
  for (int i = 0; i < t; ++i) {
    const std::size_t lo = n * (std::size_t)i / (std::size_t)t;
    const std::size_t hi = n * (std::size_t)(i + 1) / (std::size_t)t;
    pool.emplace_back([&body, lo, hi] { body(lo, hi); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

// Radiated field at a single exterior point (tests and diagnostics).
inline Complex field_value(const SourceSpec& s, double k, Vec2 x, const InteriorRule& rule = {}) {
  const SourceMeasure m = build_source_measure(s, rule);
  return detail::field_at(s, k, x, Vec2{1.0, 0.0}, m).u;
}

// Cauchy pair (trace and normal derivative) of the radiated field on the
// measurement curve. Every node must keep a positive clearance from the
// source support; the kernel is singular there and the data model assumes a
// strictly exterior curve.
inline CauchyData synthesize_cauchy(const SourceSpec& s, const OmegaShape& shape, double k,
                                    int n_boundary, const InteriorRule& rule = {},
                                    double clearance = 1e-6, int threads = 1) {
  if (!(k >= 0.0)) throw ConfigInvalid("synthesize_cauchy: k must be >= 0");
  CauchyData data;
  data.k = k;
  data.nodes = boundary_nodes(shape, n_boundary);
  data.meta.kind = s.kind == SourceKind::Dipole ? "dipole" : "monopole";

  for (const BoundaryNode& bn : data.nodes) {
    double d;
    bool inside;
    if (s.disk) {
      d = norm(bn.pos - s.center) - s.radius;
      inside = d <= 0.0;
      d = std::abs(d);
    } else {
      inside = point_in_polygon(s.polygon, bn.pos);
      d = distance_to_polygon(s.polygon, bn.pos);
    }
    if (inside) throw EvaluationInsideSource("synthesize_cauchy: measurement node inside the source support");
    if (d < clearance) throw ClearanceViolation("synthesize_cauchy: measurement curve too close to the source support");
  }

  const SourceMeasure m = build_source_measure(s, rule);
  detail::run_chunked(data.nodes.size(), threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      BoundaryNode& bn = data.nodes[i];
      const detail::FieldPair fp = detail::field_at(s, k, bn.pos, bn.normal, m);
      bn.u = fp.u;
      bn.dnu = fp.dnu;
    }
  });
  return data;
}

// Additive complex Gaussian noise, scaled separately for the trace and its
// normal derivative by level * max |value|. The generator is fully spelled
// out (xorshift-free mt19937_64 bits + Box-Muller) so equal seeds give
// bit-identical data on any platform.
inline void add_noise(CauchyData& data, double level, std::uint64_t seed) {
  if (level < 0.0) throw ConfigInvalid("add_noise: level must be >= 0");
  data.meta.noise = {level, seed, true};
  if (level == 0.0 || data.nodes.empty()) return;
  double su = 0.0, sd = 0.0;
  for (const BoundaryNode& bn : data.nodes) {
    su = std::max(su, std::abs(bn.u));
    sd = std::max(sd, std::abs(bn.dnu));
  }
  std::mt19937_64 gen(seed);
  const auto uniform01 = [&gen]() {
    return ((double)(gen() >> 11) + 0.5) * 0x1.0p-53;  // strictly inside (0, 1)
  };
  const auto gaussian_pair = [&]() {
    const double r = std::sqrt(-2.0 * std::log(uniform01()));
    const double th = 2.0 * kPi * uniform01();
    return Complex{r * std::cos(th), r * std::sin(th)} / std::sqrt(2.0);
  };
  for (BoundaryNode& bn : data.nodes) {
    bn.u += level * su * gaussian_pair();
    bn.dnu += level * sd * gaussian_pair();
  }
}

}  // namespace enclosure
