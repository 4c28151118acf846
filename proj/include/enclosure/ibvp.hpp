#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "enclosure/core.hpp"
#include "enclosure/errors.hpp"
#include "enclosure/forward.hpp"
#include "enclosure/geometry.hpp"
#include "enclosure/probe.hpp"
#include "enclosure/quadrature.hpp"
#include "enclosure/special_functions.hpp"

namespace enclosure {

// Penetrable medium: total field u solves Laplacian u + k^2 (1 + rho) u = 0
// with u = exp(i k x . d) + scattered, rho an affine contrast supported on a
// polygon. Fixed point form: u = inc + k^2 int_D Phi(x - y) rho(y) u(y) dy.
// The effective volume source k^2 rho u is what the boundary data sees, so
// the support machinery applies with the monopole power law as long as u
// does not vanish at the supporting corners.

// Exact integral of Phi(|p - y|) over a triangle containing p: split into
// the three wedges p spans over the edges, integrate the radius exactly via
// the radial moment and the angle by Gauss quadrature (the integrand is
// smooth in the angle). This keeps the self-cell error at the density's
// local variation, o(cell area), where a naive rule is O(cell area).
inline Complex triangle_kernel_integral(double k, Vec2 p, const Triangle& t) {
  const Vec2 v[3] = {t.a, t.b, t.c};
  const PanelRule gauss = gauss_legendre_01(20);
  std::complex<long double> acc{0.0L, 0.0L};
  for (int e = 0; e < 3; ++e) {
    const Vec2 v1 = v[e], v2 = v[(e + 1) % 3];
    const double alpha = std::atan2(v1.x2 - p.x2, v1.x1 - p.x1);
    double beta = std::atan2(v2.x2 - p.x2, v2.x1 - p.x1);
    double sweep = beta - alpha;
    while (sweep <= -kPi) sweep += 2.0 * kPi;
    while (sweep > kPi) sweep -= 2.0 * kPi;
    if (sweep == 0.0) continue;
    // Unit normal of the edge line pointing away from p, distance d > 0.
    const Vec2 edge = v2 - v1;
    const double elen = norm(edge);
    if (elen == 0.0) continue;
    Vec2 n{edge.x2 / elen, -edge.x1 / elen};
    double d = dot(v1 - p, n);
    if (d < 0.0) {
      n = n * -1.0;
      d = -d;
    }
    if (d == 0.0) continue;  // p on the edge line: zero-measure wedge
    for (int q = 0; q < 20; ++q) {
      const double th = alpha + sweep * gauss.nodes[q];
      const Vec2 dir{std::cos(th), std::sin(th)};
      const double proj = dot(dir, n);
      if (proj <= 0.0) continue;  // past the edge line's horizon
      const double radius = d / proj;
      const Complex m = fundamental_solution_radial_moment(k, radius);
      acc += (std::complex<long double>)(sweep * gauss.weights[q] * m);
    }
  }
  return {(double)acc.real(), (double)acc.imag()};
}

struct IbvpOptions {
  int order = 6;       // interior triangle rule degree
  int refine = 3;      // uniform refinement levels
  double tol = 1e-10;  // sup-norm fixed point tolerance (incident has unit size)
  int max_iter = 50;
};

struct IbvpSolution {
  double k = 0.0;
  Vec2 incident_dir{1.0, 0.0};
  std::vector<Triangle> cells;
  int nodes_per_cell = 0;
  std::vector<Vec2> points;
  std::vector<double> weights;
  std::vector<double> rho;   // contrast at the nodes
  std::vector<Complex> u;    // total field at the nodes
  std::vector<Complex> self; // exact own-cell kernel integral per node
  int iterations = 0;
  double residual = 0.0;
  double contraction = 0.0;      // estimated Neumann series ratio
  std::vector<double> history;   // sup-norm step size per iteration
};

namespace detail {

inline Complex incident_wave(double k, Vec2 d, Vec2 x) {
  return std::exp(Complex{0.0, k * dot(d, x)});
}

}  // namespace detail

// Nystrom-style fixed point solve. The kernel matrix is never stored: each
// sweep re-evaluates Phi pairwise, swapping memory for Bessel evaluations.
// Own-cell contributions are lumped at the node value with the exact wedge
// integral; cross terms use the plain rule, which is fine since Phi is
// smooth between distinct cells at these resolutions.
inline IbvpSolution solve_lippmann_schwinger(const SourceSpec& medium, double k, Vec2 d,
                                             const IbvpOptions& opt = {}, int threads = 1) {
  if (medium.disk) throw ConfigInvalid("ibvp: polygonal supports only");
  if (medium.kind != SourceKind::Monopole)
    throw ConfigInvalid("ibvp: the contrast is a density, not a dipole layer");
  validate_source(medium);
  if (!(k > 0.0)) throw ConfigInvalid("ibvp: k must be positive");
  const double dn = norm(d);
  if (dn == 0.0) throw ConfigInvalid("ibvp: incident direction must be nonzero");
  d = d / dn;

  IbvpSolution sol;
  sol.k = k;
  sol.incident_dir = d;
  sol.cells = refine_uniform(triangulate(medium.polygon), opt.refine);
  const TriangleRule ref = triangle_rule(opt.order);
  sol.nodes_per_cell = (int)ref.points.size();
  const std::size_t n = sol.cells.size() * ref.points.size();
  sol.points.reserve(n);
  sol.weights.reserve(n);
  sol.rho.reserve(n);
  for (const Triangle& t : sol.cells) {
    const CellRule cr = map_rule_to_triangle(ref, t);
    for (std::size_t i = 0; i < cr.points.size(); ++i) {
      sol.points.push_back(cr.points[i]);
      sol.weights.push_back(cr.weights[i]);
      sol.rho.push_back(density(medium, cr.points[i]));
    }
  }
  sol.self.resize(n);
  const std::size_t npc = (std::size_t)sol.nodes_per_cell;
  detail::run_chunked(n, threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i)
      sol.self[i] = triangle_kernel_integral(k, sol.points[i], sol.cells[i / npc]);
  });

  // Contraction estimate k^2 max|rho| sup_x int_D |Phi(x - y)| dy, the sup
  // sampled at the quadrature nodes (own cell by |own integral|, a hair low
  // where the kernel phase turns, immaterial at these cell sizes). Must sit
  // below 1 for the fixed point iteration to be meaningful.
  std::vector<double> rowsum(n, 0.0);
  detail::run_chunked(n, threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const std::size_t ci = i / npc;
      long double s = std::abs(sol.self[i]);
      for (std::size_t j = 0; j < n; ++j) {
        if (j / npc == ci) continue;
        const FundamentalSolution fs = fundamental_solution(k, sol.points[i] - sol.points[j]);
        s += sol.weights[j] * std::abs(fs.phi);
      }
      rowsum[i] = (double)s;
    }
  });
  double gamma = 0.0;
  for (double s : rowsum) gamma = std::max(gamma, s);
  double rho_max = 0.0;
  for (double r : sol.rho) rho_max = std::max(rho_max, std::abs(r));
  sol.contraction = k * k * rho_max * gamma;
  if (sol.contraction >= 1.0)
    throw ContractionViolated("ibvp: estimated operator norm >= 1, fixed point may diverge");

  std::vector<Complex> inc(n);
  for (std::size_t i = 0; i < n; ++i) inc[i] = detail::incident_wave(k, d, sol.points[i]);
  sol.u = inc;
  std::vector<Complex> next(n);
  for (int it = 1; it <= opt.max_iter; ++it) {
    detail::run_chunked(n, threads, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) {
        const std::size_t ci = i / npc;
        std::complex<long double> acc{0.0L, 0.0L};
        for (std::size_t j = 0; j < n; ++j) {
          if (j / npc == ci) continue;
          const FundamentalSolution fs =
              fundamental_solution(k, sol.points[i] - sol.points[j]);
          acc += (std::complex<long double>)(sol.weights[j] * sol.rho[j] * sol.u[j] * fs.phi);
        }
        acc += (std::complex<long double>)(sol.rho[i] * sol.u[i] * sol.self[i]);
        next[i] = inc[i] + k * k * Complex{(double)acc.real(), (double)acc.imag()};
      }
    });
    double diff = 0.0;
    for (std::size_t i = 0; i < n; ++i) diff = std::max(diff, std::abs(next[i] - sol.u[i]));
    sol.u = next;
    sol.iterations = it;
    sol.residual = diff;
    sol.history.push_back(diff);
    if (diff <= opt.tol) return sol;
  }
  throw MaxIterationsExceeded("ibvp: fixed point did not reach tolerance");
}

// Total field at the quadrature node nearest to p; the corner monitor needs
// field sizes near supporting vertices, and node spacing is well below any
// feature scale of u there.
inline Complex nearest_node_value(const IbvpSolution& sol, Vec2 p) {
  if (sol.points.empty()) throw MissingInput("nearest_node_value: empty solution");
  std::size_t best = 0;
  double bd = norm_sq(sol.points[0] - p);
  for (std::size_t i = 1; i < sol.points.size(); ++i) {
    const double d = norm_sq(sol.points[i] - p);
    if (d < bd) {
      bd = d;
      best = i;
    }
  }
  return sol.u[best];
}

// Cauchy pair of the total field on the measurement curve: incident part in
// closed form plus the single layer radiated by the discrete source
// k^2 rho u. The incident part drops out of the boundary pairing (it solves
// the homogeneous equation inside), so these traces feed the same pipeline
// as direct source data.
inline CauchyData synthesize_ibvp_cauchy(const IbvpSolution& sol, const SourceSpec& medium,
                                         const OmegaShape& shape, int n_boundary,
                                         double clearance = 1e-6, int threads = 1) {
  CauchyData data;
  data.k = sol.k;
  data.nodes = boundary_nodes(shape, n_boundary);
  data.meta.kind = "ibvp";
  for (const BoundaryNode& bn : data.nodes) {
    if (point_in_polygon(medium.polygon, bn.pos))
      throw EvaluationInsideSource("synthesize_ibvp_cauchy: measurement node inside the medium");
    if (distance_to_polygon(medium.polygon, bn.pos) < clearance)
      throw ClearanceViolation("synthesize_ibvp_cauchy: measurement curve too close to the medium");
  }
  const double k = sol.k;
  const Vec2 d = sol.incident_dir;
  detail::run_chunked(data.nodes.size(), threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t b = lo; b < hi; ++b) {
      BoundaryNode& bn = data.nodes[b];
      std::complex<long double> au{0.0L, 0.0L}, ad{0.0L, 0.0L};
      for (std::size_t j = 0; j < sol.points.size(); ++j) {
        const FundamentalSolution fs = fundamental_solution(k, bn.pos - sol.points[j]);
        const Complex src = sol.weights[j] * sol.rho[j] * sol.u[j];
        au += (std::complex<long double>)(src * fs.phi);
        ad += (std::complex<long double>)(src *
                                          (fs.grad.x1 * bn.normal.x1 + fs.grad.x2 * bn.normal.x2));
      }
      const Complex inc = detail::incident_wave(k, d, bn.pos);
      const Complex dinc = Complex{0.0, k * dot(d, bn.normal)} * inc;
      bn.u = inc + k * k * Complex{(double)au.real(), (double)au.imag()};
      bn.dnu = dinc + k * k * Complex{(double)ad.real(), (double)ad.imag()};
    }
  });
  return data;
}

// Domain-side indicator of the total-field data: the boundary pairing equals
// -k^2 int_D rho u v by Green's identity (the scattered part solves
// (Laplacian + k^2) w = -k^2 rho u chi_D, the incident part drops out),
// evaluated here on the solver's own discrete measure. Same shift convention
// as the other indicator paths.
inline IndicatorSample ibvp_domain_indicator(const IbvpSolution& sol, const SourceSpec& medium,
                                             Vec2 omega, double tau, double t) {
  if (!(tau > 0.0)) throw DomainError("ibvp_domain_indicator: tau must be positive");
  const CVec2 z = probe_vector(omega, tau, sol.k);
  const double tstar = source_support(medium, omega);
  std::complex<long double> acc{0.0L, 0.0L};
  for (std::size_t j = 0; j < sol.points.size(); ++j) {
    const Complex v = std::exp(dot(z, sol.points[j]) - tau * tstar);
    acc += (std::complex<long double>)(sol.weights[j] * sol.rho[j] * sol.u[j] * v);
  }
  acc *= -(long double)(sol.k * sol.k);
  return detail::pack_sample(acc, tau, t, tstar);
}

}  // namespace enclosure
