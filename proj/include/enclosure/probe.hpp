#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "enclosure/core.hpp"
#include "enclosure/errors.hpp"
#include "enclosure/forward.hpp"
#include "enclosure/geometry.hpp"
#include "enclosure/quadrature.hpp"
#include "enclosure/special_functions.hpp"

namespace enclosure {

// Complex probe direction z = tau omega + i sqrt(tau^2 + k^2) omega_perp.
// Then z . z = -k^2, so exp(x . z) solves the homogeneous Helmholtz equation;
// its magnitude grows like exp(tau x . omega) across the supporting line.
inline CVec2 probe_vector(Vec2 omega, double tau, double k) {
  if (!(tau > 0.0)) throw DomainError("probe_vector: tau must be positive");
  if (!(k >= 0.0)) throw DomainError("probe_vector: k must be >= 0");
  const double s = std::sqrt(tau * tau + k * k);
  const Vec2 wp = perp(omega);
  return {Complex{tau * omega.x1, s * wp.x1}, Complex{tau * omega.x2, s * wp.x2}};
}

struct ProbeValue {
  Complex v;
  CVec2 grad;         // grad v = z v
  double log_abs_v;   // tau (x . omega - t), safe even where v overflows
};

inline ProbeValue probe_field(Vec2 omega, double tau, double k, double t, Vec2 x) {
  const CVec2 z = probe_vector(omega, tau, k);
  const Complex e = dot(z, x) - tau * t;
  const Complex v = std::exp(e);
  return {v, {z.x1 * v, z.x2 * v}, e.real()};
}

inline Complex probe_field(CVec2 z, double tau, double t, Vec2 x) {
  return std::exp(dot(z, x) - tau * t);
}

// One indicator evaluation. The magnitude is stored as a logarithm: the
// values span hundreds of orders of magnitude over a tau sweep, and the
// support fit consumes log magnitudes anyway. Identically zero sums keep the
// -inf sentinel in log_abs and set the zero flag instead of faking a value.
// noise_floor is the log of the smallest magnitude the evaluation could
// resolve (rounding of the stored traces plus any recorded synthetic noise,
// accumulated incoherently); -inf means no floor estimate is available.
struct IndicatorSample {
  double tau = 0.0;
  double t = 0.0;
  double log_abs = kLogZero;
  double phase = 0.0;
  double noise_floor = kLogZero;
  bool zero = true;
};

namespace detail {

inline double max_projection(const std::vector<BoundaryNode>& nodes, Vec2 omega) {
  double m = -std::numeric_limits<double>::infinity();
  for (const BoundaryNode& bn : nodes) m = std::max(m, dot(bn.pos, omega));
  return m;
}

inline IndicatorSample pack_sample(std::complex<long double> acc, double tau, double t,
                                   double tstar) {
  IndicatorSample out;
  out.tau = tau;
  out.t = t;
  const long double mag = std::abs(acc);
  if (mag == 0.0L) return out;  // log_abs keeps the -inf sentinel, zero stays set
  out.zero = false;
  out.log_abs = (double)std::log(mag) + tau * (tstar - t);
  out.phase = (double)std::arg(acc);
  return out;
}

}  // namespace detail

// Indicator from Cauchy data: the boundary pairing
//   I(tau, t) = int_dOmega (dnu_u v - u dnu_v) ds
//             = sum_i w_i (dnu_i - u_i (z . nu_i)) exp(x_i . z - tau t).
// With the field convention (Laplacian + k^2) u = rho chi_D, Green's identity
// turns this into + int_D rho v. Internally the exponent is shifted by the
// largest node projection so every term has magnitude <= 1; the shift is
// restored in the returned logarithm. The pairing runs in long double so the
// cancellation floor sits at the storage rounding of the traces themselves.
inline IndicatorSample indicator_boundary(const CauchyData& data, Vec2 omega, double tau,
                                          double t) {
  if (!(tau > 0.0)) throw DomainError("indicator_boundary: tau must be positive");
  if (data.nodes.empty()) throw MissingInput("indicator_boundary: no boundary nodes");
  double perimeter = 0.0;
  for (const BoundaryNode& bn : data.nodes) perimeter += bn.weight;
  if ((int)data.nodes.size() < min_boundary_nodes(tau, data.k, perimeter, 1.0))
    throw UnderResolvedRule("indicator_boundary: boundary rule too coarse for this tau");

  const CVec2 z = probe_vector(omega, tau, data.k);
  const double tstar = detail::max_projection(data.nodes, omega);
  using CL = std::complex<long double>;
  const CL zl1{z.x1.real(), z.x1.imag()};
  const CL zl2{z.x2.real(), z.x2.imag()};
  CL acc{0.0L, 0.0L};
  long double aa = 0.0L;
  for (const BoundaryNode& bn : data.nodes) {
    const CL zn = zl1 * (long double)bn.normal.x1 + zl2 * (long double)bn.normal.x2;
    const CL ex = zl1 * (long double)bn.pos.x1 + zl2 * (long double)bn.pos.x2 -
                  (long double)(tau * tstar);
    const CL phase = std::exp(ex);
    acc += (long double)bn.weight * ((CL)bn.dnu - (CL)bn.u * zn) * phase;
    // Scale of this term before cancellation, for the resolution floor below.
    const long double amp = (long double)bn.weight *
                            (std::abs((CL)bn.dnu) + std::abs((CL)bn.u) * std::abs(zn)) *
                            std::abs(phase);
    aa += amp * amp;
  }
  IndicatorSample out = detail::pack_sample(acc, tau, t, tstar);
  // Each term inherits the relative rounding of the stored traces (about
  // 1e-15 after transport and summation) plus whatever noise level the data
  // records. Those per-term errors add incoherently, so the smallest sum the
  // pairing can resolve is that relative scale times the root sum of squared
  // term magnitudes. The same shift restoration as log_abs keeps the floor
  // directly comparable to it.
  const double rel = std::max(data.meta.noise.applied ? data.meta.noise.level : 0.0, 1e-15);
  if (aa > 0.0L)
    out.noise_floor = std::log(rel) + 0.5 * (double)std::log(aa) + tau * (tstar - t);
  return out;
}

// Indicator straight from the source description:
//   I(tau, t) = int_D rho(y) exp(y . z - tau t) dy   (monopole)
//   J(tau, t) = -(a . z) I(tau, t)                   (dipole; exact for any
//                                                     rho since grad v = z v)
// Polygon supports use the exact per-triangle exponential integrals (the
// affine density needs only first moments); disks use the polar rule sized
// by the interior parameters. The same internal shift convention applies,
// anchored at the support value so the integrand magnitude is <= 1.
inline IndicatorSample indicator_domain(const SourceSpec& s, double k, Vec2 omega, double tau,
                                        double t, const InteriorRule& rule = {}) {
  if (!(tau > 0.0)) throw DomainError("indicator_domain: tau must be positive");
  if (!(k >= 0.0)) throw DomainError("indicator_domain: k must be >= 0");
  validate_source(s);
  const CVec2 z = probe_vector(omega, tau, k);
  const double tstar = source_support(s, omega);
  std::complex<long double> acc{0.0L, 0.0L};
  if (s.disk) {
    const CellRule cr = disk_rule(s.center, s.radius, rule.disk_nr, rule.disk_ntheta);
    for (std::size_t i = 0; i < cr.points.size(); ++i) {
      const Complex v = std::exp(dot(z, cr.points[i]) - tau * tstar);
      acc += (std::complex<long double>)(cr.weights[i] * density(s, cr.points[i]) * v);
    }
  } else {
    const std::vector<Triangle> tris = triangulate(s.polygon);
    const Complex shift{-tau * tstar, 0.0};
    for (const Triangle& tri : tris) {
      Triangle tt = tri;
      // Fold the shift into the vertex values by evaluating the divided
      // differences at w_j = z . v_j - tau t*; equivalent to scaling by
      // exp(-tau t*).
      const std::vector<Complex> w{dot(z, tt.a) + shift, dot(z, tt.b) + shift,
                                   dot(z, tt.c) + shift};
      const double jac = 2.0 * triangle_area(tt);
      const Complex mass = jac * exp_divided_difference(w);
      Complex cell = s.rho0 * mass;
      if (s.rho1 != 0.0 || s.rho2 != 0.0) {
        const Vec2 v[3] = {tt.a, tt.b, tt.c};
        for (int j = 0; j < 3; ++j) {
          const Complex dd = jac * exp_divided_difference({w[0], w[1], w[2], w[j]});
          cell += (s.rho1 * v[j].x1 + s.rho2 * v[j].x2) * dd;
        }
      }
      acc += (std::complex<long double>)cell;
    }
  }
  if (s.kind == SourceKind::Dipole) {
    const Complex az = dot(z, s.axis);
    acc *= (std::complex<long double>)(-az);
  }
  return detail::pack_sample(acc, tau, t, tstar);
}

// Partial-boundary indicator: the same pairing restricted to nodes on the
// near side x . omega >= t - eps, scaled by tau^2 so a corner sitting exactly
// at level t gives an O(1) value. Returned unshifted as a complex number;
// magnitudes stay representable for the tau ranges the side test uses.
inline Complex indicator_partial(const CauchyData& data, Vec2 omega, double tau, double t,
                                 double eps) {
  if (!(tau > 0.0)) throw DomainError("indicator_partial: tau must be positive");
  if (!(eps >= 0.0)) throw DomainError("indicator_partial: eps must be >= 0");
  if (data.nodes.empty()) throw MissingInput("indicator_partial: no boundary nodes");
  const CVec2 z = probe_vector(omega, tau, data.k);
  std::complex<long double> acc{0.0L, 0.0L};
  for (const BoundaryNode& bn : data.nodes) {
    if (dot(bn.pos, omega) < t - eps) continue;
    const Complex zn = z.x1 * bn.normal.x1 + z.x2 * bn.normal.x2;
    const Complex phase = std::exp(dot(z, bn.pos) - tau * t);
    acc += (std::complex<long double>)(bn.weight * ((bn.dnu - bn.u * zn) * phase));
  }
  acc *= (long double)(tau * tau);
  return {(double)acc.real(), (double)acc.imag()};
}

// Leading-order prediction of the indicator at the support level t = h(omega)
// for a polygonal source with a regular direction:
//   I(tau, h) ~ tau^{-2} rho(p) exp(i sqrt(tau^2 + k^2) p . omega_perp) A,
// with p the supporting corner and A its opening amplitude. The corner data
// comes from the original vertex loop: the local cone of the support at p is
// what drives the asymptotics, not the convex hull's edges.
inline Complex vertex_asymptote(const SourceSpec& s, double k, Vec2 omega, double tau,
                                double margin = 1e-9) {
  if (s.disk) throw DomainError("vertex_asymptote: defined for polygonal supports only");
  if (!(tau > 0.0)) throw DomainError("vertex_asymptote: tau must be positive");
  const VertexData vd = vertex_data(s.polygon, omega, margin);
  const double sfreq = std::sqrt(tau * tau + k * k);
  const Complex osc = std::exp(Complex{0.0, sfreq * dot(vd.p, perp(omega))});
  Complex value = density(s, vd.p) / (tau * tau) * osc * vd.amplitude;
  if (s.kind == SourceKind::Dipole) {
    const CVec2 z = probe_vector(omega, tau, k);
    value *= -dot(z, s.axis);
  }
  return value;
}

// Closed-form indicator for a constant-density disk of radius eps at p:
//   I(tau, t) = rho0 C(k, eps) exp(p . z - tau t),
//   C = 2 pi eps J1(k eps) / k   (k > 0),   C = pi eps^2   (k = 0).
// The factor C carries no tau dependence at all: the logarithmic slope
// recovers p . omega, the support of the center, not of the disk. Smooth
// strictly convex boundaries shift the recovered support inward like this;
// the demo scenario exercises exactly that contrast.
inline IndicatorSample disk_indicator_closed_form(Vec2 p, double eps, double rho0, double k,
                                                  Vec2 omega, double tau, double t) {
  if (!(eps > 0.0)) throw DomainError("disk_indicator_closed_form: eps must be positive");
  if (!(tau > 0.0)) throw DomainError("disk_indicator_closed_form: tau must be positive");
  const double c = k > 0.0 ? 2.0 * kPi * eps * bessel_j1(k * eps) / k : kPi * eps * eps;
  const double sfreq = std::sqrt(tau * tau + k * k);
  IndicatorSample out;
  out.tau = tau;
  out.t = t;
  const double mag = std::abs(rho0 * c);
  if (mag == 0.0) return out;
  out.zero = false;
  out.log_abs = std::log(mag) + tau * (dot(p, omega) - t);
  const double base = rho0 * c > 0.0 ? 0.0 : kPi;
  out.phase = std::arg(std::exp(Complex{0.0, sfreq * dot(p, perp(omega)) + base}));
  return out;
}

}  // namespace enclosure
