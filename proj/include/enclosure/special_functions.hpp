#pragma once

#include <cmath>

#include "enclosure/core.hpp"
#include "enclosure/errors.hpp"

namespace enclosure {

// Bessel functions of order 0 and 1, real nonnegative arguments.
//
// Two regimes: ascending series for x <= 12, Hankel asymptotic expansion for
// x > 12. The crossover sits where both regimes deliver ~1e-11 or better in
// double precision: the asymptotic optimal-truncation floor is ~6e-12 at
// x = 12 (it would be ~2e-8 at x = 8), and the series cancellation there
// amplifies roundoff by ~4e3, which long-double accumulation absorbs.
// Intended accuracy: 1e-10 absolute on [0, 50].

namespace detail {

inline constexpr double kBesselCrossover = 12.0;

struct SeriesJY {
  long double j;   // J_n(x)
  long double ys;  // harmonic-number weighted companion sum for Y_n(x)
};

// J0 and, when needed, the sum S0 = sum_{m>=1} (-1)^{m+1} H_m q^m / (m!)^2.
inline SeriesJY j0_series(double x, bool want_y) {
  const long double q = (long double)(x) * x / 4.0L;
  long double term = 1.0L, sum = 1.0L, hsum = 0.0L, h = 0.0L;
  for (int m = 1; m < 200; ++m) {
    term *= -q / ((long double)(m) * m);
    sum += term;
    if (want_y) {
      h += 1.0L / m;
      hsum -= term * h;  // -(-1)^m H_m q^m/(m!)^2 = (-1)^{m+1} H_m q^m/(m!)^2
    }
    if (std::abs((double)term) < 1e-20 * (1.0 + std::abs((double)sum))) break;
  }
  return {sum, hsum};
}

// J1/(x/2) and the companion sum for Y1.
inline SeriesJY j1_series(double x, bool want_y) {
  const long double q = (long double)(x) * x / 4.0L;
  long double term = 1.0L, sum = 1.0L;
  long double h = 0.0L, hnext = 1.0L;      // H_0, H_1
  long double hsum = want_y ? 1.0L : 0.0L; // m=0 contribution: H_0 + H_1 = 1
  for (int m = 1; m < 200; ++m) {
    term *= -q / ((long double)(m) * (m + 1));
    sum += term;
    if (want_y) {
      h += 1.0L / m;
      hnext += 1.0L / (m + 1);
      hsum += term * (h + hnext);
    }
    if (std::abs((double)term) < 1e-20 * (1.0 + std::abs((double)sum))) break;
  }
  return {sum, hsum};
}

struct AsymptoticPQ {
  double p, q;
};

// Hankel expansion moduli P, Q for order nu, truncated at the smallest term.
inline AsymptoticPQ hankel_pq(int nu, double x) {
  const double mu = 4.0 * nu * nu;
  long double u = 1.0L;  // u_0
  long double p = 1.0L, q = 0.0L;
  long double prev = 1e30L;
  for (int m = 1; m <= 40; ++m) {
    const double odd = 2.0 * m - 1.0;
    u *= (long double)((mu - odd * odd) / (8.0 * x * m));
    if (std::abs((double)u) >= prev) break;  // optimal truncation reached
    prev = std::abs((double)u);
    const int phase = (m / 2) % 2;  // alternate every other term
    const long double signed_u = phase ? -u : u;
    if (m % 2 == 1)
      q += signed_u;
    else
      p += signed_u;
    if (prev < 1e-17) break;
  }
  return {(double)p, (double)q};
}

inline double bessel_asymptotic(int nu, double x, bool neumann) {
  const auto [p, q] = hankel_pq(nu, x);
  const double chi = x - (0.5 * nu + 0.25) * kPi;
  const double amp = std::sqrt(2.0 / (kPi * x));
  const double c = std::cos(chi), s = std::sin(chi);
  return neumann ? amp * (p * s + q * c) : amp * (p * c - q * s);
}

}  // namespace detail

inline double bessel_j0(double x) {
  if (!(x >= 0.0)) throw DomainError("bessel_j0: argument must be >= 0");
  if (x > detail::kBesselCrossover) return detail::bessel_asymptotic(0, x, false);
  return (double)detail::j0_series(x, false).j;
}

inline double bessel_j1(double x) {
  if (!(x >= 0.0)) throw DomainError("bessel_j1: argument must be >= 0");
  if (x > detail::kBesselCrossover) return detail::bessel_asymptotic(1, x, false);
  return (double)((long double)(x) / 2.0L * detail::j1_series(x, false).j);
}

inline double bessel_y0(double x) {
  if (!(x > 0.0)) throw DomainError("bessel_y0: argument must be > 0");
  if (x > detail::kBesselCrossover) return detail::bessel_asymptotic(0, x, true);
  const auto s = detail::j0_series(x, true);
  const long double lg = std::log((long double)(x) / 2.0L) + (long double)kEulerGamma;
  return (double)((2.0L / (long double)kPi) * (lg * s.j + s.ys));
}

inline double bessel_y1(double x) {
  if (!(x > 0.0)) throw DomainError("bessel_y1: argument must be > 0");
  if (x > detail::kBesselCrossover) return detail::bessel_asymptotic(1, x, true);
  const auto s = detail::j1_series(x, true);
  const long double xl = x;
  const long double j1 = xl / 2.0L * s.j;
  const long double lg = std::log(xl / 2.0L) + (long double)kEulerGamma;
  return (double)((2.0L / (long double)kPi) * lg * j1 - 2.0L / ((long double)kPi * xl) -
                  xl / (2.0L * (long double)kPi) * s.ys);
}

enum class BesselKind { J, Y };

inline double bessel(BesselKind kind, int order, double x) {
  if (order != 0 && order != 1)
    throw DomainError("bessel: only orders 0 and 1 are provided");
  if (kind == BesselKind::J) return order == 0 ? bessel_j0(x) : bessel_j1(x);
  return order == 0 ? bessel_y0(x) : bessel_y1(x);
}

// Outgoing Hankel functions H^(1)_n = J_n + i Y_n.
inline Complex hankel1_0(double x) { return {bessel_j0(x), bessel_y0(x)}; }
inline Complex hankel1_1(double x) { return {bessel_j1(x), bessel_y1(x)}; }

// Fundamental solution of the Helmholtz operator, outgoing convention:
// (Laplacian + k^2) phi = -delta.
//   k > 0:  phi(r) = (i/4) H^(1)_0(k|r|),  grad phi = -(ik/4) H^(1)_1(k|r|) r/|r|
//   k = 0:  phi(r) = -(1/2pi) ln|r|,       grad phi = -(1/2pi) r/|r|^2
struct FundamentalSolution {
  Complex phi;
  CVec2 grad;
};

inline FundamentalSolution fundamental_solution(double k, Vec2 r) {
  if (!(k >= 0.0)) throw DomainError("fundamental_solution: k must be >= 0");
  const double rr = norm(r);
  if (rr == 0.0) throw OriginEvaluation("fundamental_solution: |r| = 0");
  if (k == 0.0) {
    const double phi = -std::log(rr) / (2.0 * kPi);
    const double g = -1.0 / (2.0 * kPi * rr * rr);
    return {Complex{phi, 0.0}, CVec2{Complex{g * r.x1, 0.0}, Complex{g * r.x2, 0.0}}};
  }
  const Complex i{0.0, 1.0};
  const Complex phi = 0.25 * i * hankel1_0(k * rr);
  const Complex gscale = -0.25 * i * k * hankel1_1(k * rr) / rr;
  return {phi, CVec2{gscale * r.x1, gscale * r.x2}};
}

// Hessian of phi at r (symmetric 2x2: h11, h12, h22). Needed to form normal
// derivatives of dipole fields.
struct FundamentalHessian {
  Complex h11, h12, h22;
};

inline FundamentalHessian fundamental_solution_hessian(double k, Vec2 r) {
  if (!(k >= 0.0)) throw DomainError("fundamental_solution_hessian: k must be >= 0");
  const double rr = norm(r);
  if (rr == 0.0) throw OriginEvaluation("fundamental_solution_hessian: |r| = 0");
  Complex fp, fpp;  // phi'(|r|), phi''(|r|)
  if (k == 0.0) {
    fp = Complex{-1.0 / (2.0 * kPi * rr), 0.0};
    fpp = Complex{1.0 / (2.0 * kPi * rr * rr), 0.0};
  } else {
    const Complex i{0.0, 1.0};
    const Complex h0 = hankel1_0(k * rr), h1 = hankel1_1(k * rr);
    fp = -0.25 * i * k * h1;
    fpp = -0.25 * i * k * k * (h0 - h1 / (k * rr));
  }
  const double e1 = r.x1 / rr, e2 = r.x2 / rr;
  const Complex radial = fpp, tangential = fp / rr;
  return {radial * (e1 * e1) + tangential * (e2 * e2),
          (radial - tangential) * (e1 * e2),
          radial * (e2 * e2) + tangential * (e1 * e1)};
}

// Radial moment: integral of phi(|y|) over the disk |y| <= R, divided by the
// angular measure, i.e. M(R) = int_0^R phi(r) r dr. Used for exact handling
// of the kernel singularity on cells that contain the target point.
//   k > 0: int_0^R (i/4) H0(kr) r dr = (i/4) R H1(kR) / k - 1/(2 pi k^2)
//          (x H1(x) -> -2i/pi as x -> 0, so the lower limit contributes)
//   k = 0: int_0^R -(ln r / 2pi) r dr = (R^2/(8pi)) (1 - 2 ln R)
inline Complex fundamental_solution_radial_moment(double k, double R) {
  if (!(k >= 0.0)) throw DomainError("fundamental_solution_radial_moment: k must be >= 0");
  if (!(R >= 0.0)) throw DomainError("fundamental_solution_radial_moment: R must be >= 0");
  if (R == 0.0) return {0.0, 0.0};
  if (k == 0.0) return {R * R * (1.0 - 2.0 * std::log(R)) / (8.0 * kPi), 0.0};
  const Complex i{0.0, 1.0};
  return 0.25 * i * R * hankel1_1(k * R) / k - 1.0 / (2.0 * kPi * k * k);
}

}  // namespace enclosure
