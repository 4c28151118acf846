#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "enclosure/core.hpp"
#include "enclosure/errors.hpp"
#include "enclosure/forward.hpp"
#include "enclosure/geometry.hpp"
#include "enclosure/probe.hpp"

namespace enclosure {

// Expected log tau coefficient of the indicator magnitude at the support
// level: volume sources decay like tau^-2 at a corner, dipole layers gain one
// power of tau from the extra z factor.
inline double expected_log_slope(const std::string& kind) {
  if (kind == "dipole") return -1.0;
  return -2.0;
}

struct FitOptions {
  double residual_threshold = 0.05;  // RMS log residual counted as a clean power law
  double b_window = 0.5;             // |b - expected| window for the regularity hint
  int min_samples = 4;
  double min_span_factor = 4.0;      // required tau_max / tau_min
  double floor_factor = 3.0;         // required |I| multiple over a sample's own noise floor
  double trim_depth = 0.5;           // log depth below the ridge fit that marks a dip sample
  double tail_excess = 0.8;          // log excess over a sub-fit that marks a noise-floor tail
};

struct SupportEstimate {
  double omega_angle = 0.0;  // radians
  Vec2 omega{1.0, 0.0};
  double h = 0.0;        // estimated support value
  double slope_b = 0.0;  // fitted log tau coefficient
  double residual = 0.0; // RMS fit residual over the samples kept
  bool regular_hint = false;
  int used_samples = 0;
};

namespace detail {

struct LogFit {
  double a, b, c, rms;
};

// Least squares for log|I| = a tau + b log tau + c over the given samples,
// optionally weighted. The reported rms is always unweighted: it is the
// diagnostic for how well the pure power-law model holds.
inline LogFit fit_log_model(const std::vector<IndicatorSample>& s,
                            const std::vector<long double>* weights = nullptr) {
  long double m[3][3] = {};
  long double r[3] = {};
  for (std::size_t n = 0; n < s.size(); ++n) {
    const IndicatorSample& x = s[n];
    const long double w = weights ? (*weights)[n] : 1.0L;
    const long double row[3] = {(long double)x.tau, std::log((long double)x.tau), 1.0L};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) m[i][j] += w * row[i] * row[j];
      r[i] += w * row[i] * (long double)x.log_abs;
    }
  }
  // 3x3 Gaussian elimination with partial pivoting.
  int piv[3] = {0, 1, 2};
  for (int col = 0; col < 3; ++col) {
    int best = col;
    for (int i = col + 1; i < 3; ++i)
      if (std::abs(m[piv[i]][col]) > std::abs(m[piv[best]][col])) best = i;
    std::swap(piv[col], piv[best]);
    const long double d = m[piv[col]][col];
    if (d == 0.0L) throw InsufficientSamples("support fit: singular normal equations");
    for (int i = col + 1; i < 3; ++i) {
      const long double f = m[piv[i]][col] / d;
      for (int j = col; j < 3; ++j) m[piv[i]][j] -= f * m[piv[col]][j];
      r[piv[i]] -= f * r[piv[col]];
    }
  }
  long double sol[3];
  for (int col = 2; col >= 0; --col) {
    long double v = r[piv[col]];
    for (int j = col + 1; j < 3; ++j) v -= m[piv[col]][j] * sol[j];
    sol[col] = v / m[piv[col]][col];
  }
  long double ss = 0.0L;
  for (const IndicatorSample& x : s) {
    const long double fit =
        sol[0] * x.tau + sol[1] * std::log((long double)x.tau) + sol[2];
    const long double e = fit - (long double)x.log_abs;
    ss += e * e;
  }
  return {(double)sol[0], (double)sol[1], (double)sol[2],
          std::sqrt((double)(ss / (long double)s.size()))};
}

// Reweighted fit that follows the upper envelope of the samples. Destructive
// interference between corner contributions carves narrow dips into |I| far
// below the power-law envelope, and a symmetric fit chases them. Weighting
// each sample by (|I| / model)^2, capped slightly above the model, makes dip
// samples nearly weightless while envelope samples keep full influence, so
// the iteration settles on the envelope. Exact power-law data is a fixed
// point: every weight is then equal and the plain fit is returned unchanged.
inline LogFit fit_log_envelope(const std::vector<IndicatorSample>& s) {
  LogFit fit = fit_log_model(s);
  std::vector<long double> w(s.size(), 1.0L);
  for (int iter = 0; iter < 30; ++iter) {
    long double wmax = 0.0L;
    for (std::size_t n = 0; n < s.size(); ++n) {
      const long double model = (long double)fit.a * s[n].tau +
                                (long double)fit.b * std::log((long double)s[n].tau) +
                                (long double)fit.c;
      const long double resid = (long double)s[n].log_abs - model;
      w[n] = std::exp(2.0L * std::min(resid, 1.0L));
      wmax = std::max(wmax, w[n]);
    }
    // Floor keeps the normal equations conditioned when most samples sit in dips.
    for (long double& v : w) v = std::max(v, 1e-8L * wmax);
    const LogFit next = fit_log_model(s, &w);
    const double step = std::max({std::abs(next.a - fit.a), std::abs(next.b - fit.b),
                                  std::abs(next.c - fit.c)});
    fit = next;
    if (step < 1e-12) break;
  }
  return fit;
}

// Envelope fit with dip trimming. On short or sparse grids a deep dip still
// tilts the reweighted fit even at near-zero weight, because the envelope
// samples alone barely constrain three parameters; removing samples far
// below the fit and refitting is stabler. Two rounds suffice: the first
// clears the deep dips, the second settles on the cleaned set. The input is
// pruned in place so the caller sees which samples the fit stands on, never
// below min_keep, and the reported rms covers exactly the kept set. Data
// without deep dips passes through both rounds unchanged.
inline LogFit fit_log_ridge(std::vector<IndicatorSample>& s, double trim_depth, int min_keep) {
  LogFit fit = fit_log_envelope(s);
  for (int round = 0; round < 2; ++round) {
    if ((int)s.size() <= min_keep) break;
    std::vector<IndicatorSample> kept;
    kept.reserve(s.size());
    for (const IndicatorSample& x : s) {
      const double model = fit.a * x.tau + fit.b * std::log(x.tau) + fit.c;
      if (x.log_abs - model >= -trim_depth) kept.push_back(x);
    }
    if ((int)kept.size() < min_keep || kept.size() == s.size()) break;
    s.swap(kept);
    fit = fit_log_envelope(s);
  }
  return fit;
}

}  // namespace detail

// Support value from indicator samples taken at shift t: fit
// log|I| = a tau + b log tau + c, then h = a + t (exactly invariant under the
// shift convention). Three defenses guard the fit. Samples sitting within
// floor_factor of their own noise floor are dropped up front: cancellation
// has eaten their envelope information and their log values flatten onto the
// floor instead of following the decay. Samples without a floor estimate
// pass through, so a tail parked on an unrecorded floor can still poison the
// grid; the top sample is therefore popped while it lies well above a ridge
// fit of the samples below it (the gate excludes the suspect itself so a
// gross outlier cannot drag the gate toward its own level). Finally, deep
// interference dips below the envelope are trimmed by the ridge fit, and the
// reported residual and sample count cover the set the fit stands on.
inline SupportEstimate estimate_support(std::vector<IndicatorSample> samples, double t,
                                        double expected_b, const FitOptions& opt = {}) {
  for (const IndicatorSample& s : samples)
    if (s.zero || s.log_abs == kLogZero)
      throw SaturatedSamples("estimate_support: an indicator sample underflowed to zero");
  {
    const double margin = std::log(opt.floor_factor);
    std::erase_if(samples, [margin](const IndicatorSample& s) {
      return s.log_abs < s.noise_floor + margin;
    });
  }
  const auto check_grid = [&opt](const std::vector<IndicatorSample>& s) {
    if ((int)s.size() < opt.min_samples)
      throw InsufficientSamples("estimate_support: need at least 4 samples");
    double lo = s.front().tau, hi = s.front().tau;
    for (const IndicatorSample& x : s) {
      lo = std::min(lo, x.tau);
      hi = std::max(hi, x.tau);
      if (!(x.tau > 0.0)) throw InsufficientSamples("estimate_support: tau must be positive");
    }
    if (hi < opt.min_span_factor * lo)
      throw InsufficientSamples("estimate_support: tau grid span too narrow");
  };
  check_grid(samples);
  std::sort(samples.begin(), samples.end(),
            [](const IndicatorSample& a, const IndicatorSample& b) { return a.tau < b.tau; });
  while ((int)samples.size() > opt.min_samples &&
         samples[samples.size() - 2].tau >= opt.min_span_factor * samples.front().tau) {
    std::vector<IndicatorSample> head(samples.begin(), samples.end() - 1);
    const detail::LogFit gate = detail::fit_log_ridge(head, opt.trim_depth, opt.min_samples);
    const IndicatorSample& top = samples.back();
    const double excess =
        top.log_abs - (gate.a * top.tau + gate.b * std::log(top.tau) + gate.c);
    if (excess <= opt.tail_excess) break;
    samples.pop_back();
  }
  const detail::LogFit fit = detail::fit_log_ridge(samples, opt.trim_depth, opt.min_samples);
  SupportEstimate out;
  out.h = fit.a + t;
  out.slope_b = fit.b;
  out.residual = fit.rms;
  out.used_samples = (int)samples.size();
  out.regular_hint =
      std::abs(fit.b - expected_b) < opt.b_window && fit.rms <= opt.residual_threshold;
  return out;
}

struct SweepConfig {
  int n_directions = 72;
  std::vector<double> taus;  // evaluation grid, ascending
  double t = 0.0;            // shift used while sampling
  FitOptions fit;
};

// Support estimates over equispaced directions. Every direction gets an
// estimate: irregular (edge-facing) directions change the power law but not
// the exponential rate, so their h remains valid and only the hint flips.
inline std::vector<SupportEstimate> sweep(const CauchyData& data, const SweepConfig& cfg,
                                          int threads = 1) {
  if (cfg.n_directions < 3)
    throw InsufficientDirections("sweep: need at least 3 directions");
  if (cfg.taus.size() < 4) throw InsufficientSamples("sweep: tau grid too small");
  const double expected_b = expected_log_slope(data.meta.kind);
  std::vector<SupportEstimate> out((std::size_t)cfg.n_directions);
  detail::run_chunked((std::size_t)cfg.n_directions, threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t j = lo; j < hi; ++j) {
      const double angle = 2.0 * kPi * (double)j / cfg.n_directions;
      const Vec2 omega = unit_vector(angle);
      std::vector<IndicatorSample> samples;
      samples.reserve(cfg.taus.size());
      for (double tau : cfg.taus)
        samples.push_back(indicator_boundary(data, omega, tau, cfg.t));
      SupportEstimate est = estimate_support(std::move(samples), cfg.t, expected_b, cfg.fit);
      est.omega_angle = angle;
      est.omega = omega;
      out[j] = est;
    }
  });
  return out;
}

struct HullResult {
  std::vector<Vec2> hull;
  std::vector<SupportEstimate> estimates;
};

// Intersect the estimated supporting half-planes {x . omega <= h}. The clip
// box is the measurement curve's bounding box inflated by 10%: the support
// lies inside the curve, so this cannot cut the true intersection.
inline HullResult enclose(const CauchyData& data, const SweepConfig& cfg, int threads = 1) {
  HullResult out;
  out.estimates = sweep(data, cfg, threads);
  std::vector<HalfPlane> planes;
  planes.reserve(out.estimates.size());
  for (const SupportEstimate& e : out.estimates) planes.push_back({e.omega, e.h});
  Vec2 lo{1e300, 1e300}, hi{-1e300, -1e300};
  for (const BoundaryNode& bn : data.nodes) {
    lo.x1 = std::min(lo.x1, bn.pos.x1);
    lo.x2 = std::min(lo.x2, bn.pos.x2);
    hi.x1 = std::max(hi.x1, bn.pos.x1);
    hi.x2 = std::max(hi.x2, bn.pos.x2);
  }
  const Vec2 pad = (hi - lo) * 0.10 + Vec2{1e-6, 1e-6};
  out.hull = halfplane_hull(planes, lo - pad, hi + pad);
  return out;
}

enum class SideVerdict { Inside, Outside, Inconclusive };

struct SideTestResult {
  SideVerdict verdict = SideVerdict::Inconclusive;
  double slope = 0.0;  // fitted exponential rate of the partial indicator
  int used_samples = 0;
  std::vector<double> trace;  // |tau^2 I_partial| per tau, for inspection
};

// Which side of the line x . omega = t does the support reach? The partial
// indicator tau^2 I_partial(tau, t) grows exponentially when the supporting
// corner lies beyond t and decays when the support stays below it. The
// verdict reads the fitted exponential rate (the a of a tau + b log tau + c,
// so the tau^2 scaling and the corner power law land in b, not in the rate)
// with a +-0.02 dead band; raw one-point magnitude thresholds are not robust
// over practical tau spans, the rate is.
inline SideTestResult side_test(const CauchyData& data, Vec2 omega, double t, double eps,
                                const std::vector<double>& taus) {
  if (taus.size() < 4) throw InsufficientSamples("side_test: tau grid too small");
  SideTestResult out;
  std::vector<IndicatorSample> samples;
  samples.reserve(taus.size());
  out.trace.reserve(taus.size());
  for (double tau : taus) {
    const Complex p = indicator_partial(data, omega, tau, t, eps);
    const double mag = std::abs(p);
    out.trace.push_back(mag);
    if (mag == 0.0) continue;
    IndicatorSample s;
    s.tau = tau;
    s.t = t;
    s.log_abs = std::log(mag);
    s.phase = std::arg(p);
    s.zero = false;
    samples.push_back(s);
  }
  out.used_samples = (int)samples.size();
  if ((int)samples.size() < 4) return out;  // inconclusive
  const detail::LogFit fit = detail::fit_log_envelope(samples);
  out.slope = fit.a;
  if (fit.a > 0.02)
    out.verdict = SideVerdict::Inside;
  else if (fit.a < -0.02)
    out.verdict = SideVerdict::Outside;
  return out;
}

}  // namespace enclosure
