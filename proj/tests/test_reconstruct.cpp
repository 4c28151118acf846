#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "enclosure/reconstruct.hpp"

using namespace enclosure;

namespace {

const std::vector<Vec2> kSquare{{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}};

std::vector<double> geometric_grid(double lo, double hi, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(lo * std::pow(hi / lo, (double)i / (n - 1)));
  return g;
}

std::vector<IndicatorSample> model_samples(const std::vector<double>& taus, double a, double b,
                                           double c, double t, double floor_log = kLogZero) {
  std::vector<IndicatorSample> out;
  for (double tau : taus) {
    IndicatorSample s;
    s.tau = tau;
    s.t = t;
    s.log_abs = std::max(a * tau + b * std::log(tau) + c - tau * t, floor_log);
    s.zero = false;
    out.push_back(s);
  }
  return out;
}

const CauchyData& square_data() {
  static const CauchyData data = [] {
    SourceSpec s;
    s.polygon = kSquare;
    InteriorRule rule;
    rule.order = 16;
    rule.refine = 3;
    OmegaShape shape;
    shape.radius = 1.0;
    const int n = min_boundary_nodes(32.0, 1.0, 2.0 * kPi, 1.5);
    return synthesize_cauchy(s, shape, 1.0, n, rule, 0.02);
  }();
  return data;
}

}  // namespace

TEST_CASE("support fit recovers an exact power-law model") {
  const auto taus = geometric_grid(2.0, 40.0, 12);
  const auto samples = model_samples(taus, 3.0, -2.0, 1.0, 0.0);
  const SupportEstimate est = estimate_support(samples, 0.0, -2.0);
  CHECK(est.h == Catch::Approx(3.0).margin(1e-9));
  CHECK(est.slope_b == Catch::Approx(-2.0).margin(1e-9));
  CHECK(est.residual <= 1e-10);
  CHECK(est.regular_hint);
  CHECK(est.used_samples == 12);
}

TEST_CASE("support estimate is invariant under the sampling shift") {
  const auto taus = geometric_grid(2.0, 40.0, 12);
  const SupportEstimate at0 =
      estimate_support(model_samples(taus, 3.0, -2.0, 1.0, 0.0), 0.0, -2.0);
  const SupportEstimate at7 =
      estimate_support(model_samples(taus, 3.0, -2.0, 1.0, 0.7), 0.7, -2.0);
  CHECK(at7.h == Catch::Approx(at0.h).margin(1e-9));
  CHECK(at7.slope_b == Catch::Approx(at0.slope_b).margin(1e-9));
}

TEST_CASE("saturated tails are trimmed from the top of the grid") {
  // Decaying indicator hits a floor (storage noise) at large tau, leaving the
  // tail ABOVE the true model; the estimator must discard exactly the clamped
  // samples and recover the true rate from the rest.
  const auto taus = geometric_grid(2.0, 80.0, 16);
  const auto samples = model_samples(taus, -0.5, -2.0, 1.0, 0.0, -30.0);
  int clamped = 0;
  for (const IndicatorSample& s : samples)
    if (s.log_abs == -30.0) ++clamped;
  REQUIRE(clamped == 3);
  const SupportEstimate est = estimate_support(samples, 0.0, -2.0);
  CHECK(est.used_samples == 16 - clamped);
  CHECK(est.h == Catch::Approx(-0.5).margin(1e-8));
  CHECK(est.slope_b == Catch::Approx(-2.0).margin(1e-6));
  CHECK(est.regular_hint);
}

TEST_CASE("interference dips below the envelope do not bias the fit") {
  // Two same-level contributions beat against each other: the magnitude is
  // the envelope times |cos| of a phase linear in sqrt(tau^2 + k^2). Samples
  // near the zeros fall many log units below the envelope; the fitted rate
  // must still track the envelope, not split the difference.
  const auto taus = geometric_grid(2.0, 32.0, 48);
  std::vector<IndicatorSample> samples;
  for (double tau : taus) {
    const double s = std::sqrt(tau * tau + 1.0);
    const double mag = std::abs(2.0 * std::cos(s * 0.3536));
    IndicatorSample x;
    x.tau = tau;
    x.t = 0.0;
    x.log_abs = 0.3536 * tau - 2.0 * std::log(tau) + std::log(std::max(mag, 1e-12));
    x.zero = false;
    samples.push_back(x);
  }
  const SupportEstimate est = estimate_support(samples, 0.0, -2.0);
  CHECK(est.h == Catch::Approx(0.3536).margin(0.03));
  CHECK_FALSE(est.regular_hint);  // dips inflate the unweighted residual
}

TEST_CASE("single-point reads of the log magnitude carry a visible bias") {
  // log|I(tau)| / tau at the largest tau misses h by (b log tau + c)/tau; the
  // three-parameter fit removes that bias. This pins why the fit exists.
  const auto taus = geometric_grid(2.0, 40.0, 12);
  const auto samples = model_samples(taus, 3.0, -2.0, 1.0, 0.0);
  const double naive = samples.back().log_abs / samples.back().tau;
  CHECK(std::abs(naive - 3.0) > 0.15);
  CHECK(std::abs(estimate_support(samples, 0.0, -2.0).h - 3.0) < 1e-9);
}

TEST_CASE("support fit guards its sample set") {
  const auto taus = geometric_grid(2.0, 40.0, 12);
  auto samples = model_samples(taus, 3.0, -2.0, 1.0, 0.0);
  samples.resize(3);
  CHECK_THROWS_AS(estimate_support(samples, 0.0, -2.0), InsufficientSamples);

  const auto narrow = model_samples(geometric_grid(10.0, 12.0, 6), 3.0, -2.0, 1.0, 0.0);
  CHECK_THROWS_AS(estimate_support(narrow, 0.0, -2.0), InsufficientSamples);

  auto with_zero = model_samples(taus, 3.0, -2.0, 1.0, 0.0);
  with_zero[5] = IndicatorSample{};
  with_zero[5].tau = taus[5];
  CHECK_THROWS_AS(estimate_support(with_zero, 0.0, -2.0), SaturatedSamples);
}

TEST_CASE("side test reads the correct side of the support line") {
  const CauchyData& data = square_data();
  const Vec2 w = unit_vector(kPi / 4.0);
  const double h = std::sqrt(2.0) / 2.0;

  // Beyond the support the signal decays like e^{-0.1 tau} but the dominant
  // contribution is the cut the window makes through the measurement curve,
  // which decays like e^{-eps tau}; the verdict only needs the sign.
  const SideTestResult outside = side_test(data, w, h + 0.1, 0.2, geometric_grid(8.0, 32.0, 10));
  CHECK(outside.verdict == SideVerdict::Outside);
  CHECK(outside.slope < -0.05);
  CHECK(outside.slope > -0.35);

  // Inside, growth e^{+0.1 tau} dominates the window cut once tau e^{-0.3 tau}
  // terms die off, so the grid starts above that crossover.
  const SideTestResult inside = side_test(data, w, h - 0.1, 0.2, geometric_grid(12.0, 48.0, 10));
  CHECK(inside.verdict == SideVerdict::Inside);
  CHECK(inside.slope == Catch::Approx(0.1).margin(0.06));

  // A window that never reaches any boundary node yields no usable samples.
  const SideTestResult vacuous = side_test(data, w, 5.0, 0.2, geometric_grid(8.0, 32.0, 10));
  CHECK(vacuous.verdict == SideVerdict::Inconclusive);
  CHECK(vacuous.used_samples == 0);
  CHECK(vacuous.trace.size() == 10);

  CHECK_THROWS_AS(side_test(data, w, h, 0.2, {8.0, 16.0, 32.0}), InsufficientSamples);
}

TEST_CASE("sweep and enclosure recover the square hull") {
  // 24 directions include the four edge normals, where two corners sit at the
  // same level and the indicator magnitude oscillates; the tau grid reaches
  // low enough to anchor the fit and high enough to cover several beats.
  const CauchyData& data = square_data();
  SweepConfig cfg;
  cfg.n_directions = 24;
  cfg.taus = geometric_grid(2.0, 40.0, 48);
  HullResult res = enclose(data, cfg);
  REQUIRE(res.estimates.size() == 24);
  for (const SupportEstimate& e : res.estimates) {
    const double truth = support_function(kSquare, e.omega);
    CAPTURE(e.omega_angle);
    CHECK(std::abs(e.h - truth) <= 0.02);
  }
  CHECK(hausdorff_distance(res.hull, kSquare) <= 0.02);

  SweepConfig bad = cfg;
  bad.n_directions = 2;
  CHECK_THROWS_AS(sweep(data, bad), InsufficientDirections);
  SweepConfig short_grid = cfg;
  short_grid.taus = {4.0, 8.0, 16.0};
  CHECK_THROWS_AS(sweep(data, short_grid), InsufficientSamples);
}

TEST_CASE("sweep is equivariant under rotating the source") {
  // Rotating the source by one direction step permutes the estimates; the
  // support values agree to quadrature accuracy direction by direction.
  const double step = 2.0 * kPi / 12.0;
  SourceSpec rot;
  for (const Vec2& v : kSquare)
    rot.polygon.push_back({v.x1 * std::cos(step) - v.x2 * std::sin(step),
                           v.x1 * std::sin(step) + v.x2 * std::cos(step)});
  InteriorRule rule;
  rule.order = 16;
  rule.refine = 3;
  OmegaShape shape;
  shape.radius = 1.0;
  const int n = min_boundary_nodes(16.0, 1.0, 2.0 * kPi, 1.5);
  const CauchyData rot_data = synthesize_cauchy(rot, shape, 1.0, n, rule, 0.02);
  SourceSpec orig;
  orig.polygon = kSquare;
  const CauchyData orig_data = synthesize_cauchy(orig, shape, 1.0, n, rule, 0.02);

  SweepConfig cfg;
  cfg.n_directions = 12;
  cfg.taus = geometric_grid(4.0, 16.0, 8);
  const auto est_rot = sweep(rot_data, cfg);
  const auto est_orig = sweep(orig_data, cfg);
  for (int j = 0; j < 12; ++j) {
    CAPTURE(j);
    CHECK(est_rot[(j + 1) % 12].h == Catch::Approx(est_orig[j].h).margin(1e-6));
  }
}

TEST_CASE("domain-path samples recover the support of an offset square") {
  // Square [0,1]^2 probed at 45 degrees: the supporting corner (1,1) projects
  // to sqrt(2). Samples come straight from the volume integral.
  SourceSpec s;
  s.polygon = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
  const Vec2 w = unit_vector(kPi / 4.0);
  std::vector<IndicatorSample> samples;
  for (double tau : geometric_grid(10.0, 60.0, 12))
    samples.push_back(indicator_domain(s, 1.0, w, tau, 0.0));
  const SupportEstimate est = estimate_support(samples, 0.0, -2.0);
  CHECK(est.h == Catch::Approx(std::sqrt(2.0)).margin(1e-2));
  CHECK(est.regular_hint);
}

TEST_CASE("smooth sources collapse the enclosure to a point") {
  // Every direction's fitted rate lands on the projection of the disk center,
  // so the half-planes meet near one point: either the intersection empties
  // out or a sliver of negligible size survives. Both mean "no hull".
  SourceSpec s;
  s.disk = true;
  s.center = {0.2, -0.1};
  s.radius = 0.3;
  InteriorRule rule;
  rule.disk_nr = 48;
  rule.disk_ntheta = 128;
  OmegaShape shape;
  shape.radius = 1.0;
  const int n = min_boundary_nodes(16.0, 1.0, 2.0 * kPi, 1.5);
  const CauchyData data = synthesize_cauchy(s, shape, 1.0, n, rule, 0.02);
  SweepConfig cfg;
  cfg.n_directions = 16;
  cfg.taus = geometric_grid(4.0, 16.0, 8);

  const auto estimates = sweep(data, cfg);
  for (const SupportEstimate& e : estimates) {
    CHECK(std::abs(e.h - dot(s.center, e.omega)) <= 1e-3);
    CHECK_FALSE(e.regular_hint);  // rate coefficient sits near 0, not -2
  }
  try {
    const HullResult res = enclose(data, cfg);
    double diam = 0.0;
    for (const Vec2& a : res.hull)
      for (const Vec2& b : res.hull) diam = std::max(diam, norm(a - b));
    CHECK(diam <= 1e-2);
  } catch (const EmptyIntersection&) {
    SUCCEED("intersection emptied out");
  }
}
