#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "enclosure/config.hpp"
#include "enclosure/errors.hpp"
#include "enclosure/forward.hpp"
#include "enclosure/ibvp.hpp"
#include "enclosure/io.hpp"
#include "enclosure/probe.hpp"
#include "enclosure/reconstruct.hpp"

namespace enclosure {

struct RunOptions {
  std::string config_path;
  std::string data_path;  // input produced by an earlier command
  std::string out_dir;    // directory receiving this command's artifacts
  int threads = 1;
  bool has_seed = false;
  std::uint64_t seed = 0;
};

namespace detail {

inline void check_wavenumber(const ScenarioConfig& cfg, const CauchyData& data) {
  if (std::abs(cfg.k - data.k) > 1e-12 * std::max(1.0, std::abs(cfg.k)))
    throw WavenumberMismatch("config k = " + format_double(cfg.k) +
                             " but data carries k = " + format_double(data.k));
}

inline CauchyData load_cauchy_checked(const RunOptions& opt, const ScenarioConfig& cfg) {
  if (opt.data_path.empty()) throw MissingInput("this command needs --data");
  const CauchyData data = cauchy_from_json(parse_json_file(opt.data_path));
  check_wavenumber(cfg, data);
  return data;
}

inline std::string artifact_path(const RunOptions& opt, const char* command, const char* name) {
  if (opt.out_dir.empty())
    throw ConfigInvalid(std::string(command) + ": --out <dir> is required");
  std::filesystem::create_directories(opt.out_dir);
  return (std::filesystem::path(opt.out_dir) / name).string();
}

}  // namespace detail

inline CauchyData synthesize_from_config(const ScenarioConfig& cfg, int threads,
                                         bool has_seed_override = false,
                                         std::uint64_t seed_override = 0) {
  if (!cfg.has_source) throw ConfigInvalid("synthesize: scenario has no 'source'");
  const int n = scenario_boundary_nodes(cfg);
  CauchyData data = synthesize_cauchy(cfg.source, cfg.curve, cfg.k, n, cfg.interior,
                                      cfg.clearance, threads);
  data.meta.scenario = cfg.name;
  data.meta.oversample = cfg.oversample;
  if (cfg.noise_level > 0.0)
    add_noise(data, cfg.noise_level, has_seed_override ? seed_override : cfg.noise_seed);
  return data;
}

inline void run_synthesize(const RunOptions& opt) {
  const ScenarioConfig cfg = load_scenario(opt.config_path);
  const std::string path = detail::artifact_path(opt, "synthesize", "cauchy.json");
  const CauchyData data = synthesize_from_config(cfg, opt.threads, opt.has_seed, opt.seed);
  write_text_file(path, dump_json(cauchy_to_json(data)));
  std::printf("wrote %s: %zu nodes, kind %s\n", path.c_str(), data.nodes.size(),
              data.meta.kind.c_str());
}

inline std::vector<IndicatorRow> indicate_rows(const ScenarioConfig& cfg,
                                               const CauchyData& data) {
  std::vector<IndicatorRow> rows;
  rows.reserve((std::size_t)cfg.directions * cfg.taus.size());
  for (int j = 0; j < cfg.directions; ++j) {
    const double angle = 2.0 * kPi * j / cfg.directions;
    const Vec2 omega = unit_vector(angle);
    for (double tau : cfg.taus) {
      const IndicatorSample s = indicator_boundary(data, omega, tau, cfg.t);
      rows.push_back({angle * 180.0 / kPi, tau, cfg.t, s.log_abs, s.phase});
    }
  }
  return rows;
}

inline void run_indicate(const RunOptions& opt) {
  const ScenarioConfig cfg = load_scenario(opt.config_path);
  const std::string path = detail::artifact_path(opt, "indicate", "indicators.csv");
  const CauchyData data = detail::load_cauchy_checked(opt, cfg);
  const std::vector<IndicatorRow> rows = indicate_rows(cfg, data);
  write_text_file(path, indicators_to_csv(rows));
  std::printf("wrote %s: %zu rows\n", path.c_str(), rows.size());
}

inline double truth_hausdorff(const ScenarioConfig& cfg, const std::vector<Vec2>& hull) {
  if (!cfg.has_source || cfg.source.disk) return std::nan("");
  return hausdorff_distance(hull, convex_hull(cfg.source.polygon));
}

inline SweepConfig sweep_from_config(const ScenarioConfig& cfg) {
  SweepConfig sc;
  sc.n_directions = cfg.directions;
  sc.taus = cfg.taus;
  sc.t = cfg.t;
  sc.fit = cfg.fit;
  return sc;
}

inline void write_hull_artifacts(const RunOptions& opt, const char* command,
                                 const HullResult& hr, double hausdorff) {
  write_text_file(detail::artifact_path(opt, command, "hull.json"),
                  dump_json(hull_to_json(hr, hausdorff)));
  write_text_file(detail::artifact_path(opt, command, "estimates.csv"),
                  estimates_to_csv(hr.estimates));
}

inline void run_reconstruct(const RunOptions& opt) {
  const ScenarioConfig cfg = load_scenario(opt.config_path);
  detail::artifact_path(opt, "reconstruct", "hull.json");  // fail fast on missing --out
  const CauchyData data = detail::load_cauchy_checked(opt, cfg);
  const HullResult hr = enclose(data, sweep_from_config(cfg), opt.threads);
  const double hd = truth_hausdorff(cfg, hr.hull);
  write_hull_artifacts(opt, "reconstruct", hr, hd);
  std::printf("hull vertices: %zu over %zu directions\n", hr.hull.size(), hr.estimates.size());
  if (std::isfinite(hd))
    std::printf("hausdorff vs truth hull: %s\n", format_double(hd).c_str());
}

inline const char* verdict_name(SideVerdict v) {
  switch (v) {
    case SideVerdict::Inside: return "inside";
    case SideVerdict::Outside: return "outside";
    default: return "inconclusive";
  }
}

inline void run_side_test(const RunOptions& opt) {
  const ScenarioConfig cfg = load_scenario(opt.config_path);
  if (!cfg.has_side_test) throw ConfigInvalid("side-test: scenario has no 'side_test' block");
  const std::string path = detail::artifact_path(opt, "side-test", "side_test.csv");
  const CauchyData data = detail::load_cauchy_checked(opt, cfg);
  const Vec2 omega = unit_vector(cfg.side_omega_deg * kPi / 180.0);
  const SideTestResult r = side_test(data, omega, cfg.side_t, cfg.side_eps, cfg.side_taus);
  std::string csv = "omega_deg,t,eps,tau,indicator_abs,slope,verdict\n";
  for (std::size_t i = 0; i < cfg.side_taus.size(); ++i) {
    csv += format_double(cfg.side_omega_deg);
    csv += ',';
    csv += format_double(cfg.side_t);
    csv += ',';
    csv += format_double(cfg.side_eps);
    csv += ',';
    csv += format_double(cfg.side_taus[i]);
    csv += ',';
    csv += format_double(r.trace[i]);
    csv += ',';
    csv += format_double(r.slope);
    csv += ',';
    csv += verdict_name(r.verdict);
    csv += '\n';
  }
  write_text_file(path, csv);
  std::printf("verdict at t = %s: %s (rate %s over %d samples)\n",
              format_double(cfg.side_t).c_str(), verdict_name(r.verdict),
              format_double(r.slope).c_str(), r.used_samples);
}

inline void run_disk_demo(const RunOptions& opt) {
  const ScenarioConfig cfg = load_scenario(opt.config_path);
  if (!cfg.has_source || !cfg.source.disk)
    throw ConfigInvalid("disk-demo: scenario source must be a disk");
  if (cfg.source.rho1 != 0.0 || cfg.source.rho2 != 0.0)
    throw ConfigInvalid("disk-demo: closed form needs a constant density");
  const std::string path = detail::artifact_path(opt, "disk-demo", "disk_demo.csv");
  const CauchyData data = synthesize_from_config(cfg, opt.threads, opt.has_seed, opt.seed);
  const Vec2 omega = unit_vector(cfg.demo_omega_deg * kPi / 180.0);
  const double center_level = dot(cfg.source.center, omega);

  // Two probe levels: at the center's support the magnitude is flat in tau,
  // at the disk's support it decays at exactly the radius. Columns carry the
  // closed form, the polar-rule domain path, and the boundary-data path, plus
  // per-step decay rates of the closed form and the data.
  struct Level {
    const char* label;
    double t;
  };
  const Level levels[2] = {{"center", center_level}, {"support", center_level + cfg.source.radius}};
  std::string csv =
      "level,t,tau,log_abs_closed,log_abs_quad,log_abs_data,decay_rate_closed,decay_rate_data\n";
  double gap_quad = 0.0, gap_data = 0.0;
  for (const Level& lv : levels) {
    std::vector<IndicatorSample> meas;
    double prev_closed = 0.0, prev_data = 0.0, prev_tau = 0.0;
    for (double tau : cfg.taus) {
      const IndicatorSample c = disk_indicator_closed_form(
          cfg.source.center, cfg.source.radius, cfg.source.rho0, cfg.k, omega, tau, lv.t);
      const IndicatorSample q =
          indicator_domain(cfg.source, cfg.k, omega, tau, lv.t, cfg.interior);
      const IndicatorSample m = indicator_boundary(data, omega, tau, lv.t);
      meas.push_back(m);
      gap_quad = std::max(gap_quad, std::abs(c.log_abs - q.log_abs));
      gap_data = std::max(gap_data, std::abs(c.log_abs - m.log_abs));
      csv += lv.label;
      csv += ',';
      csv += format_double(lv.t);
      csv += ',';
      csv += format_double(tau);
      csv += ',';
      csv += format_double(c.log_abs);
      csv += ',';
      csv += format_double(q.log_abs);
      csv += ',';
      csv += format_double(m.log_abs);
      csv += ',';
      if (!meas.empty() && meas.size() > 1) {
        csv += format_double(-(c.log_abs - prev_closed) / (tau - prev_tau));
        csv += ',';
        csv += format_double(-(m.log_abs - prev_data) / (tau - prev_tau));
      } else {
        csv += ',';
      }
      csv += '\n';
      prev_closed = c.log_abs;
      prev_data = m.log_abs;
      prev_tau = tau;
    }
    const detail::LogFit fit = detail::fit_log_model(meas);
    std::printf("level %s (t = %s): data decay rate %s, log-tau slope %s\n", lv.label,
                format_double(lv.t).c_str(), format_double(-fit.a).c_str(),
                format_double(fit.b).c_str());
  }
  write_text_file(path, csv);
  std::printf("closed form vs quadrature: max log gap %s\n", format_double(gap_quad).c_str());
  std::printf("closed form vs boundary data: max log gap %s\n", format_double(gap_data).c_str());
  std::printf("disk radius: %s\n", format_double(cfg.source.radius).c_str());
}

inline void run_ibvp(const RunOptions& opt) {
  const ScenarioConfig cfg = load_scenario(opt.config_path);
  if (!cfg.has_ibvp) throw ConfigInvalid("ibvp: scenario has no 'ibvp' block");
  if (!cfg.has_source || cfg.source.disk)
    throw ConfigInvalid("ibvp: scenario needs a polygonal 'source' as the medium");
  detail::artifact_path(opt, "ibvp", "hull.json");  // fail fast on missing --out
  const IbvpSolution sol =
      solve_lippmann_schwinger(cfg.source, cfg.k, cfg.incident, cfg.ibvp, opt.threads);
  std::string conv = "iteration,step\n";
  for (std::size_t i = 0; i < sol.history.size(); ++i) {
    conv += format_double((double)(i + 1));
    conv += ',';
    conv += format_double(sol.history[i]);
    conv += '\n';
  }
  write_text_file(detail::artifact_path(opt, "ibvp", "convergence.csv"), conv);
  std::printf("fixed point: %d iterations, residual %s, contraction estimate %s\n",
              sol.iterations, format_double(sol.residual).c_str(),
              format_double(sol.contraction).c_str());

  CauchyData data = synthesize_ibvp_cauchy(sol, cfg.source, cfg.curve,
                                           scenario_boundary_nodes(cfg), cfg.clearance,
                                           opt.threads);
  data.meta.scenario = cfg.name;
  data.meta.oversample = cfg.oversample;
  write_text_file(detail::artifact_path(opt, "ibvp", "cauchy.json"),
                  dump_json(cauchy_to_json(data)));

  HullResult hr = enclose(data, sweep_from_config(cfg), opt.threads);
  // Field-size monitor: the power law at a supporting corner carries a factor
  // u(p), so a small |u(p)| voids the confidence hint for directions that
  // corner supports.
  const std::vector<Vec2> truth = convex_hull(cfg.source.polygon);
  for (const Vec2& v : truth) {
    const double mag = std::abs(nearest_node_value(sol, v));
    std::printf("corner (%s, %s): |u| = %s\n", format_double(v.x1).c_str(),
                format_double(v.x2).c_str(), format_double(mag).c_str());
  }
  for (SupportEstimate& e : hr.estimates) {
    Vec2 best = truth[0];
    for (const Vec2& v : truth)
      if (dot(v, e.omega) > dot(best, e.omega)) best = v;
    if (std::abs(nearest_node_value(sol, best)) < cfg.corner_floor) e.regular_hint = false;
  }
  const double hd = truth_hausdorff(cfg, hr.hull);
  write_hull_artifacts(opt, "ibvp", hr, hd);
  std::printf("hull vertices: %zu over %zu directions\n", hr.hull.size(), hr.estimates.size());
  if (std::isfinite(hd))
    std::printf("hausdorff vs truth hull: %s\n", format_double(hd).c_str());
}

inline void run_report(const RunOptions& opt) {
  const ScenarioConfig cfg = load_scenario(opt.config_path);
  if (opt.data_path.empty()) throw MissingInput("report: needs --data (a hull result)");
  const StoredHull stored = hull_from_json(parse_json_file(opt.data_path));
  if (stored.result.estimates.empty())
    throw MissingInput("report: hull result carries no estimates");

  const std::string kind = cfg.has_ibvp ? "ibvp"
                           : (cfg.has_source && cfg.source.kind == SourceKind::Dipole)
                               ? "dipole"
                               : "monopole";
  const double expected_b = expected_log_slope(kind);
  const bool have_truth = cfg.has_source;

  std::string csv = "omega_deg,h,slope_b,residual,regular_hint,h_truth,gap\n";
  std::printf("%10s %12s %10s %10s %8s", "omega_deg", "h", "slope_b", "residual", "regular");
  if (have_truth) std::printf(" %12s %10s", "h_truth", "gap");
  std::printf("\n");
  double mean_b = 0.0, mean_gap = 0.0, max_gap = 0.0;
  int regular_count = 0;
  for (const SupportEstimate& e : stored.result.estimates) {
    const double deg = e.omega_angle * 180.0 / kPi;
    std::printf("%10.3f %12.6f %10.4f %10.3e %8s", deg, e.h, e.slope_b, e.residual,
                e.regular_hint ? "yes" : "no");
    csv += format_double(deg);
    csv += ',';
    csv += format_double(e.h);
    csv += ',';
    csv += format_double(e.slope_b);
    csv += ',';
    csv += format_double(e.residual);
    csv += ',';
    csv += e.regular_hint ? '1' : '0';
    csv += ',';
    if (have_truth) {
      const double ht = source_support(cfg.source, e.omega);
      const double gap = std::abs(e.h - ht);
      std::printf(" %12.6f %10.3e", ht, gap);
      csv += format_double(ht);
      csv += ',';
      csv += format_double(gap);
      mean_gap += gap;
      max_gap = std::max(max_gap, gap);
    } else {
      csv += ',';
    }
    std::printf("\n");
    csv += '\n';
    mean_b += e.slope_b;
    if (e.regular_hint) ++regular_count;
  }
  const double n = (double)stored.result.estimates.size();
  mean_b /= n;
  if (have_truth) mean_gap /= n;

  std::printf("directions: %zu, regular fits: %d\n", stored.result.estimates.size(),
              regular_count);
  std::printf("mean slope_b = %s (expected %s for %s data)\n", format_double(mean_b).c_str(),
              format_double(expected_b).c_str(), kind.c_str());
  if (have_truth)
    std::printf("support gap vs truth: max %s, mean %s\n", format_double(max_gap).c_str(),
                format_double(mean_gap).c_str());
  double hd = stored.hausdorff_vs_truth;
  if (!std::isfinite(hd)) hd = truth_hausdorff(cfg, stored.result.hull);
  if (std::isfinite(hd))
    std::printf("hausdorff vs truth hull: %s\n", format_double(hd).c_str());

  const bool b_ok = std::abs(mean_b - expected_b) < cfg.fit.b_window;
  std::printf("[%s] mean slope_b within %s of %s\n", b_ok ? "PASS" : "FAIL",
              format_double(cfg.fit.b_window).c_str(), format_double(expected_b).c_str());
  if (std::isfinite(hd))
    std::printf("[%s] hull within %s of truth hull\n",
                hd < cfg.report_hausdorff_max ? "PASS" : "FAIL",
                format_double(cfg.report_hausdorff_max).c_str());

  if (!opt.out_dir.empty())
    write_text_file(detail::artifact_path(opt, "report", "report.csv"), csv);
}

}  // namespace enclosure
