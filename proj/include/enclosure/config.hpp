#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "enclosure/errors.hpp"
#include "enclosure/forward.hpp"
#include "enclosure/ibvp.hpp"
#include "enclosure/io.hpp"
#include "enclosure/reconstruct.hpp"

namespace enclosure {

struct ScenarioConfig {
  std::string name;
  double k = 1.0;

  bool has_source = false;
  SourceSpec source;

  OmegaShape curve;
  double oversample = 1.5;
  int min_nodes = 64;
  double clearance = 1e-6;
  InteriorRule interior;

  int directions = 72;
  std::vector<double> taus;
  double t = 0.0;
  FitOptions fit;

  double noise_level = 0.0;
  std::uint64_t noise_seed = 0;

  bool has_side_test = false;
  double side_omega_deg = 0.0;
  double side_t = 0.0;
  double side_eps = 0.0;
  std::vector<double> side_taus;

  bool has_ibvp = false;
  Vec2 incident{1.0, 0.0};
  IbvpOptions ibvp;
  double corner_floor = 0.1;  // minimum |u| at a supporting corner for a confident estimate

  double demo_omega_deg = 0.0;  // direction used by the disk demo

  double report_hausdorff_max = 0.05;  // report pass line threshold on hausdorff_vs_truth
};

namespace detail {

inline double require_number(const Json& j, const char* key, const std::string& ctx) {
  if (!j.contains(key) || !j[key].is_number())
    throw ConfigInvalid(ctx + ": missing numeric field '" + key + "'");
  return j[key].get<double>();
}

inline std::vector<double> parse_tau_grid(const Json& j, const std::string& ctx) {
  if (j.is_array()) {
    std::vector<double> v;
    for (const Json& x : j) {
      if (!x.is_number()) throw ConfigInvalid(ctx + ": tau values must be numbers");
      v.push_back(x.get<double>());
    }
    if (v.size() < 2) throw ConfigInvalid(ctx + ": tau grid needs at least 2 values");
    for (double x : v)
      if (!(x > 0.0)) throw ConfigInvalid(ctx + ": tau values must be positive");
    return v;
  }
  if (!j.is_object()) throw ConfigInvalid(ctx + ": tau must be an array or {min,max,count}");
  const double lo = require_number(j, "min", ctx + ".tau");
  const double hi = require_number(j, "max", ctx + ".tau");
  const int count = (int)require_number(j, "count", ctx + ".tau");
  const std::string spacing = j.value("spacing", std::string("geometric"));
  if (!(lo > 0.0) || !(hi > lo)) throw ConfigInvalid(ctx + ": need 0 < min < max");
  if (count < 2) throw ConfigInvalid(ctx + ": need count >= 2");
  std::vector<double> v((std::size_t)count);
  for (int i = 0; i < count; ++i) {
    const double s = (double)i / (count - 1);
    if (spacing == "geometric")
      v[(std::size_t)i] = lo * std::pow(hi / lo, s);
    else if (spacing == "linear")
      v[(std::size_t)i] = lo + (hi - lo) * s;
    else
      throw ConfigInvalid(ctx + ": spacing must be 'geometric' or 'linear'");
  }
  return v;
}

inline SourceSpec parse_source(const Json& j) {
  SourceSpec s;
  const std::string type = j.value("type", std::string());
  if (type == "polygon") {
    if (!j.contains("vertices")) throw ConfigInvalid("source: polygon needs 'vertices'");
    s.polygon = polygon_from_json(j["vertices"], "source vertices");
    if (s.polygon.size() < 3) throw ConfigInvalid("source: polygon needs >= 3 vertices");
  } else if (type == "disk") {
    s.disk = true;
    if (!j.contains("center")) throw ConfigInvalid("source: disk needs 'center'");
    s.center = vec_from_json(j["center"], "source center");
    s.radius = require_number(j, "radius", "source");
    if (!(s.radius > 0.0)) throw ConfigInvalid("source: disk radius must be positive");
  } else {
    throw ConfigInvalid("source: type must be 'polygon' or 'disk'");
  }
  if (j.contains("rho")) {
    const Json& r = j["rho"];
    if (r.is_number()) {
      s.rho0 = r.get<double>();
    } else if (r.is_array() && r.size() == 3 && r[0].is_number() && r[1].is_number() &&
               r[2].is_number()) {
      s.rho0 = r[0].get<double>();
      s.rho1 = r[1].get<double>();
      s.rho2 = r[2].get<double>();
    } else {
      throw ConfigInvalid("source: rho must be a number or [c0, c1, c2]");
    }
  }
  const std::string kind = j.value("kind", std::string("monopole"));
  if (kind == "monopole") {
    s.kind = SourceKind::Monopole;
  } else if (kind == "dipole") {
    s.kind = SourceKind::Dipole;
    if (j.contains("axis")) s.axis = vec_from_json(j["axis"], "source axis");
    if (norm(s.axis) == 0.0) throw ConfigInvalid("source: dipole axis must be nonzero");
  } else {
    throw ConfigInvalid("source: kind must be 'monopole' or 'dipole'");
  }
  return s;
}

inline OmegaShape parse_curve(const Json& j) {
  OmegaShape c;
  const std::string type = j.value("type", std::string());
  if (type == "circle") {
    c.circle = true;
    if (j.contains("center")) c.center = vec_from_json(j["center"], "curve center");
    c.radius = require_number(j, "radius", "curve");
    if (!(c.radius > 0.0)) throw ConfigInvalid("curve: radius must be positive");
  } else if (type == "polygon") {
    c.circle = false;
    if (!j.contains("vertices")) throw ConfigInvalid("curve: polygon needs 'vertices'");
    c.vertices = polygon_from_json(j["vertices"], "curve vertices");
    if (c.vertices.size() < 3) throw ConfigInvalid("curve: polygon needs >= 3 vertices");
    if (polygon_area(c.vertices) <= 0.0)
      throw ConfigInvalid("curve: polygon must be counterclockwise");
  } else {
    throw ConfigInvalid("curve: type must be 'circle' or 'polygon'");
  }
  return c;
}

}  // namespace detail

inline ScenarioConfig parse_scenario(const Json& j) {
  if (!j.is_object()) throw ConfigInvalid("scenario: expected a JSON object");
  ScenarioConfig cfg;
  cfg.name = j.value("name", std::string("scenario"));
  cfg.k = detail::require_number(j, "k", "scenario");
  if (!(cfg.k >= 0.0)) throw ConfigInvalid("scenario: k must be >= 0");

  if (j.contains("source")) {
    cfg.has_source = true;
    cfg.source = detail::parse_source(j["source"]);
  }
  if (!j.contains("curve")) throw ConfigInvalid("scenario: missing 'curve'");
  cfg.curve = detail::parse_curve(j["curve"]);

  if (j.contains("boundary")) {
    const Json& b = j["boundary"];
    cfg.oversample = b.value("oversample", 1.5);
    cfg.min_nodes = (int)b.value("min_nodes", 64.0);
    if (!(cfg.oversample >= 1.0)) throw ConfigInvalid("boundary: oversample must be >= 1");
    if (cfg.min_nodes < 4) throw ConfigInvalid("boundary: min_nodes must be >= 4");
  }
  cfg.clearance = j.value("clearance", 1e-6);
  if (!(cfg.clearance > 0.0)) throw ConfigInvalid("scenario: clearance must be positive");

  if (j.contains("interior")) {
    const Json& it = j["interior"];
    cfg.interior.order = (int)it.value("order", 16.0);
    cfg.interior.refine = (int)it.value("refine", 3.0);
    cfg.interior.disk_nr = (int)it.value("disk_nr", 32.0);
    cfg.interior.disk_ntheta = (int)it.value("disk_ntheta", 96.0);
    if (cfg.interior.refine < 0 || cfg.interior.refine > 8)
      throw ConfigInvalid("interior: refine out of range [0, 8]");
  }

  if (!j.contains("sweep")) throw ConfigInvalid("scenario: missing 'sweep'");
  {
    const Json& s = j["sweep"];
    cfg.directions = (int)s.value("directions", 72.0);
    if (cfg.directions < 3) throw ConfigInvalid("sweep: need at least 3 directions");
    if (!s.contains("tau")) throw ConfigInvalid("sweep: missing 'tau'");
    cfg.taus = detail::parse_tau_grid(s["tau"], "sweep");
    cfg.t = s.value("t", 0.0);
  }
  if (j.contains("fit")) {
    const Json& f = j["fit"];
    cfg.fit.residual_threshold = f.value("residual_threshold", 0.05);
    cfg.fit.b_window = f.value("b_window", 0.5);
    if (!(cfg.fit.residual_threshold > 0.0))
      throw ConfigInvalid("fit: residual_threshold must be positive");
  }
  if (j.contains("noise")) {
    const Json& nz = j["noise"];
    cfg.noise_level = nz.value("level", 0.0);
    cfg.noise_seed = nz.value("seed", (std::uint64_t)0);
    if (cfg.noise_level < 0.0) throw ConfigInvalid("noise: level must be >= 0");
  }
  if (j.contains("side_test")) {
    cfg.has_side_test = true;
    const Json& st = j["side_test"];
    cfg.side_omega_deg = detail::require_number(st, "omega_deg", "side_test");
    cfg.side_t = detail::require_number(st, "t", "side_test");
    cfg.side_eps = st.value("eps", 0.2);
    if (!(cfg.side_eps >= 0.0)) throw ConfigInvalid("side_test: eps must be >= 0");
    if (!st.contains("tau")) throw ConfigInvalid("side_test: missing 'tau'");
    cfg.side_taus = detail::parse_tau_grid(st["tau"], "side_test");
  }
  if (j.contains("ibvp")) {
    cfg.has_ibvp = true;
    const Json& ib = j["ibvp"];
    if (ib.contains("incident")) cfg.incident = vec_from_json(ib["incident"], "ibvp incident");
    if (norm(cfg.incident) == 0.0) throw ConfigInvalid("ibvp: incident direction must be nonzero");
    cfg.ibvp.order = (int)ib.value("order", 6.0);
    cfg.ibvp.refine = (int)ib.value("refine", 3.0);
    cfg.ibvp.tol = ib.value("tol", 1e-10);
    cfg.ibvp.max_iter = (int)ib.value("max_iter", 50.0);
    cfg.corner_floor = ib.value("corner_floor", 0.1);
    if (!(cfg.ibvp.tol > 0.0)) throw ConfigInvalid("ibvp: tol must be positive");
    if (cfg.ibvp.max_iter < 1) throw ConfigInvalid("ibvp: max_iter must be >= 1");
    if (cfg.ibvp.refine < 0 || cfg.ibvp.refine > 6)
      throw ConfigInvalid("ibvp: refine out of range [0, 6]");
    if (!(cfg.corner_floor >= 0.0)) throw ConfigInvalid("ibvp: corner_floor must be >= 0");
  }
  if (j.contains("demo")) cfg.demo_omega_deg = j["demo"].value("omega_deg", 0.0);
  if (j.contains("report")) {
    cfg.report_hausdorff_max = j["report"].value("hausdorff_max", 0.05);
    if (!(cfg.report_hausdorff_max > 0.0))
      throw ConfigInvalid("report: hausdorff_max must be positive");
  }
  return cfg;
}

inline ScenarioConfig load_scenario(const std::string& path) {
  return parse_scenario(parse_json_file(path));
}

// Boundary node budget for a scenario: resolve the largest tau in play.
inline int scenario_boundary_nodes(const ScenarioConfig& cfg) {
  double tau_max = 0.0;
  for (double t : cfg.taus) tau_max = std::max(tau_max, t);
  for (double t : cfg.side_taus) tau_max = std::max(tau_max, t);
  const int n = min_boundary_nodes(tau_max, cfg.k, cfg.curve.perimeter(), cfg.oversample);
  return std::max(n, cfg.min_nodes);
}

}  // namespace enclosure
