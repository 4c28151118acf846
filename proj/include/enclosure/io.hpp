#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "enclosure/core.hpp"
#include "enclosure/errors.hpp"
#include "enclosure/forward.hpp"
#include "enclosure/probe.hpp"
#include "enclosure/reconstruct.hpp"

namespace enclosure {

using Json = nlohmann::json;

// Shortest round-trip decimal form; identical bytes for identical doubles.
inline std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline Json vec_to_json(Vec2 v) { return Json::array({v.x1, v.x2}); }

inline Vec2 vec_from_json(const Json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ConfigInvalid(std::string(what) + ": expected a [x1, x2] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline Json complex_to_json(Complex c) { return Json::array({c.real(), c.imag()}); }

inline Complex complex_from_json(const Json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ConfigInvalid(std::string(what) + ": expected a [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline Json polygon_to_json(const std::vector<Vec2>& poly) {
  Json out = Json::array();
  for (const Vec2& v : poly) out.push_back(vec_to_json(v));
  return out;
}

inline std::vector<Vec2> polygon_from_json(const Json& j, const char* what) {
  if (!j.is_array()) throw ConfigInvalid(std::string(what) + ": expected an array of points");
  std::vector<Vec2> out;
  out.reserve(j.size());
  for (const Json& p : j) out.push_back(vec_from_json(p, what));
  return out;
}

namespace detail {

inline double require_number_field(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number())
    throw ConfigInvalid(std::string("missing numeric field '") + key + "'");
  return j[key].get<double>();
}

}  // namespace detail

inline constexpr const char* kCauchyFormat = "cauchy-data/1";
inline constexpr const char* kHullFormat = "hull-result/1";
inline constexpr const char* kSideFormat = "side-test/1";
inline constexpr const char* kDemoFormat = "disk-demo/1";

inline Json cauchy_to_json(const CauchyData& data) {
  Json j;
  j["format"] = kCauchyFormat;
  j["k"] = data.k;
  Json meta;
  meta["kind"] = data.meta.kind;
  meta["scenario"] = data.meta.scenario;
  meta["oversample"] = data.meta.oversample;
  meta["noise"] = Json{{"level", data.meta.noise.level},
                       {"seed", data.meta.noise.seed},
                       {"applied", data.meta.noise.applied}};
  j["meta"] = meta;
  Json nodes = Json::array();
  for (const BoundaryNode& bn : data.nodes) {
    nodes.push_back(Json{{"pos", vec_to_json(bn.pos)},
                         {"normal", vec_to_json(bn.normal)},
                         {"weight", bn.weight},
                         {"u", complex_to_json(bn.u)},
                         {"dnu", complex_to_json(bn.dnu)}});
  }
  j["nodes"] = std::move(nodes);
  return j;
}

inline CauchyData cauchy_from_json(const Json& j) {
  if (!j.is_object() || j.value("format", std::string()) != kCauchyFormat)
    throw ConfigInvalid("cauchy data: missing or unknown format tag");
  CauchyData data;
  if (!j.contains("k") || !j["k"].is_number())
    throw ConfigInvalid("cauchy data: missing wavenumber");
  data.k = j["k"].get<double>();
  if (j.contains("meta")) {
    const Json& m = j["meta"];
    data.meta.kind = m.value("kind", std::string("monopole"));
    data.meta.scenario = m.value("scenario", std::string());
    data.meta.oversample = m.value("oversample", 1.5);
    if (m.contains("noise")) {
      const Json& nz = m["noise"];
      data.meta.noise.level = nz.value("level", 0.0);
      data.meta.noise.seed = nz.value("seed", (std::uint64_t)0);
      data.meta.noise.applied = nz.value("applied", false);
    }
  }
  if (!j.contains("nodes") || !j["nodes"].is_array())
    throw ConfigInvalid("cauchy data: missing nodes array");
  for (const Json& n : j["nodes"]) {
    BoundaryNode bn;
    bn.pos = vec_from_json(n.at("pos"), "cauchy node pos");
    bn.normal = vec_from_json(n.at("normal"), "cauchy node normal");
    if (!n.contains("weight") || !n["weight"].is_number())
      throw ConfigInvalid("cauchy data: node missing weight");
    bn.weight = n["weight"].get<double>();
    bn.u = complex_from_json(n.at("u"), "cauchy node u");
    bn.dnu = complex_from_json(n.at("dnu"), "cauchy node dnu");
    data.nodes.push_back(bn);
  }
  return data;
}

inline Json estimate_to_json(const SupportEstimate& e) {
  return Json{{"omega_deg", e.omega_angle * 180.0 / kPi},
              {"h", e.h},
              {"slope_b", e.slope_b},
              {"residual", e.residual},
              {"regular_hint", e.regular_hint},
              {"used_samples", e.used_samples}};
}

inline Json hull_to_json(const HullResult& r, double hausdorff_vs_truth) {
  Json j;
  j["format"] = kHullFormat;
  j["hull"] = polygon_to_json(r.hull);
  Json est = Json::array();
  for (const SupportEstimate& e : r.estimates) est.push_back(estimate_to_json(e));
  j["estimates"] = std::move(est);
  if (std::isfinite(hausdorff_vs_truth)) j["hausdorff_vs_truth"] = hausdorff_vs_truth;
  return j;
}

struct StoredHull {
  HullResult result;
  double hausdorff_vs_truth = std::numeric_limits<double>::quiet_NaN();
};

inline StoredHull hull_from_json(const Json& j) {
  if (!j.is_object() || j.value("format", std::string()) != kHullFormat)
    throw ConfigInvalid("hull result: missing or unknown format tag");
  StoredHull out;
  if (!j.contains("hull")) throw ConfigInvalid("hull result: missing hull vertices");
  out.result.hull = polygon_from_json(j["hull"], "hull vertices");
  if (j.contains("estimates")) {
    for (const Json& e : j["estimates"]) {
      SupportEstimate se;
      se.omega_angle = detail::require_number_field(e, "omega_deg") * kPi / 180.0;
      se.omega = {std::cos(se.omega_angle), std::sin(se.omega_angle)};
      se.h = detail::require_number_field(e, "h");
      se.slope_b = e.value("slope_b", 0.0);
      se.residual = e.value("residual", 0.0);
      se.regular_hint = e.value("regular_hint", false);
      se.used_samples = e.value("used_samples", 0);
      out.result.estimates.push_back(se);
    }
  }
  if (j.contains("hausdorff_vs_truth") && j["hausdorff_vs_truth"].is_number())
    out.hausdorff_vs_truth = j["hausdorff_vs_truth"].get<double>();
  return out;
}

// Per-direction estimate table; regular_hint flattened to 0/1 for plotting.
inline std::string estimates_to_csv(const std::vector<SupportEstimate>& estimates) {
  std::string out = "omega_deg,h,slope_b,residual,regular_hint\n";
  for (const SupportEstimate& e : estimates) {
    out += format_double(e.omega_angle * 180.0 / kPi);
    out += ',';
    out += format_double(e.h);
    out += ',';
    out += format_double(e.slope_b);
    out += ',';
    out += format_double(e.residual);
    out += ',';
    out += e.regular_hint ? '1' : '0';
    out += '\n';
  }
  return out;
}

// One CSV row per indicator evaluation; stable column order and shortest
// round-trip values keep repeated runs byte-identical.
struct IndicatorRow {
  double omega_deg;
  double tau;
  double t;
  double log_abs;
  double phase;
};

inline std::string indicators_to_csv(const std::vector<IndicatorRow>& rows) {
  std::string out = "omega_deg,tau,t,log_abs,phase\n";
  for (const IndicatorRow& r : rows) {
    out += format_double(r.omega_deg);
    out += ',';
    out += format_double(r.tau);
    out += ',';
    out += format_double(r.t);
    out += ',';
    out += format_double(r.log_abs);
    out += ',';
    out += format_double(r.phase);
    out += '\n';
  }
  return out;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw MissingInput("cannot open for writing: " + path);
  f << content;
  if (!f) throw MissingInput("write failed: " + path);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw MissingInput("cannot open: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline Json parse_json_file(const std::string& path) {
  const std::string text = read_text_file(path);
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ConfigInvalid("invalid JSON: " + path);
  return j;
}

inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace enclosure
