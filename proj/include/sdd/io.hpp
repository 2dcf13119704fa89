/**
 * @file io.hpp
 * @brief CSV and JSON serialization of trajectories, curves, reports and
 *        certificates. JSON objects keep insertion order.
 */
#pragma once

#include <charconv>
#include <cmath>
#include <map>
#include <ostream>
#include <string>
#include <system_error>
#include <vector>

#include "json.hpp"
#include "sdd/classify.hpp"
#include "sdd/error.hpp"
#include "sdd/geom.hpp"
#include "sdd/model.hpp"
#include "sdd/oracle.hpp"
#include "sdd/redcert.hpp"
#include "sdd/registry.hpp"
#include "sdd/steps.hpp"
#include "sdd/unicity.hpp"

namespace sdd::io {

using Json = nlohmann::ordered_json;

/// Shortest decimal string that round-trips to the same double.
[[nodiscard]] inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc{}) throw Error(ErrorKind::Range, "cannot format double");
  return {buf, res.ptr};
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

/// Columns t,x,xdot,s with s = t - g(x).
inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const DelaySpec& delay) {
  os << "t,x,xdot,s\n";
  for (const Node& n : traj.nodes()) {
    const double s = delay.delayed_argument(Compensated(n.t), Compensated(n.x)).value();
    os << format_double(n.t) << ',' << format_double(n.x) << ',' << format_double(n.xdot) << ',' << format_double(s)
       << '\n';
  }
}

inline void write_transformed_csv(std::ostream& os, const TransformedTrajectory& tr) {
  os << "s,t,w\n";
  for (const auto& r : tr.samples) {
    os << format_double(r.s) << ',' << format_double(r.t) << ',' << format_double(r.w) << '\n';
  }
}

inline void write_curve_csv(std::ostream& os, const Curve3D& c) {
  os << "t,s,x\n";
  for (const auto& r : c.rows) {
    os << format_double(r.t) << ',' << format_double(r.s) << ',' << format_double(r.x) << '\n';
  }
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

[[nodiscard]] inline Json number(double v) {
  if (std::isfinite(v)) return Json(v);
  return Json(format_double(v));
}

[[nodiscard]] inline Json to_json(const std::vector<ColorSegment>& segments) {
  Json arr = Json::array();
  for (const auto& s : segments) {
    arr.push_back(Json{{"t_start", s.t_start}, {"t_end", s.t_end}, {"color", to_string(s.color)}});
  }
  return arr;
}

[[nodiscard]] inline std::vector<ColorSegment> segments_from_json(const Json& arr) {
  std::vector<ColorSegment> out;
  for (const auto& j : arr) {
    out.push_back({j.at("t_start").get<double>(), j.at("t_end").get<double>(), color_from_string(j.at("color").get<std::string>())});
  }
  return out;
}

[[nodiscard]] inline Json to_json(const RedCertificate& c) {
  Json j{{"s0", c.s0},
         {"phi_s0", c.phi_s0},
         {"f_at_phi_s0", c.f_at_phi_s0},
         {"verdict", to_string(c.verdict)},
         {"side", c.side},
         {"linearity_residual", c.linearity_residual}};
  if (c.candidate) {
    j["candidate"] = Json{{"intercept", c.candidate->intercept}, {"slope", c.candidate->slope}};
  } else {
    j["candidate"] = nullptr;
  }
  return j;
}

[[nodiscard]] inline Json to_json(const RedVerification& v) {
  return Json{{"passed", v.passed}, {"max_residual", v.max_residual}, {"non_constant", v.non_constant}, {"message", v.message}};
}

[[nodiscard]] inline Json to_json(const RedUniquenessReport& r) {
  return Json{{"s0", r.s0},
              {"phi_s0", r.phi_s0},
              {"reduced_slope_at_0", r.reduced_slope_at_0},
              {"horizon", r.horizon},
              {"reduced_endpoint", r.reduced_endpoint},
              {"s_variation", r.s_variation},
              {"reduced_is_red", r.reduced_is_red},
              {"red_candidates", r.red_candidates}};
}

[[nodiscard]] inline Json to_json(const UniquenessCertificate& c) {
  return Json{{"q", c.q},           {"margin", c.margin}, {"verdict", to_string(c.verdict)},
              {"s0", c.s0},         {"phi0", c.phi0},     {"phi_s0", c.phi_s0}};
}

[[nodiscard]] inline Json to_json(const RegionCheck& r) {
  return Json{{"holds", r.holds}, {"max_value", number(r.max_value)}, {"x_lo", r.x_lo},       {"x_hi", r.x_hi},
              {"eta", r.eta},     {"samples", r.samples},             {"skipped", r.skipped}, {"scope", r.scope}};
}

[[nodiscard]] inline Json to_json(const ValidationReport& r) {
  Json arr = Json::array();
  for (const auto& v : r.violations) arr.push_back(Json{{"kind", to_string(v.kind)}, {"message", v.message}});
  return Json{{"valid", r.ok()}, {"violations", arr}};
}

[[nodiscard]] inline Json to_json(const Curve3D& c) {
  Json rows = Json::array();
  for (const auto& r : c.rows) rows.push_back(Json::array({r.t, r.s, r.x}));
  return Json{{"source", c.source}, {"problem", c.problem}, {"columns", Json::array({"t", "s", "x"})}, {"rows", rows}};
}

[[nodiscard]] inline Json to_json(const TransformedTrajectory& tr) {
  Json rows = Json::array();
  for (const auto& r : tr.samples) rows.push_back(Json::array({r.s, r.t, r.w}));
  Json j{{"direction", tr.direction}, {"columns", Json::array({"s", "t", "w"})}, {"rows", rows}};
  j["aborted"] = tr.aborted();
  if (tr.aborted()) j["abort_reason"] = tr.abort_reason;
  return j;
}

[[nodiscard]] inline Json to_json(const ClosedFormSolution& s) {
  Json params = Json::object();
  for (const auto& [k, v] : s.params) params[k] = v;
  return Json{{"label", s.label},        {"family", to_string(s.family)}, {"tau", s.tau},
              {"intercept", s.intercept}, {"slope", s.slope},             {"coeff", s.coeff},
              {"exponent", s.exponent},   {"window", Json::array({number(s.window.lo), number(s.window.hi)})},
              {"params", params}};
}

/// Flat {"name": number} document to a parameter map.
[[nodiscard]] inline ParamMap params_from_json(const Json& doc) {
  if (!doc.is_object()) throw Error(ErrorKind::Parameter, "parameter document must be a flat JSON object");
  ParamMap out;
  for (const auto& [k, v] : doc.items()) {
    if (!v.is_number()) throw Error(ErrorKind::Parameter, "parameter '" + k + "' must be a number");
    out[k] = v.get<double>();
  }
  return out;
}

[[nodiscard]] inline Json params_to_json(const ParamMap& m) {
  Json j = Json::object();
  for (const auto& [k, v] : m) j[k] = v;
  return j;
}

[[nodiscard]] inline ProblemInstance make_problem(const std::string& key, const Json& doc) {
  return sdd::make_problem(key, params_from_json(doc));
}

}  // namespace sdd::io
