/**
 * @file registry.hpp
 * @brief Named problems with parameter schemas.
 */
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sdd/error.hpp"
#include "sdd/model.hpp"
#include "sdd/oracle.hpp"

namespace sdd {

// ---------------------------------------------------------------------------
// Problem builders
// ---------------------------------------------------------------------------

/// y' = -2 y(t - y(t)) + 5,  phi(theta) = |4 + theta|^(1/2) + 2 on [-5, 0].
[[nodiscard]] inline SddProblem driver1963_problem() {
  constexpr double h = 5.0;
  InitialFunction phi({
      Segment{-h, -4.0, PowerLeft{-4.0, 2.0, -1.0, 0.5}},
      Segment{-4.0, 0.0, PowerRight{-4.0, 2.0, 1.0, 0.5}},
  });
  FullRhs rhs{[](double, double y) { return -2.0 * y + 5.0; }, true};
  return {"driver1963", DelaySpec::linear(1.0, 0.0, h), rhs, std::move(phi)};
}

/// x' = x(t - |x|) / (alpha - 1) + 1 with the two-sided power phi on [-2, 0].
[[nodiscard]] inline InitialFunction example2010_phi(double alpha) {
  return InitialFunction({
      Segment{-2.0, -1.0, PowerLeft{-1.0, 0.0, 1.0, alpha}},
      Segment{-1.0, 0.0, PowerRight{-1.0, 0.0, 1.0, alpha}},
  });
}

[[nodiscard]] inline SddProblem example2010_problem(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::Parameter, "alpha must lie in (0, 1)");
  PureDelay rhs{[alpha](double y) { return y / (alpha - 1.0) + 1.0; }};
  return {"example2010", DelaySpec::abs(2.0), rhs, example2010_phi(alpha)};
}

/// phi with a left Hoelder branch of exponent beta and a right one of exponent
/// alpha at -1, joined to phi(0) = 1 by a linear connector on [-delta, 0].
[[nodiscard]] inline InitialFunction key2026_phi(const KeyParams& kp) {
  kp.check();
  const double at_delta = -1.0 + kp.A * std::pow(1.0 - kp.delta, kp.alpha);
  const double slope = (1.0 - at_delta) / kp.delta;
  return InitialFunction({
      Segment{-kp.h, -1.0, PowerLeft{-1.0, -1.0, kp.B, kp.beta}},
      Segment{-1.0, -kp.delta, PowerRight{-1.0, -1.0, kp.A, kp.alpha}},
      Segment{-kp.delta, 0.0, Linear{slope, 1.0}},
  });
}

/// x' = -x(t - |x(t)|).
[[nodiscard]] inline SddProblem key2026_problem(const KeyParams& kp) {
  return {"key2026", DelaySpec::abs(kp.h), PureDelay{[](double y) { return -y; }}, key2026_phi(kp)};
}

/// The key example with g(x) = x^2 in place of |x|.
[[nodiscard]] inline SddProblem key2026_quadratic_problem(const KeyParams& kp) {
  return {"key2026-quadratic", DelaySpec::quadratic(kp.h), PureDelay{[](double y) { return -y; }}, key2026_phi(kp)};
}

/// x' = -x(t - |x|) with phi(theta) = 2 theta + 1 on [-2, 0].
[[nodiscard]] inline SddProblem linear_ic_problem() {
  return {"linear-ic", DelaySpec::abs(2.0), PureDelay{[](double y) { return -y; }},
          InitialFunction({Segment{-2.0, 0.0, Linear{2.0, 1.0}}})};
}

/// x' = -x(t - |x|) with phi = 1; x = 1 - t on [0, 1/2].
[[nodiscard]] inline SddProblem const_phi_problem(double h = 1.0) {
  return {"const-phi", DelaySpec::abs(h), PureDelay{[](double y) { return -y; }}, InitialFunction::constant(1.0, h)};
}

/// x' = x(t - |x|) with the example-2010 phi, so that f(phi(s0)) = 0.
[[nodiscard]] inline SddProblem zero_f_problem(double alpha) {
  return {"zero-f", DelaySpec::abs(2.0), PureDelay{[](double y) { return y; }}, example2010_phi(alpha)};
}

/// x' = -x(t - r) with phi = 1; x = 1 - t on [0, r].
[[nodiscard]] inline SddProblem const_delay_problem(double r) {
  if (!(r > 0.0)) throw Error(ErrorKind::Parameter, "constant delay must be positive");
  return {"const-delay", DelaySpec::constant(r, r), PureDelay{[](double y) { return -y; }},
          InitialFunction::constant(1.0, r)};
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

using ParamMap = std::map<std::string, double>;

struct ParamSpec {
  std::string name;
  double default_value;
  std::string description;
};

struct ProblemInstance {
  std::string key;
  ParamMap params;
  SddProblem problem;
  std::vector<ClosedFormSolution> solutions;  // tau-independent closed forms
  std::optional<KeyParams> key_params;        // present when tau-families exist
  std::optional<std::pair<double, double>> plane;  // g(x) = a x + b on the traversed range
};

struct RegistryEntry {
  std::string key;
  std::string summary;
  std::vector<ParamSpec> params;
  bool families = false;
  ProblemInstance (*build)(const ParamMap&);
};

namespace detail {

[[nodiscard]] inline KeyParams key_params_from(const ParamMap& m) {
  KeyParams kp;
  kp.A = m.at("A");
  kp.B = m.at("B");
  kp.alpha = m.at("alpha");
  kp.beta = m.at("beta");
  kp.delta = m.at("delta");
  kp.h = m.at("h");
  kp.check();
  return kp;
}

inline const std::vector<ParamSpec> kKeyParamSpecs{
    {"A", 1.0, "right Hoelder coefficient (A > 0)"},
    {"B", 1.0, "left Hoelder coefficient (B > 0)"},
    {"alpha", 0.5, "right Hoelder exponent in (0, 1)"},
    {"beta", 0.5, "left Hoelder exponent in (0, 1)"},
    {"delta", 0.5, "connector start -delta, delta in (0, 1)"},
    {"h", 2.0, "history length (> 1)"},
};

}  // namespace detail

[[nodiscard]] inline const std::vector<RegistryEntry>& registry() {
  static const std::vector<RegistryEntry> entries{
      {"driver1963", "y' = -2 y(t - y) + 5, phi = |4 + t|^(1/2) + 2", {}, false,
       [](const ParamMap& m) {
         return ProblemInstance{"driver1963", m, driver1963_problem(), driver_solutions(), std::nullopt,
                                std::make_pair(1.0, 0.0)};
       }},
      {"example2010", "x' = x(t - |x|)/(alpha - 1) + 1, two-sided power phi",
       {{"alpha", 0.5, "Hoelder exponent in (0, 1)"}}, false,
       [](const ParamMap& m) {
         const double a = m.at("alpha");
         return ProblemInstance{"example2010", m, example2010_problem(a), example2_solutions(a), std::nullopt,
                                std::make_pair(1.0, 0.0)};
       }},
      {"key2026", "x' = -x(t - |x|), two-sided Hoelder phi at s0 = -1", detail::kKeyParamSpecs, true,
       [](const ParamMap& m) {
         const KeyParams kp = detail::key_params_from(m);
         return ProblemInstance{"key2026", m, key2026_problem(kp), {key_family(kp, Color::Red, 0.0)}, kp,
                                std::make_pair(1.0, 0.0)};
       }},
      {"key2026-quadratic", "key2026 with g(x) = x^2 (no red solution)", detail::kKeyParamSpecs, false,
       [](const ParamMap& m) {
         const KeyParams kp = detail::key_params_from(m);
         return ProblemInstance{"key2026-quadratic", m, key2026_quadratic_problem(kp), {}, std::nullopt, std::nullopt};
       }},
      {"linear-ic", "x' = -x(t - |x|), phi = 2 theta + 1 (unique red solution)", {}, false,
       [](const ParamMap& m) {
         ClosedFormSolution red{"x^r", Color::Red, 0.0, 1.0, 1.0, 0.0, 2.0, Window{0.0, kUnbounded}, {}};
         return ProblemInstance{"linear-ic", m, linear_ic_problem(), {red}, std::nullopt, std::make_pair(1.0, 0.0)};
       }},
      {"const-phi", "x' = -x(t - |x|), phi = 1 (x = 1 - t on [0, 1/2])", {}, false,
       [](const ParamMap& m) {
         ClosedFormSolution hand{"x^hand", Color::Yellow, 0.0, 1.0, -1.0, 0.0, 2.0, Window{0.0, 0.5}, {}};
         return ProblemInstance{"const-phi", m, const_phi_problem(), {hand}, std::nullopt, std::make_pair(1.0, 0.0)};
       }},
      {"zero-f", "x' = x(t - |x|) with phi(s0) = 0 (no red solution)", {{"alpha", 0.5, "Hoelder exponent in (0, 1)"}},
       false,
       [](const ParamMap& m) {
         return ProblemInstance{"zero-f", m, zero_f_problem(m.at("alpha")), {}, std::nullopt, std::make_pair(1.0, 0.0)};
       }},
      {"const-delay", "x' = -x(t - r), phi = 1 (x = 1 - t on [0, r])", {{"r", 1.0, "constant delay (> 0)"}}, false,
       [](const ParamMap& m) {
         const double r = m.at("r");
         ClosedFormSolution hand{"x^hand", Color::Yellow, 0.0, 1.0, -1.0, 0.0, 2.0, Window{0.0, r}, {{"r", r}}};
         return ProblemInstance{"const-delay", m, const_delay_problem(r), {hand}, std::nullopt, std::make_pair(0.0, r)};
       }},
  };
  return entries;
}

[[nodiscard]] inline const RegistryEntry& find_entry(const std::string& key) {
  const auto& reg = registry();
  const auto it = std::find_if(reg.begin(), reg.end(), [&](const RegistryEntry& e) { return e.key == key; });
  if (it == reg.end()) throw Error(ErrorKind::Parameter, "unknown problem key '" + key + "'");
  return *it;
}

/// Builds a registered problem; unspecified parameters take their defaults.
[[nodiscard]] inline ProblemInstance make_problem(const std::string& key, const ParamMap& overrides = {}) {
  const RegistryEntry& entry = find_entry(key);
  ParamMap merged;
  for (const auto& ps : entry.params) merged[ps.name] = ps.default_value;
  for (const auto& [name, value] : overrides) {
    if (!merged.count(name)) throw Error(ErrorKind::Parameter, "problem '" + key + "' has no parameter '" + name + "'");
    merged[name] = value;
  }
  return entry.build(merged);
}

/// Closed forms of an instance: the fixed ones plus, for family problems, the
/// yellow and blue member for each tau.
[[nodiscard]] inline std::vector<ClosedFormSolution> closed_forms(const ProblemInstance& inst,
                                                                  const std::vector<double>& taus) {
  std::vector<ClosedFormSolution> out = inst.solutions;
  if (inst.key_params) {
    for (double tau : taus) {
      out.push_back(key_family(*inst.key_params, Color::Yellow, tau));
      out.push_back(key_family(*inst.key_params, Color::Blue, tau));
    }
  }
  return out;
}

}  // namespace sdd
