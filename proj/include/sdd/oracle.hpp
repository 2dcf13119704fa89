/**
 * @file oracle.hpp
 * @brief Exact solution families and the residual checker.
 *
 * Every closed form in this module has the shape
 *
 *     x(t) = a + b t  -/+  c (t - tau)_+^p,      p > 1,
 *
 * a red line with an optional Hoelder-type departure at t = tau (minus for
 * the yellow family, plus for the blue one). The derivative is exact.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sdd/compensated.hpp"
#include "sdd/error.hpp"
#include "sdd/model.hpp"

namespace sdd {

enum class Color { Red, Yellow, Blue };

[[nodiscard]] inline const char* to_string(Color c) noexcept {
  switch (c) {
    case Color::Red: return "red";
    case Color::Yellow: return "yellow";
    case Color::Blue: return "blue";
  }
  return "unknown";
}

[[nodiscard]] inline Color color_from_string(const std::string& s) {
  if (s == "red") return Color::Red;
  if (s == "yellow") return Color::Yellow;
  if (s == "blue") return Color::Blue;
  throw Error(ErrorKind::Parameter, "unknown color '" + s + "'");
}

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

/// Horizon used to sample windows that are unbounded above.
inline constexpr double kDefaultHorizon = 2.0;

struct Window {
  double lo = 0.0;
  double hi = kUnbounded;

  [[nodiscard]] bool bounded() const noexcept { return std::isfinite(hi); }
  [[nodiscard]] bool contains(double t) const noexcept { return t >= lo && t <= hi; }
  [[nodiscard]] Window clamped(double horizon) const noexcept { return {lo, std::min(hi, horizon)}; }
};

struct ColorSpan {
  Color color;
  double t_start;
  double t_end;
};

struct ClosedFormSolution {
  std::string label;
  Color family = Color::Red;
  double tau = 0.0;
  double intercept = 0.0;
  double slope = 0.0;
  double coeff = 0.0;
  double exponent = 2.0;
  Window window;
  std::map<std::string, double> params;

  [[nodiscard]] double branch_sign() const noexcept {
    switch (family) {
      case Color::Yellow: return -1.0;
      case Color::Blue: return 1.0;
      case Color::Red: return 0.0;
    }
    return 0.0;
  }

  [[nodiscard]] Compensated red_line(double t) const {
    return Compensated(intercept) + detail::two_prod(slope, t);
  }

  [[nodiscard]] Compensated value(double t) const {
    const Compensated base = red_line(t);
    const double u = t - tau;
    if (family == Color::Red || u <= 0.0) return base;
    return base + Compensated(branch_sign() * coeff * std::pow(u, exponent));
  }

  /// Right derivative; the branch term has zero slope at tau since p > 1.
  [[nodiscard]] double derivative(double t) const {
    const double u = t - tau;
    if (family == Color::Red || u <= 0.0) return slope;
    return slope + branch_sign() * coeff * exponent * std::pow(u, exponent - 1.0);
  }

  /// Color runs the solution is built from, restricted to [window.lo, t_hi].
  [[nodiscard]] std::vector<ColorSpan> declared_colors(double t_hi) const {
    std::vector<ColorSpan> out;
    const double lo = window.lo;
    if (family == Color::Red) {
      out.push_back({Color::Red, lo, t_hi});
      return out;
    }
    if (tau > lo) out.push_back({Color::Red, lo, std::min(tau, t_hi)});
    if (t_hi > tau) out.push_back({family, std::max(tau, lo), t_hi});
    return out;
  }
};

// ---------------------------------------------------------------------------
// Catalogue of exact solutions
// ---------------------------------------------------------------------------

/// y' = -2 y(t - y(t)) + 5 with phi = |4 + t|^(1/2) + 2: the red line and one yellow solution.
[[nodiscard]] inline std::vector<ClosedFormSolution> driver_solutions() {
  ClosedFormSolution red{"y^r", Color::Red, 0.0, 4.0, 1.0, 0.0, 2.0, Window{0.0, kUnbounded}, {}};
  ClosedFormSolution yellow{"y^y", Color::Yellow, 0.0, 4.0, 1.0, 1.0, 2.0, Window{0.0, 2.0}, {}};
  return {red, yellow};
}

/// Three solutions of x' = x(t - |x|)/(alpha - 1) + 1 with the two-sided power phi.
[[nodiscard]] inline std::vector<ClosedFormSolution> example2_solutions(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorKind::Parameter, "alpha = " + detail::fmt_num(alpha) + " not in (0, 1)");
  }
  const double p = 1.0 / (1.0 - alpha);
  const std::map<std::string, double> params{{"alpha", alpha}};
  // s(t) = -1 -/+ t^p stays inside the power pieces of phi while t^p <= 1.
  ClosedFormSolution red{"x^r", Color::Red, 0.0, 1.0, 1.0, 0.0, p, Window{0.0, kUnbounded}, params};
  ClosedFormSolution yellow{"x^y", Color::Yellow, 0.0, 1.0, 1.0, 1.0, p, Window{0.0, 1.0}, params};
  ClosedFormSolution blue{"x^b", Color::Blue, 0.0, 1.0, 1.0, 1.0, p, Window{0.0, 1.0}, params};
  return {red, yellow, blue};
}

/// Parameters of the key example  x' = -x(t - |x|)  with a two-sided Hoelder phi at -1.
struct KeyParams {
  double A = 1.0;
  double B = 1.0;
  double alpha = 0.5;
  double beta = 0.5;
  double delta = 0.5;
  double h = 2.0;

  void check() const {
    auto open_unit = [](double v) { return v > 0.0 && v < 1.0; };
    if (!(A > 0.0) || !(B > 0.0)) throw Error(ErrorKind::Parameter, "A and B must be positive");
    if (!open_unit(alpha) || !open_unit(beta)) throw Error(ErrorKind::Parameter, "alpha and beta must lie in (0, 1)");
    if (!open_unit(delta)) throw Error(ErrorKind::Parameter, "delta must lie in (0, 1)");
    if (!(h > 1.0)) throw Error(ErrorKind::Parameter, "h must exceed 1 so that the anchor -1 is interior");
  }

  /// C = (A (1 - alpha))^(1 / (1 - alpha)).
  [[nodiscard]] double yellow_coeff() const { return std::pow(A * (1.0 - alpha), 1.0 / (1.0 - alpha)); }
  /// D = (B (1 - beta))^(1 / (1 - beta)).
  [[nodiscard]] double blue_coeff() const { return std::pow(B * (1.0 - beta), 1.0 / (1.0 - beta)); }
  [[nodiscard]] double yellow_exponent() const { return 1.0 / (1.0 - alpha); }
  [[nodiscard]] double blue_exponent() const { return 1.0 / (1.0 - beta); }
};

/// Validity window of a key-example family started at tau.
///
/// Yellow keeps s(t) = -1 + C (t - tau)^p inside (-1, -delta]; blue keeps
/// s(t) = -1 - D (t - tau)^q inside [-h, -1). Red never leaves s = -1.
[[nodiscard]] inline Window family_window(const KeyParams& kp, Color family, double tau) {
  kp.check();
  if (!(tau >= 0.0)) throw Error(ErrorKind::Parameter, "tau must be non-negative");
  switch (family) {
    case Color::Red: return {0.0, kUnbounded};
    case Color::Yellow: return {0.0, tau + std::pow((1.0 - kp.delta) / kp.yellow_coeff(), 1.0 - kp.alpha)};
    case Color::Blue: return {0.0, tau + std::pow((kp.h - 1.0) / kp.blue_coeff(), 1.0 - kp.beta)};
  }
  return {};
}

[[nodiscard]] inline ClosedFormSolution key_family(const KeyParams& kp, Color family, double tau) {
  const Window w = family_window(kp, family, tau);
  std::map<std::string, double> params{{"A", kp.A}, {"B", kp.B}, {"alpha", kp.alpha}, {"beta", kp.beta},
                                       {"delta", kp.delta}, {"h", kp.h}, {"tau", tau}};
  ClosedFormSolution sol;
  sol.family = family;
  sol.tau = family == Color::Red ? 0.0 : tau;
  sol.intercept = 1.0;
  sol.slope = 1.0;
  sol.window = w;
  switch (family) {
    case Color::Red:
      sol.label = "x^r";
      sol.coeff = 0.0;
      sol.exponent = 2.0;
      break;
    case Color::Yellow:
      sol.label = "x^tau";
      sol.coeff = kp.yellow_coeff();
      sol.exponent = kp.yellow_exponent();
      params["C"] = sol.coeff;
      break;
    case Color::Blue:
      sol.label = "y^tau";
      sol.coeff = kp.blue_coeff();
      sol.exponent = kp.blue_exponent();
      params["D"] = sol.coeff;
      break;
  }
  sol.params = std::move(params);
  return sol;
}

// ---------------------------------------------------------------------------
// Residual
// ---------------------------------------------------------------------------

/// x'(t) - F(x(t), x(s(t))) for a candidate; history comes from phi for s <= 0
/// and from the candidate itself for s > 0.
[[nodiscard]] inline double residual(const SddProblem& p, const ClosedFormSolution& candidate, double t) {
  if (!candidate.window.contains(t)) {
    throw Error(ErrorKind::Domain, "t = " + detail::fmt_num(t) + " outside the window of " + candidate.label);
  }
  const Compensated x = candidate.value(t);
  const Compensated s = p.delay.delayed_argument(Compensated(t), x);
  if (s < Compensated(-p.h())) {
    throw Error(ErrorKind::Domain, "delayed argument " + detail::fmt_num(s.value()) + " below -h = " + detail::fmt_num(-p.h()));
  }
  double delayed;
  if (s <= Compensated(0.0)) {
    delayed = p.phi(s);
  } else {
    delayed = candidate.value(s.value()).value();
  }
  return candidate.derivative(t) - p.rhs_value(x.value(), delayed);
}

/// Equispaced sample times over [lo, hi], both ends included.
[[nodiscard]] inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out;
  if (n == 0) return out;
  if (n == 1) return {lo};
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.push_back(k + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1));
  }
  return out;
}

/// Largest |residual| over `points` equispaced times of the window (clamped to `horizon`).
[[nodiscard]] inline double max_residual(const SddProblem& p, const ClosedFormSolution& candidate,
                                         std::size_t points = 100, double horizon = kDefaultHorizon) {
  const Window w = candidate.window.bounded() ? candidate.window : candidate.window.clamped(horizon);
  double worst = 0.0;
  for (double t : linspace(w.lo, w.hi, points)) worst = std::max(worst, std::fabs(residual(p, candidate, t)));
  return worst;
}

}  // namespace sdd
