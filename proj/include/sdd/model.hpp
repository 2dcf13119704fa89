/**
 * @file model.hpp
 * @brief Delays, piecewise initial functions and complete SDD Cauchy problems.
 *
 * A problem is  x'(t) = F(x(t), x(t - g(x(t))))  (full form) or
 * x'(t) = f(x(t - g(x(t))))  (pure-delay form), with x = phi on [-h, 0].
 * The state is scalar throughout.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sdd/compensated.hpp"
#include "sdd/error.hpp"

namespace sdd {

namespace detail {

[[nodiscard]] inline std::string fmt_num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Delay
// ---------------------------------------------------------------------------

enum class DelayKind { Abs, Linear, Quadratic, Custom };

[[nodiscard]] inline const char* to_string(DelayKind k) noexcept {
  switch (k) {
    case DelayKind::Abs: return "abs";
    case DelayKind::Linear: return "linear";
    case DelayKind::Quadratic: return "quadratic";
    case DelayKind::Custom: return "custom";
  }
  return "unknown";
}

/// The state-dependent delay g together with its bound h.
class DelaySpec {
 public:
  using Fn = std::function<double(double)>;

  static constexpr double kFiniteDifferenceStep = 1e-7;

  static DelaySpec abs(double h) {
    DelaySpec d(DelayKind::Abs, "abs", h);
    d.kinks_ = {0.0};
    return d;
  }

  /// g(x) = a x + b.
  static DelaySpec linear(double a, double b, double h) {
    DelaySpec d(DelayKind::Linear, "linear", h);
    d.a_ = a;
    d.b_ = b;
    return d;
  }

  /// Constant delay r, i.e. linear(0, r).
  static DelaySpec constant(double r, double h) { return linear(0.0, r, h); }

  /// g(x) = x^2.
  static DelaySpec quadratic(double h) { return DelaySpec(DelayKind::Quadratic, "quadratic", h); }

  static DelaySpec custom(std::string name, Fn g, std::optional<Fn> derivative, double h,
                          std::vector<double> kinks = {}) {
    if (!g) {
      throw Error(ErrorKind::Parameter, "custom delay '" + name + "' has no evaluator");
    }
    DelaySpec d(DelayKind::Custom, std::move(name), h);
    d.g_ = std::move(g);
    d.dg_ = std::move(derivative);
    d.kinks_ = std::move(kinks);
    std::sort(d.kinks_.begin(), d.kinks_.end());
    return d;
  }

  /// Piecewise-linear delay through the points (xs[i], gs[i]); constant beyond the ends.
  static DelaySpec table(std::vector<double> xs, std::vector<double> gs, double h) {
    if (xs.size() < 2 || xs.size() != gs.size()) {
      throw Error(ErrorKind::Parameter, "delay table needs >= 2 points of matching length");
    }
    for (std::size_t i = 1; i < xs.size(); ++i) {
      if (!(xs[i] > xs[i - 1])) {
        throw Error(ErrorKind::Parameter, "delay table abscissae must be strictly increasing");
      }
    }
    auto g = [xs, gs](double x) {
      if (x <= xs.front()) return gs.front();
      if (x >= xs.back()) return gs.back();
      const auto it = std::upper_bound(xs.begin(), xs.end(), x);
      const auto i = static_cast<std::size_t>(it - xs.begin()) - 1;
      const double w = (x - xs[i]) / (xs[i + 1] - xs[i]);
      return gs[i] + w * (gs[i + 1] - gs[i]);
    };
    auto dg = [xs, gs](double x) {
      if (x <= xs.front() || x >= xs.back()) return 0.0;
      const auto it = std::upper_bound(xs.begin(), xs.end(), x);
      const auto i = static_cast<std::size_t>(it - xs.begin()) - 1;
      return (gs[i + 1] - gs[i]) / (xs[i + 1] - xs[i]);
    };
    return custom("table", g, Fn(dg), h, xs);
  }

  [[nodiscard]] DelayKind kind() const noexcept { return kind_; }
  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] double h() const noexcept { return h_; }
  [[nodiscard]] const std::vector<double>& kinks() const noexcept { return kinks_; }

  /// (a, b) when the delay is globally g(x) = a x + b.
  [[nodiscard]] std::optional<std::pair<double, double>> linear_coefficients() const {
    if (kind_ == DelayKind::Linear) return std::make_pair(a_, b_);
    return std::nullopt;
  }

  /// g(x) without the [0, h] range check.
  [[nodiscard]] double raw(double x) const {
    switch (kind_) {
      case DelayKind::Abs: return std::fabs(x);
      case DelayKind::Linear: return a_ * x + b_;
      case DelayKind::Quadratic: return x * x;
      case DelayKind::Custom: return g_(x);
    }
    return 0.0;
  }

  /// t - g(x), carried in compensated arithmetic for the built-in kinds.
  [[nodiscard]] Compensated delayed_argument(const Compensated& t, const Compensated& x) const {
    switch (kind_) {
      case DelayKind::Abs: return t - sdd::abs(x);
      case DelayKind::Linear: return t - (x * a_ + Compensated(b_));
      case DelayKind::Quadratic: return t - x * x;
      case DelayKind::Custom: return t - Compensated(g_(x.value()));
    }
    return t;
  }

  [[nodiscard]] bool has_derivative() const noexcept { return kind_ != DelayKind::Custom || dg_.has_value(); }

  [[nodiscard]] bool at_kink(double x) const noexcept {
    return std::any_of(kinks_.begin(), kinks_.end(), [x](double k) { return x == k; });
  }

  /// Analytic g'(x); nullopt when only the evaluator is known.
  [[nodiscard]] std::optional<double> analytic_derivative(double x) const {
    switch (kind_) {
      case DelayKind::Abs: return x > 0.0 ? 1.0 : -1.0;
      case DelayKind::Linear: return a_;
      case DelayKind::Quadratic: return 2.0 * x;
      case DelayKind::Custom:
        if (dg_) return (*dg_)(x);
        return std::nullopt;
    }
    return std::nullopt;
  }

  /// Central difference with step `step`; one-sided when a kink lies inside the stencil.
  [[nodiscard]] double finite_difference(double x, double step = kFiniteDifferenceStep) const {
    const bool kink_left = std::any_of(kinks_.begin(), kinks_.end(), [&](double k) { return k < x && k >= x - step; });
    const bool kink_right = std::any_of(kinks_.begin(), kinks_.end(), [&](double k) { return k > x && k <= x + step; });
    if (kink_left && !kink_right) return (raw(x + step) - raw(x)) / step;
    if (kink_right && !kink_left) return (raw(x) - raw(x - step)) / step;
    return (raw(x + step) - raw(x - step)) / (2.0 * step);
  }

 private:
  DelaySpec(DelayKind kind, std::string name, double h) : kind_(kind), name_(std::move(name)), h_(h) {
    if (!(h > 0.0) || !std::isfinite(h)) {
      throw Error(ErrorKind::Parameter, "delay bound h must be positive and finite, got " + detail::fmt_num(h));
    }
  }

  DelayKind kind_;
  std::string name_;
  double h_;
  double a_ = 0.0;
  double b_ = 0.0;
  Fn g_;
  std::optional<Fn> dg_;
  std::vector<double> kinks_;
};

/// g(x), required to lie in [0, h].
[[nodiscard]] inline double eval_g(const DelaySpec& delay, double x) {
  const double v = delay.raw(x);
  if (!(v >= 0.0 && v <= delay.h())) {
    throw Error(ErrorKind::Range, "g(" + detail::fmt_num(x) + ") = " + detail::fmt_num(v) + " outside [0, " +
                                      detail::fmt_num(delay.h()) + "]");
  }
  return v;
}

/// g'(x): analytic when available, otherwise a central finite difference.
[[nodiscard]] inline double eval_g_prime(const DelaySpec& delay, double x) {
  if (delay.at_kink(x)) {
    throw Error(ErrorKind::NonDifferentiable, "delay '" + delay.name() + "' has a kink at x = " + detail::fmt_num(x));
  }
  if (auto d = delay.analytic_derivative(x)) return *d;
  return delay.finite_difference(x);
}

// ---------------------------------------------------------------------------
// Initial function
// ---------------------------------------------------------------------------

/// value - coeff * (anchor - theta)^exponent, for theta <= anchor.
struct PowerLeft {
  double anchor;
  double value;
  double coeff;
  double exponent;
};

/// value + coeff * (theta - anchor)^exponent, for theta >= anchor.
struct PowerRight {
  double anchor;
  double value;
  double coeff;
  double exponent;
};

struct Linear {
  double slope;
  double intercept;
};

struct Constant {
  double c;
};

/// Coefficients in ascending powers of theta.
struct Polynomial {
  std::vector<double> coeffs;
};

using Shape = std::variant<PowerLeft, PowerRight, Linear, Constant, Polynomial>;

struct Segment {
  double lo;
  double hi;
  Shape shape;

  /// Shape formula at theta; theta is not checked against [lo, hi].
  [[nodiscard]] double eval(const Compensated& theta) const {
    return std::visit(
        [&](const auto& s) -> double {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, PowerLeft>) {
            const double d = -offset(theta, s.anchor);
            if (d < 0.0) {
              throw Error(ErrorKind::Domain, "left power branch evaluated right of its anchor " + detail::fmt_num(s.anchor));
            }
            return s.value - s.coeff * std::pow(d, s.exponent);
          } else if constexpr (std::is_same_v<T, PowerRight>) {
            const double d = offset(theta, s.anchor);
            if (d < 0.0) {
              throw Error(ErrorKind::Domain, "right power branch evaluated left of its anchor " + detail::fmt_num(s.anchor));
            }
            return s.value + s.coeff * std::pow(d, s.exponent);
          } else if constexpr (std::is_same_v<T, Linear>) {
            return s.slope * theta.value() + s.intercept;
          } else if constexpr (std::is_same_v<T, Constant>) {
            return s.c;
          } else {
            const double x = theta.value();
            double acc = 0.0;
            for (auto it = s.coeffs.rbegin(); it != s.coeffs.rend(); ++it) acc = acc * x + *it;
            return acc;
          }
        },
        shape);
  }

  /// Anchor of a power shape, if any.
  [[nodiscard]] std::optional<double> anchor() const {
    if (const auto* l = std::get_if<PowerLeft>(&shape)) return l->anchor;
    if (const auto* r = std::get_if<PowerRight>(&shape)) return r->anchor;
    return std::nullopt;
  }
};

/// Ordered piecewise initial function phi on [-h, 0].
class InitialFunction {
 public:
  InitialFunction() = default;
  explicit InitialFunction(std::vector<Segment> segments) : segments_(std::move(segments)) {
    if (segments_.empty()) {
      throw Error(ErrorKind::Parameter, "initial function needs at least one segment");
    }
  }

  static InitialFunction constant(double c, double h) { return InitialFunction({Segment{-h, 0.0, Constant{c}}}); }

  [[nodiscard]] const std::vector<Segment>& segments() const noexcept { return segments_; }
  [[nodiscard]] double lower() const noexcept { return segments_.empty() ? 0.0 : segments_.front().lo; }
  [[nodiscard]] double upper() const noexcept { return segments_.empty() ? 0.0 : segments_.back().hi; }

  /// Junction points between consecutive segments.
  [[nodiscard]] std::vector<double> junctions() const {
    std::vector<double> out;
    for (std::size_t i = 1; i < segments_.size(); ++i) out.push_back(segments_[i].lo);
    return out;
  }

  /// Anchors of all power segments, sorted and deduplicated.
  [[nodiscard]] std::vector<double> anchors() const {
    std::vector<double> out;
    for (const auto& s : segments_) {
      if (auto a = s.anchor()) out.push_back(*a);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  /// Index of the segment owning theta; junctions belong to the right segment.
  [[nodiscard]] std::size_t locate(const Compensated& theta) const {
    const Compensated lo(lower());
    const Compensated hi(upper());
    if (segments_.empty() || theta < lo || theta > hi) {
      throw Error(ErrorKind::Domain, "theta = " + detail::fmt_num(theta.value()) + " outside [" +
                                         detail::fmt_num(lower()) + ", " + detail::fmt_num(upper()) + "]");
    }
    for (std::size_t i = 0; i < segments_.size(); ++i) {
      const auto& s = segments_[i];
      if (Compensated(s.lo) <= theta && theta < Compensated(s.hi)) return i;
    }
    for (std::size_t i = segments_.size(); i-- > 0;) {
      if (theta == Compensated(segments_[i].hi)) return i;
    }
    throw Error(ErrorKind::Domain, "theta = " + detail::fmt_num(theta.value()) + " falls in a coverage gap");
  }

  [[nodiscard]] double operator()(const Compensated& theta) const { return segments_[locate(theta)].eval(theta); }

 private:
  std::vector<Segment> segments_;
};

[[nodiscard]] inline double eval_phi(const InitialFunction& phi, double theta) { return phi(Compensated(theta)); }

// ---------------------------------------------------------------------------
// Problem
// ---------------------------------------------------------------------------

/// x' = f(x(t - g(x(t)))).
struct PureDelay {
  std::function<double(double)> f;
};

/// x' = F(x(t), x(t - g(x(t)))).
struct FullRhs {
  std::function<double(double, double)> F;
  bool lipschitz_in_state = false;  // declared, not verified
};

using Rhs = std::variant<PureDelay, FullRhs>;

struct SddProblem {
  std::string name;
  DelaySpec delay;
  Rhs rhs;
  InitialFunction phi;

  [[nodiscard]] double h() const noexcept { return delay.h(); }
  [[nodiscard]] bool pure_delay() const noexcept { return std::holds_alternative<PureDelay>(rhs); }

  /// F(x, y); for the pure-delay form this is f(y).
  [[nodiscard]] double rhs_value(double x, double delayed) const {
    if (const auto* p = std::get_if<PureDelay>(&rhs)) return p->f(delayed);
    return std::get<FullRhs>(rhs).F(x, delayed);
  }

  [[nodiscard]] bool lipschitz_in_state() const noexcept {
    if (pure_delay()) return true;
    return std::get<FullRhs>(rhs).lipschitz_in_state;
  }

  /// s0 = -g(phi(0)).
  [[nodiscard]] double initial_delayed_argument() const { return -eval_g(delay, eval_phi(phi, 0.0)); }
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

enum class ViolationKind { Empty, Gap, Overlap, DomainMismatch, Exponent, Coefficient, AnchorSide, Discontinuity, DelayRange };

[[nodiscard]] inline const char* to_string(ViolationKind k) noexcept {
  switch (k) {
    case ViolationKind::Empty: return "empty";
    case ViolationKind::Gap: return "gap";
    case ViolationKind::Overlap: return "overlap";
    case ViolationKind::DomainMismatch: return "domain-mismatch";
    case ViolationKind::Exponent: return "exponent";
    case ViolationKind::Coefficient: return "coefficient";
    case ViolationKind::AnchorSide: return "anchor-side";
    case ViolationKind::Discontinuity: return "discontinuity";
    case ViolationKind::DelayRange: return "delay-range";
  }
  return "unknown";
}

struct Violation {
  ViolationKind kind;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  [[nodiscard]] bool ok() const noexcept { return violations.empty(); }
  [[nodiscard]] bool has(ViolationKind k) const {
    return std::any_of(violations.begin(), violations.end(), [k](const Violation& v) { return v.kind == k; });
  }
};

inline constexpr double kJunctionTolerance = 1e-12;

[[nodiscard]] inline ValidationReport validate_problem(const SddProblem& p) {
  ValidationReport report;
  auto add = [&](ViolationKind k, std::string msg) { report.violations.push_back({k, std::move(msg)}); };
  const auto& segs = p.phi.segments();
  if (segs.empty()) {
    add(ViolationKind::Empty, "initial function has no segments");
    return report;
  }

  const double h = p.h();
  bool covered = true;
  if (std::fabs(segs.front().lo + h) > kJunctionTolerance) {
    const auto kind = segs.front().lo > -h ? ViolationKind::Gap : ViolationKind::DomainMismatch;
    add(kind, "coverage starts at " + detail::fmt_num(segs.front().lo) + ", expected " + detail::fmt_num(-h));
    covered = false;
  }
  if (std::fabs(segs.back().hi) > kJunctionTolerance) {
    const auto kind = segs.back().hi < 0.0 ? ViolationKind::Gap : ViolationKind::DomainMismatch;
    add(kind, "coverage ends at " + detail::fmt_num(segs.back().hi) + ", expected 0");
    covered = false;
  }
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const auto& s = segs[i];
    const std::string where = "segment " + std::to_string(i) + " [" + detail::fmt_num(s.lo) + ", " + detail::fmt_num(s.hi) + "]";
    if (!(s.lo < s.hi)) {
      add(ViolationKind::Overlap, where + " is empty or reversed");
      covered = false;
    }
    if (i > 0) {
      const double prev = segs[i - 1].hi;
      if (s.lo > prev + kJunctionTolerance) {
        add(ViolationKind::Gap, "gap (" + detail::fmt_num(prev) + ", " + detail::fmt_num(s.lo) + ")");
        covered = false;
      } else if (s.lo < prev - kJunctionTolerance) {
        add(ViolationKind::Overlap, "overlap [" + detail::fmt_num(s.lo) + ", " + detail::fmt_num(prev) + "]");
        covered = false;
      }
    }
    auto check_power = [&](double anchor, double coeff, double exponent, bool left) {
      if (!(exponent > 0.0 && exponent < 1.0)) {
        add(ViolationKind::Exponent, where + ": exponent " + detail::fmt_num(exponent) + " not in (0, 1)");
      }
      if (!(coeff != 0.0) || !std::isfinite(coeff)) {
        add(ViolationKind::Coefficient, where + ": coefficient must be nonzero and finite");
      }
      if (left ? s.hi > anchor : s.lo < anchor) {
        add(ViolationKind::AnchorSide, where + ": lies on the wrong side of anchor " + detail::fmt_num(anchor));
      }
    };
    if (const auto* l = std::get_if<PowerLeft>(&s.shape)) check_power(l->anchor, l->coeff, l->exponent, true);
    if (const auto* r = std::get_if<PowerRight>(&s.shape)) check_power(r->anchor, r->coeff, r->exponent, false);
  }
  if (!report.ok()) return report;

  for (std::size_t i = 1; i < segs.size(); ++i) {
    const double x = segs[i].lo;
    const double left = segs[i - 1].eval(Compensated(segs[i - 1].hi));
    const double right = segs[i].eval(Compensated(x));
    if (std::fabs(left - right) > kJunctionTolerance) {
      add(ViolationKind::Discontinuity, "jump of " + detail::fmt_num(right - left) + " at theta = " + detail::fmt_num(x));
    }
  }

  // Only the starting state is known to be evaluated; later states are checked by eval_g.
  if (covered) {
    const double x0 = eval_phi(p.phi, 0.0);
    const double g = p.delay.raw(x0);
    if (!(g >= 0.0 && g <= h)) {
      add(ViolationKind::DelayRange, "g(phi(0)) = " + detail::fmt_num(g) + " outside [0, h]");
    }
  }
  return report;
}

}  // namespace sdd
