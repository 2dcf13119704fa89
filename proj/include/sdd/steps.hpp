/**
 * @file steps.hpp
 * @brief Fixed-step RK4 method of steps with cubic Hermite dense output, and
 *        branch seeding for following non-unique solutions.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sdd/compensated.hpp"
#include "sdd/error.hpp"
#include "sdd/model.hpp"
#include "sdd/oracle.hpp"

namespace sdd {

struct Node {
  double t;
  double x;
  double xdot;  // right-hand derivative, equal to the RHS at the node
};

/// Value and derivative of a dense solution at one time.
struct StatePoint {
  double x;
  double xdot;
};

namespace detail {

[[nodiscard]] inline StatePoint hermite(const Node& a, const Node& b, double t) {
  const double dt = b.t - a.t;
  const double u = (t - a.t) / dt;
  const double u2 = u * u;
  const double u3 = u2 * u;
  const double x = (2.0 * u3 - 3.0 * u2 + 1.0) * a.x + (u3 - 2.0 * u2 + u) * dt * a.xdot + (-2.0 * u3 + 3.0 * u2) * b.x +
                   (u3 - u2) * dt * b.xdot;
  const double xdot = (6.0 * u2 - 6.0 * u) / dt * a.x + (3.0 * u2 - 4.0 * u + 1.0) * a.xdot +
                      (-6.0 * u2 + 6.0 * u) / dt * b.x + (3.0 * u2 - 2.0 * u) * b.xdot;
  return {x, xdot};
}

}  // namespace detail

class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(std::string problem, double t0, double step) : problem_(std::move(problem)), t0_(t0), step_(step) {}

  [[nodiscard]] const std::string& problem() const noexcept { return problem_; }
  [[nodiscard]] double t0() const noexcept { return t0_; }
  [[nodiscard]] double step() const noexcept { return step_; }
  [[nodiscard]] const std::vector<Node>& nodes() const noexcept { return nodes_; }
  [[nodiscard]] double t_last() const { return nodes_.empty() ? t0_ : nodes_.back().t; }

  [[nodiscard]] bool aborted() const noexcept { return !abort_reason_.empty(); }
  [[nodiscard]] const std::string& abort_reason() const noexcept { return abort_reason_; }
  [[nodiscard]] const std::vector<std::string>& warnings() const noexcept { return warnings_; }
  [[nodiscard]] std::size_t extrapolated_stages() const noexcept { return extrapolated_; }

  /// History on (0, t0] for trajectories that start after t = 0.
  [[nodiscard]] const std::function<double(double)>& prefix() const noexcept { return prefix_; }

  void set_prefix(std::function<double(double)> prefix) { prefix_ = std::move(prefix); }
  void push(const Node& n) {
    if (!nodes_.empty() && !(n.t > nodes_.back().t)) {
      throw Error(ErrorKind::Parameter, "trajectory nodes must be strictly increasing in t");
    }
    nodes_.push_back(n);
  }
  void abort(std::string reason) { abort_reason_ = std::move(reason); }
  void warn_once(const std::string& w) {
    if (std::find(warnings_.begin(), warnings_.end(), w) == warnings_.end()) warnings_.push_back(w);
  }
  void count_extrapolation() noexcept { ++extrapolated_; }

  /// Dense value and derivative on [t0, t_last]; exact at nodes.
  [[nodiscard]] StatePoint state(double t) const {
    if (nodes_.empty() || t < nodes_.front().t || t > nodes_.back().t) {
      throw Error(ErrorKind::Domain, "t = " + detail::fmt_num(t) + " outside the trajectory range");
    }
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t, [](double v, const Node& n) { return v < n.t; });
    const std::size_t i = static_cast<std::size_t>(it - nodes_.begin()) - 1;
    const Node& a = nodes_[i];
    if (t == a.t) return {a.x, a.xdot};
    return detail::hermite(a, nodes_[i + 1], t);
  }

  [[nodiscard]] double value(double t) const { return state(t).x; }

  /// Continuation of the last Hermite piece (or the tangent line for a single node).
  [[nodiscard]] double extrapolate(double t) const {
    if (nodes_.empty()) throw Error(ErrorKind::Domain, "empty trajectory");
    if (nodes_.size() == 1) return nodes_.back().x + nodes_.back().xdot * (t - nodes_.back().t);
    return detail::hermite(nodes_[nodes_.size() - 2], nodes_.back(), t).x;
  }

 private:
  std::string problem_;
  double t0_ = 0.0;
  double step_ = 0.0;
  std::vector<Node> nodes_;
  std::function<double(double)> prefix_;
  std::string abort_reason_;
  std::vector<std::string> warnings_;
  std::size_t extrapolated_ = 0;
};

struct HistorySample {
  double value;
  bool extrapolated;
};

/// Combined history: phi on [-h, 0], the prefix on (0, t0], the dense
/// trajectory on (t0, t_last], and at most one step of extrapolation beyond.
[[nodiscard]] inline HistorySample history_sample(const Trajectory& traj, const InitialFunction& phi,
                                                  const Compensated& s) {
  if (s < Compensated(phi.lower())) {
    throw Error(ErrorKind::Domain, "history requested at s = " + detail::fmt_num(s.value()) + " below -h = " +
                                       detail::fmt_num(phi.lower()));
  }
  if (s <= Compensated(0.0)) return {phi(s), false};
  const double sv = s.value();
  if (sv <= traj.t0()) {
    if (traj.t0() > 0.0 && traj.prefix()) return {traj.prefix()(sv), false};
    if (traj.t0() > 0.0) {
      throw Error(ErrorKind::Domain, "history on (0, t0] unavailable at s = " + detail::fmt_num(sv));
    }
  }
  if (!traj.nodes().empty() && sv <= traj.t_last()) return {traj.value(sv), false};
  const double limit = traj.t_last() + traj.step();
  if (sv <= limit) return {traj.extrapolate(sv), true};
  throw Error(ErrorKind::Domain, "history requested at s = " + detail::fmt_num(sv) + " beyond one step past t = " +
                                     detail::fmt_num(traj.t_last()));
}

[[nodiscard]] inline double history_eval(const Trajectory& traj, const InitialFunction& phi, double s) {
  return history_sample(traj, phi, Compensated(s)).value;
}

/// s(t) = t - g(x(t)) along a trajectory. The delay must be non-negative and
/// s(t) must not fall below -h; g itself may exceed h once t > 0.
[[nodiscard]] inline double delayed_arg(const Trajectory& traj, const DelaySpec& delay, double t) {
  const double x = traj.value(t);
  const double g = delay.raw(x);
  if (!(g >= 0.0)) throw Error(ErrorKind::Range, "g(" + detail::fmt_num(x) + ") = " + detail::fmt_num(g) + " is negative");
  const double s = delay.delayed_argument(Compensated(t), Compensated(x)).value();
  if (s < -delay.h()) {
    throw Error(ErrorKind::Domain, "s(" + detail::fmt_num(t) + ") = " + detail::fmt_num(s) + " below -h");
  }
  return s;
}

/// Starting point of an integration that does not begin at (0, phi(0)).
struct Seed {
  double t = 0.0;
  Compensated x;
  std::function<double(double)> prefix;  // solution on (0, t], used as history
};

/// Fixed-step classical RK4; every stage reads the delayed state from the
/// combined history at s = t_stage - g(x_stage).
///
/// Failures during stepping (s below -h, g not evaluable) stop the
/// integration and leave the partial trajectory with an abort reason.
[[nodiscard]] inline Trajectory integrate(const SddProblem& p, double t_end, double step,
                                          const std::optional<Seed>& seed = std::nullopt) {
  if (!(step > 0.0) || !std::isfinite(step)) throw Error(ErrorKind::Parameter, "step must be positive");
  const double t_start = seed ? seed->t : 0.0;
  if (!(t_start >= 0.0)) throw Error(ErrorKind::Parameter, "integration must start at t >= 0");
  if (!(t_end > t_start)) {
    throw Error(ErrorKind::Parameter, "t_end = " + detail::fmt_num(t_end) + " must exceed t_start = " + detail::fmt_num(t_start));
  }
  const double phi0 = eval_phi(p.phi, 0.0);
  Compensated x = seed ? seed->x : Compensated(phi0);
  if (t_start == 0.0 && std::fabs(x.value() - phi0) > 1e-12 * std::max(1.0, std::fabs(phi0))) {
    throw Error(ErrorKind::Parameter, "seed at t = 0 must equal phi(0) = " + detail::fmt_num(phi0));
  }

  Trajectory traj(p.name, t_start, step);
  if (seed && seed->prefix) traj.set_prefix(seed->prefix);

  auto rhs = [&](const Compensated& t, const Compensated& xs) -> double {
    const Compensated s = p.delay.delayed_argument(t, xs);
    if (t < s) throw Error(ErrorKind::Range, "negative delay g(" + detail::fmt_num(xs.value()) + ")");
    const HistorySample hs = history_sample(traj, p.phi, s);
    if (hs.extrapolated) {
      traj.count_extrapolation();
      traj.warn_once("delayed argument entered the current step; last Hermite piece extrapolated");
    }
    return p.rhs_value(xs.value(), hs.value);
  };

  Compensated t(t_start);
  double xdot = 0.0;
  try {
    xdot = rhs(t, x);
  } catch (const Error& e) {
    traj.abort(e.what());
    return traj;
  }
  traj.push({t.value(), x.value(), xdot});

  const double span = t_end - t_start;
  const auto full_steps = static_cast<std::size_t>(std::floor(span / step * (1.0 + 1e-12)));
  const double rest = span - static_cast<double>(full_steps) * step;
  const std::size_t total = full_steps + (rest > 1e-9 * step ? 1 : 0);

  for (std::size_t n = 0; n < total; ++n) {
    const double dt = n < full_steps ? step : t_end - t.value();
    const double half = 0.5 * dt;
    try {
      const double k1 = xdot;
      const double k2 = rhs(t + Compensated(half), x + detail::two_prod(half, k1));
      const double k3 = rhs(t + Compensated(half), x + detail::two_prod(half, k2));
      const double k4 = rhs(t + Compensated(dt), x + detail::two_prod(dt, k3));
      x = x + detail::two_prod(dt, (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0);
      t = t + Compensated(dt);
      xdot = rhs(t, x);
    } catch (const Error& e) {
      traj.abort(e.what());
      return traj;
    }
    traj.push({t.value(), x.value(), xdot});
  }
  return traj;
}

// ---------------------------------------------------------------------------
// Branch seeding
// ---------------------------------------------------------------------------

/// A yellow or blue departure  red(t) -/+ coeff (t - tau)^exponent  from the red line.
struct BranchSpec {
  Color family = Color::Red;
  double tau = 0.0;
  double coeff = 0.0;
  double exponent = 2.0;
};

[[nodiscard]] inline BranchSpec branch_spec(const ClosedFormSolution& sol) {
  return {sol.family, sol.tau, sol.coeff, sol.exponent};
}

inline constexpr double kDefaultSeedOffset = 1e-4;

/// Point on the branch at t = tau + eps, from the local expansion at tau.
///
/// The red line is phi(0) + t F(phi(0), phi(s0)). The seeded delayed argument
/// must fall in the power piece of phi on the side the family moves to, and
/// the branch exponent must match 1 / (1 - exponent of that piece).
[[nodiscard]] inline Seed seed_branch(const SddProblem& p, const BranchSpec& b, double eps = kDefaultSeedOffset) {
  if (!(eps > 0.0)) throw Error(ErrorKind::Parameter, "seed offset eps must be positive");
  if (!(b.tau >= 0.0)) throw Error(ErrorKind::Parameter, "tau must be non-negative");
  if (b.family != Color::Red && (!(b.coeff > 0.0) || !(b.exponent > 1.0))) {
    throw Error(ErrorKind::Parameter, "branch needs coeff > 0 and exponent > 1");
  }
  const double x0 = eval_phi(p.phi, 0.0);
  const double s0 = p.initial_delayed_argument();
  const double slope = p.rhs_value(x0, eval_phi(p.phi, s0));
  const double sign = b.family == Color::Yellow ? -1.0 : (b.family == Color::Blue ? 1.0 : 0.0);
  const BranchSpec spec = b;
  auto profile = [x0, slope, sign, spec](double t) -> Compensated {
    Compensated v = Compensated(x0) + detail::two_prod(slope, t);
    const double u = t - spec.tau;
    if (sign != 0.0 && u > 0.0) v = v + Compensated(sign * spec.coeff * std::pow(u, spec.exponent));
    return v;
  };

  Seed seed;
  seed.t = b.tau + eps;
  seed.x = profile(seed.t);
  seed.prefix = [profile](double t) { return profile(t).value(); };
  if (b.family == Color::Red) return seed;

  const Compensated s = p.delay.delayed_argument(Compensated(seed.t), seed.x);
  const bool right = b.family == Color::Yellow;
  const bool on_side = right ? (s > Compensated(s0)) : (s < Compensated(s0));
  std::optional<double> piece_exponent;
  if (on_side && s >= Compensated(p.phi.lower()) && s <= Compensated(0.0)) {
    const Segment& seg = p.phi.segments()[p.phi.locate(s)];
    if (right) {
      if (const auto* r = std::get_if<PowerRight>(&seg.shape); r && r->anchor == s0) piece_exponent = r->exponent;
    } else {
      if (const auto* l = std::get_if<PowerLeft>(&seg.shape); l && l->anchor == s0) piece_exponent = l->exponent;
    }
  }
  if (!piece_exponent) {
    throw Error(ErrorKind::Domain, "eps = " + detail::fmt_num(eps) + " puts s = " + detail::fmt_num(s.value()) +
                                       " outside the " + to_string(b.family) + " family window");
  }
  const double expected = 1.0 / (1.0 - *piece_exponent);
  if (std::fabs(expected - b.exponent) > 1e-9 * expected) {
    throw Error(ErrorKind::Parameter, "branch exponent " + detail::fmt_num(b.exponent) +
                                          " inconsistent with phi exponent " + detail::fmt_num(*piece_exponent));
  }
  return seed;
}

}  // namespace sdd
