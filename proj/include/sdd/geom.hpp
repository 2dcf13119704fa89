/**
 * @file geom.hpp
 * @brief Solutions as (t, s, x) space curves, with surface and plane checks.
 *
 * Every solution lies on the surface -t + s + g(x) = 0 because s is defined
 * as t - g(x). Where g(x) = a x + b the surface is a plane.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "sdd/error.hpp"
#include "sdd/model.hpp"
#include "sdd/oracle.hpp"
#include "sdd/steps.hpp"

namespace sdd {

struct CurveRow {
  double t;
  double s;
  double x;
};

struct Curve3D {
  std::string source;
  std::string problem;
  std::vector<CurveRow> rows;
};

namespace detail {

[[nodiscard]] inline CurveRow lift_point(const DelaySpec& delay, double t, const Compensated& x) {
  const double g = delay.raw(x.value());
  if (!std::isfinite(g)) throw Error(ErrorKind::Range, "g not finite at x = " + fmt_num(x.value()));
  return {t, delay.delayed_argument(Compensated(t), x).value(), x.value()};
}

}  // namespace detail

/// Samples a closed form on `grid` equispaced times of its window (unbounded
/// windows are clamped to `horizon`).
[[nodiscard]] inline Curve3D lift(const ClosedFormSolution& sol, const DelaySpec& delay, std::size_t grid,
                                  const std::string& problem = {}, double horizon = kDefaultHorizon) {
  if (grid < 2) throw Error(ErrorKind::Parameter, "grid must be at least 2");
  const Window w = sol.window.bounded() ? sol.window : sol.window.clamped(horizon);
  Curve3D c{sol.label, problem, {}};
  c.rows.reserve(grid);
  for (double t : linspace(w.lo, w.hi, grid)) c.rows.push_back(detail::lift_point(delay, t, sol.value(t)));
  return c;
}

/// Samples a trajectory's dense output on `grid` equispaced times of [t0, t_last].
[[nodiscard]] inline Curve3D lift(const Trajectory& traj, const DelaySpec& delay, std::size_t grid) {
  if (grid < 2) throw Error(ErrorKind::Parameter, "grid must be at least 2");
  if (traj.nodes().size() < 2) throw Error(ErrorKind::Parameter, "trajectory has fewer than two nodes");
  Curve3D c{"trajectory", traj.problem(), {}};
  c.rows.reserve(grid);
  for (double t : linspace(traj.nodes().front().t, traj.t_last(), grid)) {
    c.rows.push_back(detail::lift_point(delay, t, Compensated(traj.value(t))));
  }
  return c;
}

/// max |-t + s + g(x)| over the rows.
[[nodiscard]] inline double surface_residual(const Curve3D& c, const DelaySpec& delay) {
  double worst = 0.0;
  for (const auto& r : c.rows) worst = std::max(worst, std::fabs(-r.t + r.s + delay.raw(r.x)));
  return worst;
}

/// max |-t + s + a x + b| over the rows.
[[nodiscard]] inline double plane_residual(const Curve3D& c, double a, double b) {
  double worst = 0.0;
  for (const auto& r : c.rows) worst = std::max(worst, std::fabs(-r.t + r.s + a * r.x + b));
  return worst;
}

}  // namespace sdd
