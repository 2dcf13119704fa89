/**
 * @file classify.hpp
 * @brief Red/yellow/blue coloring by the sign of s'(t), and detection of
 *        non-Lipschitz points of an initial function.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "sdd/error.hpp"
#include "sdd/model.hpp"
#include "sdd/oracle.hpp"
#include "sdd/steps.hpp"

namespace sdd {

struct ColorSegment {
  double t_start;
  double t_end;
  Color color;
};

inline constexpr double kDefaultRedTolerance = 1e-8;

/// s'(t) = 1 - g'(x(t)) x'(t).
[[nodiscard]] inline double s_dot(const Trajectory& traj, const DelaySpec& delay, double t) {
  const StatePoint sp = traj.state(t);
  return 1.0 - eval_g_prime(delay, sp.x) * sp.xdot;
}

[[nodiscard]] inline Color color_of(double sdot, double tol_red) noexcept {
  if (std::fabs(sdot) <= tol_red) return Color::Red;
  return sdot > 0.0 ? Color::Yellow : Color::Blue;
}

/// Colors every node, then merges maximal runs. A run ends at its last node;
/// the next run starts there. A leading single-node run has zero length and
/// is absorbed by its successor.
[[nodiscard]] inline std::vector<ColorSegment> classify(const Trajectory& traj, const DelaySpec& delay,
                                                         double tol_red = kDefaultRedTolerance) {
  if (!(tol_red > 0.0)) throw Error(ErrorKind::Parameter, "tol_red must be positive");
  const auto& nodes = traj.nodes();
  if (nodes.size() < 2) throw Error(ErrorKind::Parameter, "classification needs at least two nodes");

  std::vector<Color> colors;
  colors.reserve(nodes.size());
  for (const Node& n : nodes) colors.push_back(color_of(1.0 - eval_g_prime(delay, n.x) * n.xdot, tol_red));

  std::vector<ColorSegment> out;
  double start = nodes.front().t;
  std::size_t i = 0;
  while (i < nodes.size()) {
    std::size_t j = i;
    while (j + 1 < nodes.size() && colors[j + 1] == colors[i]) ++j;
    const double end = j + 1 < nodes.size() ? nodes[j].t : nodes.back().t;
    if (end > start) {
      if (!out.empty() && out.back().color == colors[i]) {
        out.back().t_end = end;
      } else {
        out.push_back({start, end, colors[i]});
      }
      start = end;
    }
    i = j + 1;
  }
  if (out.empty()) out.push_back({nodes.front().t, nodes.back().t, colors.back()});
  if (out.back().t_end < nodes.back().t) out.back().t_end = nodes.back().t;
  return out;
}

/// Samples a closed form on `count` equispaced nodes over [window.lo, t_hi],
/// plus the branch point tau, using the exact value and derivative.
[[nodiscard]] inline Trajectory exact_trajectory(const ClosedFormSolution& sol, double t_hi, std::size_t count) {
  if (count < 2) throw Error(ErrorKind::Parameter, "need at least two nodes");
  const double lo = sol.window.lo;
  std::vector<double> ts = linspace(lo, t_hi, count);
  if (sol.family != Color::Red && sol.tau > lo && sol.tau < t_hi) ts.push_back(sol.tau);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  Trajectory traj(sol.label, lo, (t_hi - lo) / static_cast<double>(count - 1));
  for (double t : ts) traj.push({t, sol.value(t).value(), sol.derivative(t)});
  return traj;
}

// ---------------------------------------------------------------------------
// Non-Lipschitz points and Hoelder fits
// ---------------------------------------------------------------------------

enum class Side { Left, Right };

[[nodiscard]] inline const char* to_string(Side s) noexcept { return s == Side::Left ? "left" : "right"; }

namespace detail {

/// One-sided difference quotients at scales 1e-2 ... 1e-6 grow without bound.
[[nodiscard]] inline bool quotients_blow_up(const InitialFunction& phi, double c, Side side) {
  constexpr std::array<double, 5> scales{1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  const double dir = side == Side::Right ? 1.0 : -1.0;
  const double far = c + dir * scales.front();
  if (far < phi.lower() || far > phi.upper()) return false;
  const double base = eval_phi(phi, c);
  std::array<double, 5> q{};
  for (std::size_t k = 0; k < scales.size(); ++k) {
    q[k] = std::fabs(eval_phi(phi, c + dir * scales[k]) - base) / scales[k];
  }
  for (std::size_t k = 1; k < q.size(); ++k) {
    if (!(q[k] > q[k - 1])) return false;
  }
  // 1.5 over four decades corresponds to a local exponent below about 0.95.
  return q.back() > 1.5 * q.front();
}

}  // namespace detail

/// Junctions, power anchors and domain ends at which phi fails to be Lipschitz.
[[nodiscard]] inline std::vector<double> find_nonlipschitz(const InitialFunction& phi) {
  std::vector<double> candidates = phi.junctions();
  for (double a : phi.anchors()) candidates.push_back(a);
  candidates.push_back(phi.lower());
  candidates.push_back(phi.upper());
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  std::vector<double> out;
  for (double c : candidates) {
    if (c < phi.lower() || c > phi.upper()) continue;
    if (detail::quotients_blow_up(phi, c, Side::Left) || detail::quotients_blow_up(phi, c, Side::Right)) {
      out.push_back(c);
    }
  }
  return out;
}

struct HolderEstimate {
  Side side;
  double coeff;
  double exponent;
  double fit_residual;  // RMS of the log-log regression residuals
  std::size_t samples;
};

/// Least-squares fit of log|phi(s0 +/- d) - phi(s0)| = log coeff + exponent log d
/// over nine offsets, two per decade from 1e-1 down to 1e-5.
[[nodiscard]] inline HolderEstimate estimate_holder(const InitialFunction& phi, double s0, Side side) {
  if (!(s0 > phi.lower() && s0 < phi.upper())) {
    throw Error(ErrorKind::Domain, "anchor " + detail::fmt_num(s0) + " must lie strictly inside the domain of phi");
  }
  const double dir = side == Side::Right ? 1.0 : -1.0;
  const double base = eval_phi(phi, s0);
  std::vector<double> lx;
  std::vector<double> ly;
  for (int k = 0; k <= 8; ++k) {
    const double d = std::pow(10.0, -1.0 - 0.5 * k);
    const double theta = s0 + dir * d;
    if (theta < phi.lower() || theta > phi.upper()) continue;
    const double diff = std::fabs(eval_phi(phi, theta) - base);
    if (!(diff > 0.0)) {
      throw Error(ErrorKind::Singular, "degenerate fit: phi is locally constant on the " + std::string(to_string(side)) +
                                           " of " + detail::fmt_num(s0));
    }
    lx.push_back(std::log(d));
    ly.push_back(std::log(diff));
  }
  if (lx.size() < 8) throw Error(ErrorKind::Domain, "fewer than 8 offsets fit inside the domain of phi");

  const auto n = static_cast<double>(lx.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (intercept + slope * lx[i]);
    ss += r * r;
  }
  return {side, std::exp(intercept), slope, std::sqrt(ss / n), lx.size()};
}

}  // namespace sdd
