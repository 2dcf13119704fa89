/**
 * @file redcert.hpp
 * @brief Red-solution certificates: existence test, candidate construction,
 *        verification, and the at-most-one-red check for the full form.
 *
 * A red solution has constant delayed argument s(t) = s0 = -g(phi(0)). The
 * right-hand side is then frozen at q = f(phi(s0)), the solution is the line
 * phi(0) + q t, and g must coincide with S -> (S - phi(0)) / q - s0 on the
 * half-neighbourhood of phi(0) that the line sweeps.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "sdd/compensated.hpp"
#include "sdd/error.hpp"
#include "sdd/model.hpp"
#include "sdd/oracle.hpp"

namespace sdd {

enum class RedVerdict { ImpossibleCase1, ImpossibleNonlinearG, CandidateExists };

[[nodiscard]] inline const char* to_string(RedVerdict v) noexcept {
  switch (v) {
    case RedVerdict::ImpossibleCase1: return "impossible-case1";
    case RedVerdict::ImpossibleNonlinearG: return "impossible-nonlinear-g";
    case RedVerdict::CandidateExists: return "candidate-exists";
  }
  return "unknown";
}

/// x(t) = intercept + slope t.
struct RedCandidate {
  double intercept;
  double slope;
};

struct RedCertificate {
  double s0 = 0.0;
  double phi_s0 = 0.0;
  double f_at_phi_s0 = 0.0;
  RedVerdict verdict = RedVerdict::ImpossibleCase1;
  std::optional<RedCandidate> candidate;
  double linearity_residual = 0.0;
  std::string side = "none";  // half-neighbourhood of phi(0) that was sampled
};

inline constexpr double kLinearityTolerance = 1e-9;
inline constexpr int kLinearitySamples = 50;
inline constexpr double kLinearityTimeSpan = 0.1;

[[nodiscard]] inline RedCertificate red_certificate(const SddProblem& p) {
  if (!p.pure_delay()) {
    throw Error(ErrorKind::Inapplicable, "red certificate requires the pure-delay form x' = f(x(t - g(x)))");
  }
  RedCertificate cert;
  const double x0 = eval_phi(p.phi, 0.0);
  cert.s0 = -eval_g(p.delay, x0);
  cert.phi_s0 = eval_phi(p.phi, cert.s0);
  const double q = p.rhs_value(x0, cert.phi_s0);
  cert.f_at_phi_s0 = q;
  if (q == 0.0) {
    cert.verdict = RedVerdict::ImpossibleCase1;
    return cert;
  }

  // S = x0 + q t sweeps [x0, x0 + 0.1 q] for t in [0, 0.1]: radius 0.1 |q| on the side of sign(q).
  cert.side = q > 0.0 ? "right" : "left";
  double worst = 0.0;
  for (int k = 0; k < kLinearitySamples; ++k) {
    const double t = kLinearityTimeSpan * static_cast<double>(k) / (kLinearitySamples - 1);
    const double S = x0 + q * t;
    const double required = (S - x0) / q - cert.s0;
    worst = std::max(worst, std::fabs(p.delay.raw(S) - required));
  }
  cert.linearity_residual = worst;
  if (worst > kLinearityTolerance) {
    cert.verdict = RedVerdict::ImpossibleNonlinearG;
    return cert;
  }
  cert.verdict = RedVerdict::CandidateExists;
  cert.candidate = RedCandidate{x0, q};
  return cert;
}

struct RedVerification {
  bool passed = false;
  double max_residual = 0.0;
  bool non_constant = false;
  std::string message;
};

/// Residual of the candidate on 100 points of [0, horizon] plus the
/// non-constant requirement (slope != 0).
[[nodiscard]] inline RedVerification verify_red(const SddProblem& p, const RedCertificate& cert, double horizon) {
  if (cert.verdict != RedVerdict::CandidateExists || !cert.candidate) {
    throw Error(ErrorKind::Inapplicable, "verify_red needs a candidate-exists certificate");
  }
  if (!(horizon > 0.0)) throw Error(ErrorKind::Parameter, "horizon must be positive");
  ClosedFormSolution red{"x~", Color::Red, 0.0, cert.candidate->intercept, cert.candidate->slope, 0.0, 2.0,
                         Window{0.0, horizon}, {}};
  RedVerification out;
  out.max_residual = max_residual(p, red, 100, horizon);
  out.non_constant = cert.candidate->slope != 0.0;
  out.passed = out.non_constant && out.max_residual <= kLinearityTolerance;
  if (!out.non_constant) {
    out.message = "candidate is constant; a red solution must have nonzero slope";
  } else if (!out.passed) {
    out.message = "candidate residual " + detail::fmt_num(out.max_residual) + " exceeds " + detail::fmt_num(kLinearityTolerance);
  } else {
    out.message = "candidate verified";
  }
  return out;
}

struct RedUniquenessReport {
  double s0 = 0.0;
  double phi_s0 = 0.0;
  double reduced_slope_at_0 = 0.0;  // F(phi(0), phi(s0))
  double horizon = 0.0;
  double reduced_endpoint = 0.0;    // reduced solution at the horizon
  double s_variation = 0.0;         // max |s(t) - s0| along the reduced solution
  bool reduced_is_red = false;
  int red_candidates = 0;           // at most one by construction
};

/// Every red solution obeys x' = F(x, phi(s0)), x(0) = phi(0). With F locally
/// Lipschitz in x this has exactly one solution; it is red iff s stays at s0.
[[nodiscard]] inline RedUniquenessReport red_uniqueness_check(const SddProblem& p, double horizon = 1.0,
                                                              double step = 1e-3) {
  if (!p.lipschitz_in_state()) {
    throw Error(ErrorKind::Inapplicable, "problem '" + p.name + "' does not declare F locally Lipschitz in its first argument");
  }
  if (!(horizon > 0.0) || !(step > 0.0)) throw Error(ErrorKind::Parameter, "horizon and step must be positive");
  RedUniquenessReport rep;
  const double x0 = eval_phi(p.phi, 0.0);
  rep.s0 = -eval_g(p.delay, x0);
  rep.phi_s0 = eval_phi(p.phi, rep.s0);
  rep.reduced_slope_at_0 = p.rhs_value(x0, rep.phi_s0);
  rep.horizon = horizon;

  const double y = rep.phi_s0;
  auto F = [&](double x) { return p.rhs_value(x, y); };
  const auto n = static_cast<int>(std::ceil(horizon / step - 1e-9));
  const double dt = horizon / n;
  Compensated x(x0);
  double worst = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double t = dt * k;
    const Compensated s = p.delay.delayed_argument(Compensated(t), x);
    worst = std::max(worst, std::fabs(offset(s, rep.s0)));
    if (k == n) break;
    const double xv = x.value();
    const double k1 = F(xv);
    const double k2 = F(xv + 0.5 * dt * k1);
    const double k3 = F(xv + 0.5 * dt * k2);
    const double k4 = F(xv + dt * k3);
    x = x + Compensated(dt * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0);
  }
  rep.reduced_endpoint = x.value();
  rep.s_variation = worst;
  rep.reduced_is_red = worst <= kLinearityTolerance;
  rep.red_candidates = rep.reduced_is_red ? 1 : 0;
  return rep;
}

}  // namespace sdd
