/**
 * @file unicity.hpp
 * @brief Sufficient conditions for uniqueness via strict monotonicity of the
 *        delayed argument, and the inverse-time ODE in s.
 *
 * Along a solution, s'(t) = 1 - g'(x) F(x, phi(s)). If the scalar
 * q = g'(phi(0)) F(phi(0), phi(-g(phi(0)))) differs from 1 then s is strictly
 * monotone near t = 0, t(s) exists, and w(s) = x(t(s)) solves
 *
 *     dw/ds = F(w, phi(s)) / (1 - g'(w) F(w, phi(s))),
 *     dt/ds = 1 / (1 - g'(w) F(w, phi(s))),
 *
 * an ODE whose right-hand side is Lipschitz in w.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "sdd/error.hpp"
#include "sdd/model.hpp"
#include "sdd/oracle.hpp"

namespace sdd {

enum class UniquenessVerdict { Unique, Inconclusive };

[[nodiscard]] inline const char* to_string(UniquenessVerdict v) noexcept {
  return v == UniquenessVerdict::Unique ? "unique" : "inconclusive";
}

struct UniquenessCertificate {
  double q = 0.0;
  double margin = 0.0;
  UniquenessVerdict verdict = UniquenessVerdict::Inconclusive;
  double s0 = 0.0;
  double phi0 = 0.0;
  double phi_s0 = 0.0;
};

inline constexpr double kDefaultUniquenessMargin = 1e-9;
inline constexpr double kSingularDenominator = 1e-12;

/// "Inconclusive" never means non-unique; it only means q is within margin of 1.
[[nodiscard]] inline UniquenessCertificate prop2_certificate(const SddProblem& p,
                                                             double margin = kDefaultUniquenessMargin) {
  if (!(margin > 0.0)) throw Error(ErrorKind::Parameter, "margin must be positive");
  UniquenessCertificate c;
  c.margin = margin;
  c.phi0 = eval_phi(p.phi, 0.0);
  c.s0 = -eval_g(p.delay, c.phi0);
  c.phi_s0 = eval_phi(p.phi, c.s0);
  c.q = eval_g_prime(p.delay, c.phi0) * p.rhs_value(c.phi0, c.phi_s0);
  c.verdict = std::fabs(c.q - 1.0) > margin ? UniquenessVerdict::Unique : UniquenessVerdict::Inconclusive;
  return c;
}

struct RegionCheck {
  bool holds = true;
  double max_value = -std::numeric_limits<double>::infinity();
  double x_lo = 0.0;
  double x_hi = 0.0;
  double eta = 0.0;
  std::size_t samples = 0;
  std::size_t skipped = 0;  // x values at kinks of g
  std::string scope = "sampled, non-exhaustive";
};

/// Samples g'(x) F(x, y) < 1 over x in the hull of phi's values and |y| <= eta.
[[nodiscard]] inline RegionCheck prop1_region_check(const SddProblem& p, double eta, std::size_t grid) {
  if (!(eta > 0.0)) throw Error(ErrorKind::Parameter, "eta must be positive");
  if (grid < 10) throw Error(ErrorKind::Parameter, "grid must have at least 10 points");
  RegionCheck rc;
  rc.eta = eta;
  rc.x_lo = std::numeric_limits<double>::infinity();
  rc.x_hi = -std::numeric_limits<double>::infinity();
  for (double theta : linspace(p.phi.lower(), p.phi.upper(), 1001)) {
    const double v = eval_phi(p.phi, theta);
    rc.x_lo = std::min(rc.x_lo, v);
    rc.x_hi = std::max(rc.x_hi, v);
  }
  const std::vector<double> xs = rc.x_lo == rc.x_hi ? std::vector<double>{rc.x_lo} : linspace(rc.x_lo, rc.x_hi, grid);
  const std::vector<double> ys = linspace(-eta, eta, grid);
  for (double x : xs) {
    if (p.delay.at_kink(x)) {
      rc.skipped += ys.size();
      continue;
    }
    const double dg = eval_g_prime(p.delay, x);
    for (double y : ys) {
      const double v = dg * p.rhs_value(x, y);
      rc.max_value = std::max(rc.max_value, v);
      ++rc.samples;
      if (!(v < 1.0)) rc.holds = false;
    }
  }
  return rc;
}

/// G(s, w) = F(w, phi(s)) / (1 - g'(w) F(w, phi(s))).
[[nodiscard]] inline double transformed_rhs(const SddProblem& p, double s, double w) {
  const double F = p.rhs_value(w, eval_phi(p.phi, s));
  const double den = 1.0 - eval_g_prime(p.delay, w) * F;
  if (std::fabs(den) <= kSingularDenominator) {
    throw Error(ErrorKind::Singular, "1 - g'(w) F vanishes at (s, w) = (" + detail::fmt_num(s) + ", " + detail::fmt_num(w) + ")");
  }
  return F / den;
}

struct TransformedSample {
  double s;
  double t;
  double w;
};

struct TransformedTrajectory {
  std::vector<TransformedSample> samples;
  double direction = 1.0;  // +1 when s increases with t, -1 otherwise
  std::string abort_reason;

  [[nodiscard]] bool aborted() const noexcept { return !abort_reason.empty(); }
};

/// RK4 in s for (t, w) from (s0, 0, phi(0)) to s_end, in the direction of s'(0).
[[nodiscard]] inline TransformedTrajectory integrate_transformed(const SddProblem& p, double s_end, double step) {
  if (!(step > 0.0)) throw Error(ErrorKind::Parameter, "step must be positive");
  const UniquenessCertificate cert = prop2_certificate(p);
  if (cert.verdict != UniquenessVerdict::Unique) {
    throw Error(ErrorKind::Inapplicable, "q = " + detail::fmt_num(cert.q) + " is within the margin of 1; s'(0) may vanish");
  }
  if (s_end < p.phi.lower() || s_end > p.phi.upper()) {
    throw Error(ErrorKind::Domain, "s_end = " + detail::fmt_num(s_end) + " outside the domain of phi");
  }
  TransformedTrajectory out;
  out.direction = cert.q < 1.0 ? 1.0 : -1.0;
  const double s0 = cert.s0;
  out.samples.push_back({s0, 0.0, cert.phi0});
  if (s_end == s0) return out;
  if ((s_end - s0) * out.direction < 0.0) {
    throw Error(ErrorKind::Parameter, "s_end lies against the direction of s'(0); s runs " +
                                          std::string(out.direction > 0 ? "forward" : "backward"));
  }

  auto derivs = [&](double s, double w, double& dt, double& dw) {
    const double F = p.rhs_value(w, eval_phi(p.phi, s));
    const double den = 1.0 - eval_g_prime(p.delay, w) * F;
    if (std::fabs(den) <= kSingularDenominator) {
      throw Error(ErrorKind::Singular, "1 - g'(w) F vanishes at s = " + detail::fmt_num(s));
    }
    dt = 1.0 / den;
    dw = F / den;
  };

  const double span = std::fabs(s_end - s0);
  const auto n = static_cast<std::size_t>(std::ceil(span / step - 1e-9));
  const double ds = (s_end - s0) / static_cast<double>(n);
  double s = s0;
  double t = 0.0;
  double w = cert.phi0;
  for (std::size_t k = 0; k < n; ++k) {
    try {
      double t1, w1, t2, w2, t3, w3, t4, w4;
      derivs(s, w, t1, w1);
      derivs(s + 0.5 * ds, w + 0.5 * ds * w1, t2, w2);
      derivs(s + 0.5 * ds, w + 0.5 * ds * w2, t3, w3);
      derivs(s + ds, w + ds * w3, t4, w4);
      t += ds * (t1 + 2.0 * t2 + 2.0 * t3 + t4) / 6.0;
      w += ds * (w1 + 2.0 * w2 + 2.0 * w3 + w4) / 6.0;
      s = k + 1 == n ? s_end : s0 + ds * static_cast<double>(k + 1);
    } catch (const Error& e) {
      out.abort_reason = e.what();
      return out;
    }
    out.samples.push_back({s, t, w});
  }
  return out;
}

}  // namespace sdd
