#include <cmath>

#include "catch_amalgamated.hpp"
#include "oracles.hpp"
#include "sdd/sdd.hpp"

using Catch::Matchers::WithinAbs;
using namespace sdd;

TEST_CASE("prop2_certificate examples", "[unicity]") {
  const UniquenessCertificate cp = prop2_certificate(const_phi_problem());
  CHECK(cp.q == -1.0);
  CHECK(cp.verdict == UniquenessVerdict::Unique);

  const UniquenessCertificate key = prop2_certificate(key2026_problem({}));
  CHECK(key.q == 1.0);
  CHECK(key.verdict == UniquenessVerdict::Inconclusive);

  const UniquenessCertificate d = prop2_certificate(driver1963_problem());
  CHECK(d.q == 1.0);
  CHECK(d.verdict == UniquenessVerdict::Inconclusive);

  SECTION("kink of g at phi(0)") {
    const SddProblem p{"kink", DelaySpec::abs(1.0), PureDelay{[](double y) { return y; }},
                       InitialFunction::constant(0.0, 1.0)};
    try {
      (void)prop2_certificate(p);
      FAIL("expected a kink error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NonDifferentiable);
    }
  }
  SECTION("margin decides the verdict") {
    const SddProblem p{"near-one", DelaySpec::linear(1.0, 0.0, 2.0), PureDelay{[](double) { return 1.0 + 1e-7; }},
                       InitialFunction::constant(1.0, 2.0)};
    CHECK(prop2_certificate(p, 1e-9).verdict == UniquenessVerdict::Unique);
    CHECK(prop2_certificate(p, 1e-6).verdict == UniquenessVerdict::Inconclusive);
    CHECK_THROWS_AS(prop2_certificate(p, 0.0), Error);
  }
}

TEST_CASE("q depends on phi only through phi(0) and phi(s0)", "[unicity][property]") {
  const UniquenessCertificate a = prop2_certificate(key2026_problem({}));
  const UniquenessCertificate b = prop2_certificate(linear_ic_problem());
  CHECK(a.q == b.q);
  KeyParams other;
  other.A = 2.0;
  other.B = 0.5;
  other.alpha = 0.25;
  CHECK(prop2_certificate(key2026_problem(other)).q == a.q);
}

TEST_CASE("prop1_region_check examples", "[unicity]") {
  SECTION("g = 0.1 x, F = -2y + 5") {
    const SddProblem p{"tenth", DelaySpec::linear(0.1, 0.0, 5.0),
                       FullRhs{[](double, double y) { return -2.0 * y + 5.0; }, true}, InitialFunction::constant(4.0, 5.0)};
    const RegionCheck r = prop1_region_check(p, 2.0, 21);
    CHECK(r.holds);
    CHECK_THAT(r.max_value, WithinAbs(0.9, 1e-12));
    CHECK(r.scope == "sampled, non-exhaustive");
  }
  SECTION("constant delay") {
    const RegionCheck r = prop1_region_check(const_delay_problem(1.0), 5.0, 10);
    CHECK(r.holds);
    CHECK(r.max_value == 0.0);
  }
  SECTION("g = x, F = 2") {
    const SddProblem p{"two", DelaySpec::linear(1.0, 0.0, 5.0), FullRhs{[](double, double) { return 2.0; }, true},
                       InitialFunction::constant(1.0, 5.0)};
    const RegionCheck r = prop1_region_check(p, 1.0, 10);
    CHECK_FALSE(r.holds);
    CHECK(r.max_value == 2.0);
  }
  CHECK_THROWS_AS(prop1_region_check(const_phi_problem(), 0.0, 10), Error);
  CHECK_THROWS_AS(prop1_region_check(const_phi_problem(), 1.0, 9), Error);
}

TEST_CASE("transformed_rhs examples", "[unicity]") {
  CHECK(transformed_rhs(const_phi_problem(), -0.5, 1.0) == -0.5);
  const SddProblem zero{"zero", DelaySpec::abs(2.0), PureDelay{[](double) { return 0.0; }}, key2026_phi({})};
  for (double s : {-1.5, -1.0, -0.2}) CHECK(transformed_rhs(zero, s, 1.0) == 0.0);
  const SddProblem cd = const_delay_problem(1.0);
  CHECK(transformed_rhs(cd, -0.5, 3.0) == -1.0);
  try {
    (void)transformed_rhs(key2026_problem({}), -1.0, 1.0);
    FAIL("expected a singular denominator");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Singular);
  }
}

TEST_CASE("integrate_transformed examples", "[unicity]") {
  const SddProblem p = const_phi_problem();
  const TransformedTrajectory tr = integrate_transformed(p, 0.0, 1e-3);
  REQUIRE_FALSE(tr.aborted());
  CHECK(tr.direction == 1.0);
  CHECK(tr.samples.back().s == 0.0);
  CHECK_THAT(tr.samples.back().t, WithinAbs(0.5, 1e-8));
  CHECK_THAT(tr.samples.back().w, WithinAbs(0.5, 1e-8));
  for (const auto& smp : tr.samples) {
    const auto [t, w] = oracle::const_phi_transformed(smp.s);
    CHECK_THAT(smp.t, WithinAbs(t, 1e-12));
    CHECK_THAT(smp.w, WithinAbs(w, 1e-12));
  }

  const TransformedTrajectory single = integrate_transformed(p, -1.0, 1e-3);
  REQUIRE(single.samples.size() == 1);
  CHECK(single.samples.front().t == 0.0);
  CHECK(single.samples.front().w == 1.0);

  SECTION("agreement with the direct integrator") {
    const Trajectory direct = integrate(p, 0.5, 1e-3);
    double worst = 0.0;
    for (const auto& smp : tr.samples) worst = std::max(worst, std::fabs(smp.w - direct.value(std::min(smp.t, 0.5))));
    CHECK(worst <= 1e-6);
  }
  SECTION("preconditions") {
    CHECK_THROWS_AS(integrate_transformed(key2026_problem({}), -0.5, 1e-3), Error);
    CHECK_THROWS_AS(integrate_transformed(p, -1.0 - 1e-3, 1e-3), Error);
    CHECK_THROWS_AS(integrate_transformed(p, 0.5, 1e-3), Error);
    CHECK_THROWS_AS(integrate_transformed(p, 0.0, 0.0), Error);
  }
}

TEST_CASE("t(s) is strictly monotone for unique problems", "[unicity][property]") {
  SECTION("q < 1: increasing") {
    const TransformedTrajectory tr = integrate_transformed(const_phi_problem(), 0.0, 1e-3);
    for (std::size_t i = 1; i < tr.samples.size(); ++i) {
      CHECK(tr.samples[i].s > tr.samples[i - 1].s);
      CHECK(tr.samples[i].t > tr.samples[i - 1].t);
    }
  }
  SECTION("q > 1: decreasing") {
    const SddProblem q = key2026_quadratic_problem({});
    const UniquenessCertificate c = prop2_certificate(q);
    REQUIRE(c.q == 2.0);
    const TransformedTrajectory tr = integrate_transformed(q, -1.5, 1e-4);
    CHECK(tr.direction == -1.0);
    REQUIRE(tr.samples.size() > 10);
    for (std::size_t i = 1; i < tr.samples.size(); ++i) {
      CHECK(tr.samples[i].s < tr.samples[i - 1].s);
      CHECK(tr.samples[i].t > tr.samples[i - 1].t);
    }
    // Cross-check against the direct integrator on the same problem.
    const Trajectory direct = integrate(q, tr.samples.back().t, 1e-4);
    for (std::size_t i = 0; i < tr.samples.size(); i += 500) {
      if (tr.samples[i].t > direct.t_last()) break;
      CHECK_THAT(tr.samples[i].w, WithinAbs(direct.value(tr.samples[i].t), 1e-6));
    }
  }
}

TEST_CASE("s' matches 1 - g'(x) F along integrated trajectories", "[unicity][property]") {
  const SddProblem p = const_phi_problem();
  const Trajectory tr = integrate(p, 0.5, 1e-3);
  for (const Node& n : tr.nodes()) {
    const double s = delayed_arg(tr, p.delay, n.t);
    if (s > 0.0) continue;
    const double expected = 1.0 - eval_g_prime(p.delay, n.x) * p.rhs_value(n.x, eval_phi(p.phi, s));
    CHECK_THAT(s_dot(tr, p.delay, n.t), WithinAbs(expected, 1e-8));
  }
  // central differences of s(t) between nodes
  for (double t : {0.1, 0.25, 0.4}) {
    const double h = 1e-5;
    const double fd = (delayed_arg(tr, p.delay, t + h) - delayed_arg(tr, p.delay, t - h)) / (2 * h);
    CHECK_THAT(fd, WithinAbs(2.0, 1e-6));
  }
}
