#include <cmath>

#include "catch_amalgamated.hpp"
#include "oracles.hpp"
#include "sdd/sdd.hpp"
#include "support.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using namespace sdd;

namespace {

void check_matches_declared(const ClosedFormSolution& s, const DelaySpec& delay, double t_hi) {
  const Trajectory tr = exact_trajectory(s, t_hi, 2001);
  const auto segs = classify(tr, delay);
  const auto declared = s.declared_colors(t_hi);
  INFO(s.label << " tau " << s.tau);
  REQUIRE(segs.size() == declared.size());
  for (std::size_t i = 0; i < segs.size(); ++i) {
    CHECK(segs[i].color == declared[i].color);
    CHECK(segs[i].t_start == declared[i].t_start);
    CHECK(segs[i].t_end == declared[i].t_end);
  }
}

}  // namespace

TEST_CASE("s_dot examples", "[classify]") {
  const SddProblem key = key2026_problem({});
  const Trajectory red = integrate(key, 1.0, 1e-3);
  for (double t : {0.0, 0.5, 1.0}) CHECK(s_dot(red, key.delay, t) == 0.0);

  const SddProblem cp = const_phi_problem();
  const Trajectory tc = integrate(cp, 0.5, 1e-3);
  for (double t : {0.1, 0.3}) CHECK_THAT(s_dot(tc, cp.delay, t), WithinAbs(2.0, 1e-12));

  const SddProblem cd = const_delay_problem(1.0);
  const Trajectory td = integrate(cd, 2.0, 1e-2);
  for (double t : {0.1, 1.5}) CHECK(s_dot(td, cd.delay, t) == 1.0);

  const SddProblem zero{"kink", DelaySpec::abs(1.0), PureDelay{[](double) { return 0.0; }},
                        InitialFunction::constant(0.0, 1.0)};
  const Trajectory tz = integrate(zero, 0.1, 1e-2);
  CHECK_THROWS_AS(s_dot(tz, zero.delay, 0.05), Error);
}

TEST_CASE("classify examples", "[classify]") {
  const KeyParams kp;
  const DelaySpec abs = DelaySpec::abs(kp.h);
  SECTION("waiting-time yellow") {
    const auto y = key_family(kp, Color::Yellow, 0.3);
    const auto segs = classify(exact_trajectory(y, y.window.hi, 1001), abs);
    REQUIRE(segs.size() == 2);
    CHECK(segs[0].t_start == 0.0);
    CHECK(segs[0].t_end == 0.3);
    CHECK(segs[0].color == Color::Red);
    CHECK(segs[1].t_start == 0.3);
    CHECK(segs[1].t_end == y.window.hi);
    CHECK(segs[1].color == Color::Yellow);
  }
  SECTION("immediate blue") {
    const auto b = key_family(kp, Color::Blue, 0.0);
    const auto segs = classify(exact_trajectory(b, b.window.hi, 1001), abs);
    REQUIRE(segs.size() == 1);
    CHECK(segs[0].color == Color::Blue);
  }
  SECTION("constant delay is yellow") {
    const SddProblem cd = const_delay_problem(1.0);
    const auto segs = classify(integrate(cd, 3.0, 1e-2), cd.delay);
    REQUIRE(segs.size() == 1);
    CHECK(segs[0].color == Color::Yellow);
    CHECK(segs[0].t_end == 3.0);
  }
  SECTION("bad tolerance") {
    const SddProblem cd = const_delay_problem(1.0);
    CHECK_THROWS_AS(classify(integrate(cd, 1.0, 1e-2), cd.delay, 0.0), Error);
  }
}

TEST_CASE("segments are ordered with distinct neighbours", "[classify][property]") {
  const SddProblem cp = const_phi_problem();
  const auto segs = classify(integrate(cp, 0.78, 1e-3), cp.delay);
  for (std::size_t i = 0; i < segs.size(); ++i) {
    CHECK(segs[i].t_start < segs[i].t_end);
    if (i > 0) {
      CHECK(segs[i].t_start == segs[i - 1].t_end);
      CHECK(segs[i].color != segs[i - 1].color);
    }
  }
}

TEST_CASE("exact trajectories reproduce declared colors", "[classify][property]") {
  const KeyParams kp;
  const DelaySpec abs = DelaySpec::abs(kp.h);
  for (double tau : oracle::tau_grid()) {
    for (Color c : {Color::Yellow, Color::Blue}) {
      const auto s = key_family(kp, c, tau);
      check_matches_declared(s, abs, s.window.hi);
    }
  }
  check_matches_declared(key_family(kp, Color::Red, 0.0), abs, 2.0);
  for (const auto& s : example2_solutions(0.5)) check_matches_declared(s, abs, s.window.bounded() ? s.window.hi : 1.0);
  for (const auto& s : driver_solutions()) {
    check_matches_declared(s, DelaySpec::linear(1.0, 0.0, 5.0), s.window.bounded() ? s.window.hi : 2.0);
  }
}

TEST_CASE("first color is stable as the red tolerance shrinks", "[classify][property]") {
  const KeyParams kp;
  const SddProblem p = key2026_problem(kp);
  for (Color c : {Color::Yellow, Color::Blue}) {
    const auto sol = key_family(kp, c, 0.0);
    const Trajectory tr = integrate(p, 0.5, 1e-3, seed_branch(p, branch_spec(sol), 1e-2));
    const double sd0 = s_dot(tr, p.delay, tr.nodes().front().t);
    REQUIRE(std::fabs(sd0) > 1e-8);
    const Color first = classify(tr, p.delay, 1e-8).front().color;
    CHECK(first == c);
    for (double tol : {1e-9, 1e-10, 1e-11, 1e-12}) CHECK(classify(tr, p.delay, tol).front().color == first);
  }
  const SddProblem cp = const_phi_problem();
  const Trajectory tc = integrate(cp, 0.5, 1e-3);
  for (double tol : {1e-8, 1e-9, 1e-12}) CHECK(classify(tc, cp.delay, tol).front().color == Color::Yellow);
}

TEST_CASE("find_nonlipschitz examples", "[classify]") {
  CHECK(find_nonlipschitz(key2026_phi({})) == std::vector<double>{-1.0});
  CHECK(find_nonlipschitz(linear_ic_problem().phi).empty());
  CHECK(find_nonlipschitz(driver1963_problem().phi) == std::vector<double>{-4.0});
  CHECK(find_nonlipschitz(example2010_phi(0.25)) == std::vector<double>{-1.0});
  CHECK(find_nonlipschitz(InitialFunction::constant(1.0, 1.0)).empty());
  oracle::for_each_key([](const oracle::Key& k) {
    CHECK(find_nonlipschitz(key2026_phi(support::key_params(k))) == std::vector<double>{-1.0});
  });
}

TEST_CASE("estimate_holder examples", "[classify]") {
  SECTION("right side, A = 1, alpha = 1/2") {
    const HolderEstimate e = estimate_holder(key2026_phi({}), -1.0, Side::Right);
    CHECK(e.exponent >= 0.48);
    CHECK(e.exponent <= 0.52);
    CHECK(e.samples >= 8);
  }
  SECTION("left side, B = 2, beta = 1/4") {
    KeyParams kp;
    kp.B = 2.0;
    kp.beta = 0.25;
    const HolderEstimate e = estimate_holder(key2026_phi(kp), -1.0, Side::Left);
    CHECK_THAT(e.coeff, WithinRel(2.0, 0.05));
    CHECK_THAT(e.exponent, WithinRel(0.25, 0.05));
  }
  SECTION("linear segment") {
    const HolderEstimate e = estimate_holder(linear_ic_problem().phi, -1.0, Side::Right);
    CHECK_THAT(e.exponent, WithinAbs(1.0, 1e-6));
    CHECK_THAT(e.coeff, WithinRel(2.0, 1e-6));
  }
  SECTION("errors") {
    try {
      (void)estimate_holder(InitialFunction::constant(1.0, 1.0), -0.5, Side::Left);
      FAIL("expected a degenerate fit");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Singular);
    }
    CHECK_THROWS_AS(estimate_holder(key2026_phi({}), -2.0, Side::Right), Error);
    CHECK_THROWS_AS(estimate_holder(key2026_phi({}), -1.99, Side::Left), Error);
  }
}

TEST_CASE("estimate_holder agrees with a reference log-log fit", "[classify][property]") {
  oracle::for_each_key([](const oracle::Key& k) {
    const InitialFunction phi = key2026_phi(support::key_params(k));
    auto f = [&](double th) { return k.phi(th); };
    const auto [rc, rp] = oracle::holder_fit(f, -1.0, 1.0);
    const auto [lc, lp] = oracle::holder_fit(f, -1.0, -1.0);
    const HolderEstimate r = estimate_holder(phi, -1.0, Side::Right);
    const HolderEstimate l = estimate_holder(phi, -1.0, Side::Left);
    CHECK_THAT(r.exponent, WithinAbs(rp, 1e-6));
    CHECK_THAT(l.exponent, WithinAbs(lp, 1e-6));
    CHECK_THAT(r.coeff, WithinRel(rc, 1e-5));
    CHECK_THAT(l.coeff, WithinRel(lc, 1e-5));
  });
}

TEST_CASE("Hoelder coefficient scales with A", "[classify][property]") {
  for (double a : oracle::exponent_grid()) {
    KeyParams one;
    one.alpha = a;
    KeyParams two = one;
    two.A = 2.0;
    const HolderEstimate e1 = estimate_holder(key2026_phi(one), -1.0, Side::Right);
    const HolderEstimate e2 = estimate_holder(key2026_phi(two), -1.0, Side::Right);
    CHECK_THAT(e2.coeff / e1.coeff, WithinRel(2.0, 0.05));
    CHECK(std::fabs(e2.exponent - e1.exponent) < 0.01);
  }
}
