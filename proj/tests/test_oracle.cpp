#include <cmath>

#include "catch_amalgamated.hpp"
#include "oracles.hpp"
#include "sdd/sdd.hpp"
#include "support.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using namespace sdd;

namespace {

double val(const ClosedFormSolution& s, double t) { return s.value(t).value(); }

}  // namespace

TEST_CASE("driver closed forms", "[oracle]") {
  const auto sols = driver_solutions();
  REQUIRE(sols.size() == 2);
  CHECK(sols[0].family == Color::Red);
  CHECK(sols[1].family == Color::Yellow);
  CHECK(val(sols[0], 1.0) == 5.0);
  CHECK(val(sols[1], 2.0) == 2.0);
  CHECK(sols[1].derivative(0.0) == 1.0);
  CHECK(sols[1].window.hi == 2.0);
  CHECK_FALSE(sols[0].window.bounded());
}

TEST_CASE("example2010 closed forms", "[oracle]") {
  const auto sols = example2_solutions(0.5);
  REQUIRE(sols.size() == 3);
  CHECK_THAT(val(sols[1], 0.5), WithinAbs(1.25, 1e-15));
  CHECK_THAT(val(sols[2], 0.5), WithinAbs(1.75, 1e-15));
  for (double a : oracle::exponent_grid()) {
    for (const auto& s : example2_solutions(a)) CHECK(val(s, 0.0) == 1.0);
  }
  CHECK_THROWS_AS(example2_solutions(1.0), Error);
  CHECK_THROWS_AS(example2_solutions(0.0), Error);
}

TEST_CASE("key families against the reference formulas", "[oracle]") {
  SECTION("frozen values for A = 1, alpha = 1/2") {
    const KeyParams kp;
    CHECK_THAT(kp.yellow_coeff(), WithinAbs(0.25, 1e-15));
    CHECK_THAT(val(key_family(kp, Color::Yellow, 0.0), 0.5), WithinAbs(1.4375, 1e-15));
    for (double t : {0.0, 0.7, 3.0}) CHECK(val(key_family(kp, Color::Red, 0.0), t) == 1.0 + t);
  }
  SECTION("full grid") {
    oracle::for_each_key([](const oracle::Key& k) {
      const KeyParams kp = support::key_params(k);
      CHECK_THAT(kp.yellow_coeff(), WithinRel(k.C(), 1e-12));
      CHECK_THAT(kp.blue_coeff(), WithinRel(k.D(), 1e-12));
      for (double tau : oracle::tau_grid()) {
        const auto y = key_family(kp, Color::Yellow, tau);
        const auto b = key_family(kp, Color::Blue, tau);
        CHECK_THAT(y.window.hi - tau, WithinRel(k.yellow_sigma(), 1e-12));
        CHECK_THAT(b.window.hi - tau, WithinRel(k.blue_sigma(), 1e-12));
        for (double t : linspace(0.0, y.window.hi, 7)) CHECK_THAT(val(y, t), WithinAbs(k.yellow(t, tau), 1e-12));
        for (double t : linspace(0.0, b.window.hi, 7)) CHECK_THAT(val(b, t), WithinAbs(k.blue(t, tau), 1e-12));
      }
    });
  }
  CHECK_THROWS_AS(key_family(KeyParams{-1.0}, Color::Yellow, 0.0), Error);
  CHECK_THROWS_AS(key_family(KeyParams{}, Color::Yellow, -0.1), Error);
}

TEST_CASE("family windows", "[oracle]") {
  const KeyParams kp;
  CHECK_THAT(family_window(kp, Color::Yellow, 0.0).hi, WithinAbs(std::sqrt(2.0), 1e-14));
  CHECK_THAT(family_window(kp, Color::Blue, 0.0).hi, WithinAbs(2.0, 1e-14));
  CHECK_FALSE(family_window(kp, Color::Red, 0.0).bounded());
  CHECK_THAT(family_window(kp, Color::Yellow, 0.3).hi, WithinAbs(0.3 + std::sqrt(2.0), 1e-14));
}

TEST_CASE("residual examples", "[oracle]") {
  const SddProblem driver = driver1963_problem();
  CHECK_THAT(residual(driver, driver_solutions()[1], 0.5), WithinAbs(0.0, 1e-12));

  // y = 4 + t + t^2, the would-be third solution.
  const ClosedFormSolution third{"y^3", Color::Blue, 0.0, 4.0, 1.0, 1.0, 2.0, Window{0.0, 2.0}, {}};
  CHECK_THAT(residual(driver, third, 0.1), WithinAbs(0.4, 1e-12));
  for (double t : {0.05, 0.2, 0.5, 0.9}) {
    CHECK_THAT(residual(driver, third, t), WithinAbs(oracle::driver_third_candidate_residual(t), 1e-12));
  }

  const SddProblem key = key2026_problem({});
  const auto red = key_family({}, Color::Red, 0.0);
  for (double t : {0.0, 0.4, 1.0, 1.7}) CHECK(residual(key, red, t) == 0.0);

  SECTION("delayed argument below -h") {
    const ClosedFormSolution steep{"steep", Color::Red, 0.0, 1.0, 5.0, 0.0, 2.0, Window{0.0, 1.0}, {}};
    try {
      (void)residual(key, steep, 0.5);
      FAIL("expected a domain error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Domain);
    }
  }
  SECTION("time outside the window") { CHECK_THROWS_AS(residual(key, key_family({}, Color::Yellow, 0.0), 5.0), Error); }
  SECTION("self-referencing history") {
    const SddProblem cp = const_phi_problem();
    const ClosedFormSolution line{"line", Color::Yellow, 0.0, 1.0, -1.0, 0.0, 2.0, Window{0.0, 0.6}, {}};
    // At t = 0.55, s = 0.1 > 0 reads the candidate itself: x(s) = 0.9, so residual = -1 + 0.9.
    CHECK_THAT(residual(cp, line, 0.55), WithinAbs(-0.1, 1e-14));
  }
}

TEST_CASE("every registered closed form has residual below 1e-9", "[oracle][property]") {
  for (const auto& entry : registry()) {
    const ProblemInstance inst = make_problem(entry.key);
    for (const auto& s : closed_forms(inst, oracle::tau_grid())) {
      INFO(entry.key << " " << s.label << " tau " << s.tau);
      CHECK(max_residual(inst.problem, s, 100, kDefaultHorizon) <= 1e-9);
    }
  }
  for (double a : oracle::exponent_grid()) {
    const SddProblem p = example2010_problem(a);
    for (const auto& s : example2_solutions(a)) CHECK(max_residual(p, s, 100) <= 1e-9);
  }
}

TEST_CASE("family continuity, derivatives and ordering", "[oracle][property]") {
  oracle::for_each_key([](const oracle::Key& k) {
    const KeyParams kp = support::key_params(k);
    const auto red = key_family(kp, Color::Red, 0.0);
    for (double tau : oracle::tau_grid()) {
      const auto y = key_family(kp, Color::Yellow, tau);
      const auto b = key_family(kp, Color::Blue, tau);
      CHECK_THAT(val(y, tau) - val(red, tau), WithinAbs(0.0, 1e-12));
      CHECK_THAT(val(b, tau) - val(red, tau), WithinAbs(0.0, 1e-12));
      CHECK(y.derivative(tau) == red.derivative(tau));
      CHECK_THAT(y.derivative(tau + 1e-12), WithinAbs(1.0, 1e-3));
      for (double t : linspace(tau, std::min(y.window.hi, b.window.hi), 12)) {
        if (t <= tau) continue;
        CHECK(val(b, t) > val(red, t));
        CHECK(val(red, t) > val(y, t));
      }
      // stored derivative against a central difference of the value
      const double t = tau + 0.5 * (y.window.hi - tau);
      const double hstep = 1e-6;
      const double fd = (val(y, t + hstep) - val(y, t - hstep)) / (2 * hstep);
      CHECK_THAT(y.derivative(t), WithinAbs(fd, 1e-6));
    }
  });
}

TEST_CASE("declared colors", "[oracle]") {
  const auto y = key_family({}, Color::Yellow, 0.3);
  const auto spans = y.declared_colors(1.0);
  REQUIRE(spans.size() == 2);
  CHECK(spans[0].color == Color::Red);
  CHECK(spans[0].t_end == 0.3);
  CHECK(spans[1].color == Color::Yellow);
  CHECK(key_family({}, Color::Blue, 0.0).declared_colors(1.0).size() == 1);
  CHECK(color_from_string("blue") == Color::Blue);
  CHECK_THROWS_AS(color_from_string("green"), Error);
}
