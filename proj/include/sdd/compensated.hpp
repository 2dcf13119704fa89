/**
 * @file compensated.hpp
 * @brief Unevaluated double-double sums for delayed-argument bookkeeping.
 *
 * Near a non-Lipschitz point of the initial function, a rounding error of one
 * ulp in s(t) is amplified by the Hoelder exponent into an O(1e-8) error in
 * the right-hand side. Worse, the branch structure is unstable: any nonzero
 * offset from the anchor selects a yellow or blue branch. Times, states and
 * delayed arguments are therefore carried as hi + lo pairs, which keeps the
 * offset from the anchor exact for the linear data the red branch produces.
 */
#pragma once

#include <cmath>

namespace sdd {

struct Compensated {
  double hi = 0.0;
  double lo = 0.0;

  constexpr Compensated() = default;
  constexpr Compensated(double v) : hi(v), lo(0.0) {}  // NOLINT(google-explicit-constructor)
  constexpr Compensated(double h, double l) : hi(h), lo(l) {}

  [[nodiscard]] constexpr double value() const noexcept { return hi + lo; }
};

namespace detail {

[[nodiscard]] inline Compensated two_sum(double a, double b) noexcept {
  const double s = a + b;
  const double bb = s - a;
  const double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}

[[nodiscard]] inline Compensated quick_two_sum(double a, double b) noexcept {
  const double s = a + b;
  return {s, b - (s - a)};
}

[[nodiscard]] inline Compensated two_prod(double a, double b) noexcept {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

}  // namespace detail

[[nodiscard]] inline Compensated operator+(const Compensated& a, const Compensated& b) noexcept {
  Compensated s = detail::two_sum(a.hi, b.hi);
  const Compensated t = detail::two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = detail::quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return detail::quick_two_sum(s.hi, s.lo);
}

[[nodiscard]] inline Compensated operator-(const Compensated& a) noexcept { return {-a.hi, -a.lo}; }

[[nodiscard]] inline Compensated operator-(const Compensated& a, const Compensated& b) noexcept {
  return a + (-b);
}

[[nodiscard]] inline Compensated operator*(const Compensated& a, double b) noexcept {
  Compensated p = detail::two_prod(a.hi, b);
  p.lo += a.lo * b;
  return detail::quick_two_sum(p.hi, p.lo);
}

[[nodiscard]] inline Compensated operator*(const Compensated& a, const Compensated& b) noexcept {
  Compensated p = detail::two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return detail::quick_two_sum(p.hi, p.lo);
}

[[nodiscard]] inline Compensated abs(const Compensated& a) noexcept {
  return (a.hi < 0.0 || (a.hi == 0.0 && a.lo < 0.0)) ? -a : a;
}

[[nodiscard]] inline bool operator<(const Compensated& a, const Compensated& b) noexcept {
  return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo);
}
[[nodiscard]] inline bool operator==(const Compensated& a, const Compensated& b) noexcept {
  return a.hi == b.hi && a.lo == b.lo;
}
[[nodiscard]] inline bool operator<=(const Compensated& a, const Compensated& b) noexcept {
  return !(b < a);
}
[[nodiscard]] inline bool operator>(const Compensated& a, const Compensated& b) noexcept { return b < a; }
[[nodiscard]] inline bool operator>=(const Compensated& a, const Compensated& b) noexcept {
  return !(a < b);
}

/// Signed distance a - b rounded to double; exact when a and b are close.
[[nodiscard]] inline double offset(const Compensated& a, double b) noexcept {
  return (a.hi - b) + a.lo;
}

}  // namespace sdd
