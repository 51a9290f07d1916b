#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace symdyn {

using Rational = mpq_class;
using Integer = mpz_class;

// Accepts "p/q", "p" or a finite decimal such as "0.25".
Rational parse_rational(std::string_view text);
// Always "p/q" in lowest terms, "0/1" for zero.
std::string format_rational(const Rational& value);

Rational pow(const Rational& base, long exponent);
Rational abs(const Rational& value);
Rational floor_rational(const Rational& value);
// value - floor(value), in [0, 1).
Rational frac(const Rational& value);

// Closed interval [lo, hi] of the real line.
struct Interval {
  Rational lo;
  Rational hi;

  Rational length() const { return hi - lo; }
  Rational midpoint() const { return (lo + hi) / 2; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  bool interior_contains(const Rational& x) const { return lo < x && x < hi; }
  bool contains(const Interval& other) const { return lo <= other.lo && other.hi <= hi; }
  Interval shifted(const Rational& by) const { return {lo + by, hi + by}; }
  friend bool operator==(const Interval& a, const Interval& b) { return a.lo == b.lo && a.hi == b.hi; }
};

std::string format_interval(const Interval& interval);

// Distance on R/Z.
Rational circle_distance(const Rational& x, const Rational& y);

}  // namespace symdyn
