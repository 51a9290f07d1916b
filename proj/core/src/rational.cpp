#include "symdyn/rational.hpp"

#include "symdyn/errors.hpp"

#include <cctype>

namespace symdyn {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  while (!body.empty() && std::isspace(static_cast<unsigned char>(body.front()))) body.remove_prefix(1);
  while (!body.empty() && std::isspace(static_cast<unsigned char>(body.back()))) body.remove_suffix(1);
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  Rational result;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto num = body.substr(0, slash);
    auto den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) throw InputError("malformed rational: " + std::string(text));
    Integer d{std::string(den)};
    if (d == 0) throw InputError("zero denominator: " + std::string(text));
    result = Rational(Integer{std::string(num)}, d);
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    auto whole = body.substr(0, dot);
    auto fraction = body.substr(dot + 1);
    if ((!whole.empty() && !all_digits(whole)) || !all_digits(fraction)) {
      throw InputError("malformed rational: " + std::string(text));
    }
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, fraction.size());
    Integer digits{std::string(whole.empty() ? "0" : whole) + std::string(fraction)};
    result = Rational(digits, scale);
  } else {
    if (!all_digits(body)) throw InputError("malformed rational: " + std::string(text));
    result = Rational(Integer{std::string(body)});
  }
  result.canonicalize();
  return negative ? Rational(-result) : result;
}

std::string format_rational(const Rational& value) {
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

Rational pow(const Rational& base, long exponent) {
  Rational b = exponent < 0 ? Rational(1 / base) : base;
  unsigned long e = exponent < 0 ? static_cast<unsigned long>(-exponent) : static_cast<unsigned long>(exponent);
  Integer num, den;
  mpz_pow_ui(num.get_mpz_t(), b.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), b.get_den_mpz_t(), e);
  return Rational(num, den);
}

Rational abs(const Rational& value) { return value < 0 ? Rational(-value) : value; }

Rational floor_rational(const Rational& value) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return Rational(q);
}

Rational frac(const Rational& value) { return value - floor_rational(value); }

std::string format_interval(const Interval& interval) {
  return "[" + format_rational(interval.lo) + ", " + format_rational(interval.hi) + "]";
}

Rational circle_distance(const Rational& x, const Rational& y) {
  Rational d = frac(x - y);
  Rational other = 1 - d;
  return d < other ? d : other;
}

}  // namespace symdyn
