#include "normcomb/rational.hpp"

#include <charconv>
#include <limits>

#include "normcomb/error.hpp"

namespace normcomb {

namespace {

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

} // namespace

Rational Rational::from_wide(__int128 n, __int128 d) {
  if (d == 0)
    throw Error(ErrorKind::DivisionByZero, "rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const __int128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  constexpr auto lo = std::numeric_limits<std::int64_t>::min() + 1;
  constexpr auto hi = std::numeric_limits<std::int64_t>::max();
  if (n < lo || n > hi || d > hi)
    throw Error(ErrorKind::Overflow, "rational coefficient exceeds 64 bits");
  Rational r;
  r.num_ = static_cast<std::int64_t>(n);
  r.den_ = static_cast<std::int64_t>(d);
  return r;
}

Rational::Rational(std::int64_t n, std::int64_t d) {
  *this = from_wide(n, d);
}

Rational Rational::operator-() const { return from_wide(-__int128(num_), den_); }

Rational &Rational::operator+=(const Rational &o) {
  if (den_ == 1 && o.den_ == 1)
    return *this = from_wide(__int128(num_) + o.num_, 1);
  return *this = from_wide(__int128(num_) * o.den_ + __int128(o.num_) * den_,
                           __int128(den_) * o.den_);
}

Rational &Rational::operator-=(const Rational &o) { return *this += -o; }

Rational &Rational::operator*=(const Rational &o) {
  return *this = from_wide(__int128(num_) * o.num_, __int128(den_) * o.den_);
}

Rational &Rational::operator/=(const Rational &o) {
  if (o.num_ == 0)
    throw Error(ErrorKind::DivisionByZero, "rational division by zero");
  return *this = from_wide(__int128(num_) * o.den_, __int128(den_) * o.num_);
}

std::strong_ordering operator<=>(const Rational &a, const Rational &b) {
  return __int128(a.num_) * b.den_ <=> __int128(b.num_) * a.den_;
}

std::string Rational::str() const {
  if (den_ == 1)
    return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(std::string_view text) {
  auto slash = text.find('/');
  auto parse_int = [&](std::string_view s) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty())
      throw Error(ErrorKind::Parse, "bad rational '" + std::string(text) + "'");
    return v;
  };
  if (slash == std::string_view::npos)
    return Rational(parse_int(text));
  return Rational(parse_int(text.substr(0, slash)),
                  parse_int(text.substr(slash + 1)));
}

} // namespace normcomb
