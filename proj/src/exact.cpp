#include "ctmap/exact.hpp"

#include <numeric>

#include "ctmap/errors.hpp"

namespace ctmap {

namespace {

std::int64_t narrow(Int128 value) {
  if (value > INT64_MAX || value < INT64_MIN) {
    fail(ErrorKind::EntryOverflow, "rational arithmetic overflowed 64 bits");
  }
  return static_cast<std::int64_t>(value);
}

Rational make(Int128 num, Int128 den) {
  if (den == 0) fail(ErrorKind::InvalidArgument, "rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  Int128 a = num < 0 ? -num : num;
  Int128 b = den;
  while (b != 0) {
    const Int128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    num /= a;
    den /= a;
  }
  return Rational(narrow(num), narrow(den));
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
  if (den_ == 0) fail(ErrorKind::InvalidArgument, "rational with zero denominator");
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  const std::int64_t g = std::gcd(num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
}

Rational Rational::ceil_to_grid(std::int64_t step) const {
  // ceil(num * step / den) / step
  const Int128 scaled = static_cast<Int128>(num_) * step;
  Int128 q = scaled / den_;
  if (q * den_ < scaled) ++q;
  return make(q, step);
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  return make(static_cast<Int128>(a.num_) * b.den_ + static_cast<Int128>(b.num_) * a.den_,
              static_cast<Int128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  return make(static_cast<Int128>(a.num_) * b.num_, static_cast<Int128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) fail(ErrorKind::InvalidArgument, "division by zero rational");
  return make(static_cast<Int128>(a.num_) * b.den_, static_cast<Int128>(a.den_) * b.num_);
}

std::string HalfInt::str() const {
  if (is_integer()) return std::to_string(twice_ / 2);
  // twice_ is odd: value = k + 1/2 with sign handled explicitly
  const bool negative = twice_ < 0;
  const std::int64_t magnitude = negative ? -twice_ : twice_;
  return std::string(negative ? "-" : "") + std::to_string(magnitude / 2) + ".5";
}

}  // namespace ctmap
