#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace ctmap {

__extension__ using Int128 = __int128;

// Exact rational with a positive, reduced denominator.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t value) : num_(value) {}  // NOLINT(implicit)
  Rational(std::int64_t num, std::int64_t den);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  // Smallest multiple of 1/step that is >= *this.
  Rational ceil_to_grid(std::int64_t step) const;
  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a) { return Rational(-a.num_, a.den_); }

  friend bool operator==(const Rational& a, const Rational& b) noexcept {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept {
    const Int128 lhs = static_cast<Int128>(a.num_) * b.den_;
    const Int128 rhs = static_cast<Int128>(b.num_) * a.den_;
    return lhs <=> rhs;
  }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

// Exact value in (1/2)Z, stored as twice the value. Gromov products and
// four-point defects of integer metrics live here.
class HalfInt {
 public:
  constexpr HalfInt() = default;
  static constexpr HalfInt from_twice(std::int64_t twice) noexcept {
    HalfInt h;
    h.twice_ = twice;
    return h;
  }
  static constexpr HalfInt from_int(std::int64_t value) noexcept { return from_twice(2 * value); }

  constexpr std::int64_t twice() const noexcept { return twice_; }
  constexpr bool is_integer() const noexcept { return twice_ % 2 == 0; }
  Rational to_rational() const { return Rational(twice_, 2); }
  std::string str() const;

  friend constexpr HalfInt operator+(HalfInt a, HalfInt b) noexcept { return from_twice(a.twice_ + b.twice_); }
  friend constexpr HalfInt operator-(HalfInt a, HalfInt b) noexcept { return from_twice(a.twice_ - b.twice_); }
  friend constexpr HalfInt operator*(std::int64_t k, HalfInt a) noexcept { return from_twice(k * a.twice_); }
  friend constexpr auto operator<=>(HalfInt a, HalfInt b) noexcept = default;

 private:
  std::int64_t twice_ = 0;
};

}  // namespace ctmap
