#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>

#include <gmpxx.h>

namespace sponge {

/// Exact arbitrary-precision fraction, always held in lowest terms with a
/// positive denominator. Thin value wrapper over GMP's mpq_class.
class Rational {
 public:
  Rational() = default;
  Rational(int n) : v_(n) {}  // NOLINT: implicit from integers on purpose
  Rational(long n) : v_(n) {}  // NOLINT
  Rational(long long n);       // NOLINT
  Rational(long num, long den);
  explicit Rational(mpq_class v);

  /// Parses "p", "-p" or "p/q". Throws std::invalid_argument on bad syntax
  /// and MathError on a zero denominator.
  static Rational parse(std::string_view text);

  const mpq_class& raw() const { return v_; }
  mpz_class numerator() const { return v_.get_num(); }
  mpz_class denominator() const { return v_.get_den(); }

  int sign() const { return sgn(v_); }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const { return v_.get_den() == 1; }

  Rational abs() const;
  Rational square() const { return *this * *this; }
  Rational reciprocal() const;

  /// Canonical "p/q" text; integers print without the denominator.
  std::string str() const;
  /// Decimal approximation with `digits` significant digits.
  std::string decimal(int digits = 12) const;
  double to_double() const { return v_.get_d(); }

  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a);

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpq_class v_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

Rational pow(const Rational& base, unsigned exponent);
const Rational& min(const Rational& a, const Rational& b);
const Rational& max(const Rational& a, const Rational& b);

/// Rational bracket lo <= sqrt(x) <= hi with hi - lo <= 10^-digits.
/// Both ends are exact; lo == hi when x is a perfect square.
std::pair<Rational, Rational> sqrt_bracket(const Rational& x, unsigned digits = 30);

/// Decimal rendering of sqrt(x) with `digits` significant digits.
std::string sqrt_decimal(const Rational& x, int digits = 12);

}  // namespace sponge
