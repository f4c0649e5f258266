#include "sponge/rational.hpp"

#include <cctype>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "sponge/error.hpp"

namespace sponge {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

mpz_class pow10(unsigned k) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, k);
  return r;
}

// Renders a non-negative integer n scaled by 10^-frac as a decimal string.
std::string fixed_point_string(const mpz_class& n, unsigned frac) {
  std::string digits = n.get_str();
  if (frac == 0) return digits;
  if (digits.size() <= frac) digits.insert(0, frac + 1 - digits.size(), '0');
  digits.insert(digits.size() - frac, 1, '.');
  return digits;
}

}  // namespace

Rational::Rational(long long n) {
  // mpq_class has no long long constructor.
  v_ = mpq_class(mpz_class(std::to_string(n)));
}

Rational::Rational(long num, long den) {
  if (den == 0) throw MathError("zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rational::Rational(mpq_class v) : v_(std::move(v)) {
  if (v_.get_den() == 0) throw MathError("zero denominator");
  v_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  const auto slash = body.find('/');
  const std::string_view num = body.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? std::string_view{"1"}
                                                               : body.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den)) {
    throw std::invalid_argument("not a rational literal: '" + std::string(text) + "'");
  }
  mpz_class n{std::string(num)}, d{std::string(den)};
  if (d == 0) throw MathError("zero denominator in '" + std::string(text) + "'");
  if (negative) n = -n;
  return Rational(mpq_class(n, d));
}

Rational Rational::abs() const {
  Rational r;
  r.v_ = ::abs(v_);
  return r;
}

Rational Rational::reciprocal() const {
  if (is_zero()) throw MathError("reciprocal of zero");
  Rational r;
  mpq_inv(r.v_.get_mpq_t(), v_.get_mpq_t());
  return r;
}

std::string Rational::str() const { return v_.get_str(); }

std::string Rational::decimal(int digits) const {
  if (is_zero()) return "0";
  // Scale so that the integer part carries `digits` significant figures.
  const mpz_class num = ::abs(v_.get_num());
  const mpz_class den = v_.get_den();
  // magnitude = number of integer digits, i.e. 10^(magnitude-1) <= |x| < 10^magnitude.
  long magnitude = static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 10)) -
                   static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 10)) - 1;
  while (magnitude >= 0 ? num >= den * pow10(static_cast<unsigned>(magnitude))
                        : num * pow10(static_cast<unsigned>(-magnitude)) >= den) {
    ++magnitude;
  }
  const long frac = std::max<long>(0, digits - magnitude);
  mpz_class scaled = num * pow10(static_cast<unsigned>(frac));
  mpz_class q, r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), scaled.get_mpz_t(), den.get_mpz_t());
  if (2 * r >= den) ++q;
  std::string s = fixed_point_string(q, static_cast<unsigned>(frac));
  if (s.find('.') != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  return sign() < 0 ? "-" + s : s;
}

Rational& Rational::operator+=(const Rational& o) {
  v_ += o.v_;
  return *this;
}
Rational& Rational::operator-=(const Rational& o) {
  v_ -= o.v_;
  return *this;
}
Rational& Rational::operator*=(const Rational& o) {
  v_ *= o.v_;
  return *this;
}
Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw MathError("division by zero");
  v_ /= o.v_;
  return *this;
}

Rational operator-(const Rational& a) {
  Rational r;
  r.v_ = -a.v_;
  return r;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Rational pow(const Rational& base, unsigned exponent) {
  mpz_class n, d;
  mpz_pow_ui(n.get_mpz_t(), base.raw().get_num_mpz_t(), exponent);
  mpz_pow_ui(d.get_mpz_t(), base.raw().get_den_mpz_t(), exponent);
  return Rational(mpq_class(n, d));
}

const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }
const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }

std::pair<Rational, Rational> sqrt_bracket(const Rational& x, unsigned digits) {
  if (x.sign() < 0) throw MathError("square root of negative value " + x.str());
  const mpz_class& num = x.raw().get_num();
  const mpz_class& den = x.raw().get_den();
  mpz_class rn, rd;
  if (mpz_perfect_square_p(num.get_mpz_t()) && mpz_perfect_square_p(den.get_mpz_t())) {
    mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
    Rational exact(mpq_class(rn, rd));
    return {exact, exact};
  }
  // floor(sqrt(num * den * 10^(2k))) / (den * 10^k) <= sqrt(num/den)
  const mpz_class scale = pow10(digits);
  mpz_class radicand = num * den * scale * scale;
  mpz_sqrt(rn.get_mpz_t(), radicand.get_mpz_t());
  rd = den * scale;
  Rational lo(mpq_class(rn, rd));
  Rational hi(mpq_class(rn + 1, rd));
  return {lo, hi};
}

std::string sqrt_decimal(const Rational& x, int digits) {
  return sqrt_bracket(x, static_cast<unsigned>(digits) + 10).first.decimal(digits);
}

}  // namespace sponge
