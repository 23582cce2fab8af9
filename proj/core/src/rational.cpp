#include "depq/rational.hpp"

#include <cstdlib>
#include <numeric>

#include "depq/error.hpp"

namespace depq {

namespace {

__extension__ typedef __int128 i128;

Rational make_reduced(i128 num, i128 den) {
  if (den == 0) throw InvalidArgument("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i128 a = num < 0 ? -num : num;
  i128 b = den;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    num /= a;
    den /= a;
  }
  constexpr i128 kMax = INT64_MAX;
  if (num > kMax || num < -kMax || den > kMax) throw InvalidArgument("rational overflow");
  return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

}  // namespace

Rational::Rational(std::int64_t numerator, std::int64_t denominator) {
  if (denominator == 0) throw InvalidArgument("rational with zero denominator");
  if (denominator < 0) {
    numerator = -numerator;
    denominator = -denominator;
  }
  const std::int64_t g = std::gcd(numerator, denominator);
  num_ = g > 1 ? numerator / g : numerator;
  den_ = g > 1 ? denominator / g : denominator;
}

Rational operator+(const Rational& a, const Rational& b) {
  return make_reduced(static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_,
                      static_cast<i128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return make_reduced(static_cast<i128>(a.num_) * b.den_ - static_cast<i128>(b.num_) * a.den_,
                      static_cast<i128>(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return make_reduced(static_cast<i128>(a.num_) * b.num_, static_cast<i128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw InvalidArgument("rational division by zero");
  return make_reduced(static_cast<i128>(a.num_) * b.den_, static_cast<i128>(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept {
  const i128 lhs = static_cast<i128>(a.num_) * b.den_;
  const i128 rhs = static_cast<i128>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Rational abs_diff(const Rational& a, const Rational& b) {
  return a < b ? b - a : a - b;
}

std::string Rational::to_decimal(int places) const {
  if (places < 0 || places > 18) throw InvalidArgument("decimal places out of range");
  i128 scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;

  const bool negative = num_ < 0;
  const i128 magnitude = negative ? -static_cast<i128>(num_) : static_cast<i128>(num_);
  const i128 scaled = magnitude * scale;
  i128 quotient = scaled / den_;
  const i128 remainder = scaled % den_;
  const i128 twice = remainder * 2;
  if (twice > den_ || (twice == den_ && (quotient % 2) != 0)) ++quotient;

  const i128 integer_part = quotient / scale;
  i128 fraction = quotient % scale;

  std::string int_digits;
  i128 ip = integer_part;
  do {
    int_digits.insert(int_digits.begin(), static_cast<char>('0' + static_cast<int>(ip % 10)));
    ip /= 10;
  } while (ip > 0);

  std::string out;
  if (negative && quotient != 0) out.push_back('-');
  out += int_digits;
  if (places > 0) {
    std::string frac_digits(static_cast<std::size_t>(places), '0');
    for (int i = places - 1; i >= 0; --i) {
      frac_digits[static_cast<std::size_t>(i)] = static_cast<char>('0' + static_cast<int>(fraction % 10));
      fraction /= 10;
    }
    out.push_back('.');
    out += frac_digits;
  }
  return out;
}

std::string to_string(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace depq
