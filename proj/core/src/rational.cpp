#include "qdioph/rational.hpp"

#include <numeric>
#include <stdexcept>

#include "qdioph/checked.hpp"

namespace qdioph {

namespace {

Rational make_normalized(__int128 num, __int128 den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  __int128 a = num < 0 ? -num : num;
  __int128 b = den;
  while (b != 0) {
    __int128 t = a % b;
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

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (num == INT64_MIN || den == INT64_MIN) throw OverflowError("rational component out of range");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::operator-() const { return Rational(checked_neg(num_), den_); }

Rational& Rational::operator+=(const Rational& o) {
  const __int128 n = static_cast<__int128>(num_) * o.den_ + static_cast<__int128>(o.num_) * den_;
  const __int128 d = static_cast<__int128>(den_) * o.den_;
  return *this = make_normalized(n, d);
}

Rational& Rational::operator-=(const Rational& o) { return *this += -o; }

Rational& Rational::operator*=(const Rational& o) {
  const __int128 n = static_cast<__int128>(num_) * o.num_;
  const __int128 d = static_cast<__int128>(den_) * o.den_;
  return *this = make_normalized(n, d);
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.num_ == 0) throw std::domain_error("rational division by zero");
  const __int128 n = static_cast<__int128>(num_) * o.den_;
  const __int128 d = static_cast<__int128>(den_) * o.num_;
  return *this = make_normalized(n, d);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
  const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Rational abs(const Rational& r) { return r.num() < 0 ? -r : r; }

}  // namespace qdioph
