#include "lpa/fraction.hpp"

namespace lpa {

Fraction::Fraction(BigInt num, BigInt den) {
  if (den <= 0 || num <= 0 || num > den) {
    throw std::domain_error("fraction " + num.str() + "/" + den.str() + " is outside (0, 1]");
  }
  BigInt g = boost::multiprecision::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

std::optional<Fraction> Fraction::parse(std::string_view text) {
  auto digits = [](std::string_view s) {
    return !s.empty() && s.find_first_not_of("0123456789") == std::string_view::npos;
  };
  std::size_t slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? "1" : text.substr(slash + 1);
  if (!digits(num) || !digits(den)) return std::nullopt;
  BigInt n(std::string{num});
  BigInt d(std::string{den});
  if (d <= 0 || n <= 0 || n > d) return std::nullopt;
  return Fraction(std::move(n), std::move(d));
}

std::string Fraction::str() const { return num_.str() + "/" + den_.str(); }

std::strong_ordering operator<=>(const Fraction& a, const Fraction& b) {
  BigInt lhs = a.num_ * b.den_;
  BigInt rhs = b.num_ * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Fraction frac_half(const Fraction& f) {
  return Fraction(f.numerator(), f.denominator() * 2);
}

Fraction frac_add(const Fraction& a, const Fraction& b) {
  BigInt num = a.numerator() * b.denominator() + b.numerator() * a.denominator();
  BigInt den = a.denominator() * b.denominator();
  if (num > den) {
    throw FractionOverflow("fraction sum " + a.str() + " + " + b.str() + " exceeds 1");
  }
  return Fraction(std::move(num), std::move(den));
}

std::optional<Fraction> frac_sub(const Fraction& a, const Fraction& b) {
  BigInt num = a.numerator() * b.denominator() - b.numerator() * a.denominator();
  if (num < 0) {
    throw std::domain_error("fraction difference " + a.str() + " - " + b.str() + " is negative");
  }
  if (num == 0) return std::nullopt;
  return Fraction(std::move(num), a.denominator() * b.denominator());
}

}  // namespace lpa
