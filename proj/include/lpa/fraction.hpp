#pragma once

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace lpa {

using BigInt = boost::multiprecision::cpp_int;

/// Exact permission amount in (0, 1], always kept in lowest terms.
///
/// Shared borrowing halves fractions without bound, so both parts are
/// arbitrary-precision integers.
class Fraction {
 public:
  /// The full permission, 1/1.
  Fraction() = default;

  /// Throws std::domain_error unless 0 < num/den <= 1.
  Fraction(BigInt num, BigInt den);

  static Fraction one() { return {}; }

  /// Accepts "n/d" or "1".
  static std::optional<Fraction> parse(std::string_view text);

  const BigInt& numerator() const { return num_; }
  const BigInt& denominator() const { return den_; }
  bool is_one() const { return num_ == den_; }

  /// Always "n/d", including "1/1".
  std::string str() const;

  friend bool operator==(const Fraction&, const Fraction&) = default;
  friend std::strong_ordering operator<=>(const Fraction& a, const Fraction& b);

 private:
  BigInt num_ = 1;
  BigInt den_ = 1;
};

/// Thrown when a sum of fractions would exceed 1; that would mean more than
/// the whole of a cell is being accounted for.
class FractionOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

Fraction frac_half(const Fraction& f);
Fraction frac_add(const Fraction& a, const Fraction& b);

/// a - b, or nullopt when the difference is exactly zero. Throws
/// std::domain_error when b > a.
std::optional<Fraction> frac_sub(const Fraction& a, const Fraction& b);

}  // namespace lpa
