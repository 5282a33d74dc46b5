#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "stateid/error.hpp"

namespace stateid {

/// Exact nonnegative rational, always in lowest terms.
///
/// Subtraction that would go below zero throws `NegativeValue`; every
/// quantity in this library is a probability or a sum/product of them.
class Rat {
 public:
  Rat() = default;
  Rat(std::int64_t n);  // NOLINT(google-explicit-constructor)
  Rat(std::int64_t num, std::int64_t den);
  static Rat from_mpq(mpq_class v);

  const mpq_class& mpq() const { return v_; }
  mpz_class numerator() const { return v_.get_num(); }
  mpz_class denominator() const { return v_.get_den(); }

  bool is_zero() const { return sgn(v_) == 0; }
  bool is_one() const { return v_ == 1; }

  Rat& operator+=(const Rat& o);
  Rat& operator-=(const Rat& o);
  Rat& operator*=(const Rat& o);
  Rat& operator/=(const Rat& o);

  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }

  friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
    int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  /// "p/q", or "p" when the denominator is 1.
  std::string str() const;
  /// Decimal rendering with `digits` significant digits (display only).
  std::string decimal(int digits = 6) const;
  double to_double() const { return v_.get_d(); }

 private:
  mpq_class v_{0};
};

/// Parses "p/q", an integer, or a finite decimal ("0.12375" is 99/800).
Rat parse_rat(std::string_view text);

std::ostream& operator<<(std::ostream& os, const Rat& r);

}  // namespace stateid
