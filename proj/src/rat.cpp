#include "stateid/rat.hpp"

#include <cctype>
#include <cstdio>
#include <ostream>

namespace stateid {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

[[noreturn]] void malformed(std::string_view text) {
  throw Error(Errc::MalformedNumber, "cannot parse '" + std::string(text) + "' as a rational");
}

}  // namespace

Rat::Rat(std::int64_t n) : v_(static_cast<long>(n)) {
  if (n < 0) throw Error(Errc::NegativeValue, std::to_string(n));
}

Rat::Rat(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error(Errc::DivisionByZero, "zero denominator");
  if ((num < 0) != (den < 0) && num != 0)
    throw Error(Errc::NegativeValue, std::to_string(num) + "/" + std::to_string(den));
  v_ = mpq_class(static_cast<long>(num), static_cast<long>(den));
  v_.canonicalize();
}

Rat Rat::from_mpq(mpq_class v) {
  v.canonicalize();
  if (sgn(v) < 0) throw Error(Errc::NegativeValue, v.get_str());
  Rat r;
  r.v_ = std::move(v);
  return r;
}

Rat& Rat::operator+=(const Rat& o) {
  v_ += o.v_;
  return *this;
}

Rat& Rat::operator-=(const Rat& o) {
  if (cmp(v_, o.v_) < 0)
    throw Error(Errc::NegativeValue, str() + " - " + o.str() + " is negative");
  v_ -= o.v_;
  return *this;
}

Rat& Rat::operator*=(const Rat& o) {
  v_ *= o.v_;
  return *this;
}

Rat& Rat::operator/=(const Rat& o) {
  if (o.is_zero()) throw Error(Errc::DivisionByZero, str() + " / 0");
  v_ /= o.v_;
  return *this;
}

std::string Rat::str() const {
  if (v_.get_den() == 1) return v_.get_num().get_str();
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::string Rat::decimal(int digits) const {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v_.get_d());
  return buf;
}

Rat parse_rat(std::string_view text) {
  // Trim surrounding whitespace.
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) malformed(text);
  if (text.front() == '-') {
    // Only report NegativeValue for something that would otherwise parse.
    if (parse_rat(text.substr(1)).is_zero()) return Rat{};
    throw Error(Errc::NegativeValue, std::string(text));
  }
  if (text.front() == '+') text.remove_prefix(1);

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = text.substr(0, slash);
    auto den = text.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) malformed(text);
    mpz_class d(std::string(den), 10);
    if (d == 0) throw Error(Errc::DivisionByZero, std::string(text));
    return Rat::from_mpq(mpq_class(mpz_class(std::string(num), 10), d));
  }

  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    auto whole = text.substr(0, dot);
    auto frac = text.substr(dot + 1);
    if (whole.empty() && frac.empty()) malformed(text);
    if (!whole.empty() && !all_digits(whole)) malformed(text);
    if (!frac.empty() && !all_digits(frac)) malformed(text);
    std::string digits = std::string(whole) + std::string(frac);
    mpz_class num(digits.empty() ? std::string("0") : digits, 10);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
    return Rat::from_mpq(mpq_class(num, den));
  }

  if (!all_digits(text)) malformed(text);
  return Rat::from_mpq(mpq_class(mpz_class(std::string(text), 10)));
}

std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

}  // namespace stateid
