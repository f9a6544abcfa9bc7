#include "susyhom/exact.hpp"

#include <cctype>
#include <cmath>

#include "susyhom/errors.hpp"

namespace susyhom {

ExactComplex ExactComplex::from_double(double v) { return {rational_from_double(v)}; }

ExactComplex ExactComplex::from_complex(std::complex<double> v) {
  return {rational_from_double(v.real()), rational_from_double(v.imag())};
}

std::complex<double> ExactComplex::to_complex() const {
  return {re.convert_to<double>(), im.convert_to<double>()};
}

double ExactComplex::abs() const { return std::abs(to_complex()); }

ExactComplex& ExactComplex::operator+=(const ExactComplex& o) {
  re += o.re;
  im += o.im;
  return *this;
}

ExactComplex& ExactComplex::operator-=(const ExactComplex& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}

ExactComplex& ExactComplex::operator*=(const ExactComplex& o) {
  if (im.is_zero() && o.im.is_zero()) {
    re *= o.re;
    return *this;
  }
  Rational r = re * o.re - im * o.im;
  Rational i = re * o.im + im * o.re;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

Rational rational_from_double(double v) {
  if (!std::isfinite(v)) throw InputError("non-finite coefficient");
  return Rational(v);  // mpq_set_d is exact
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

BigInt pow10(long e) {
  BigInt r = 1;
  for (long i = 0; i < e; ++i) r *= 10;
  return r;
}

}  // namespace

namespace {

// The bignum string constructor treats a leading 0 as an octal prefix.
BigInt decimal(std::string_view digits) {
  digits.remove_prefix(std::min(digits.find_first_not_of('0'), digits.size()));
  return digits.empty() ? BigInt(0) : BigInt(std::string(digits));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  const std::string original(s);
  auto fail = [&]() -> Rational { throw InputError("invalid number '" + original + "'"); };
  if (s.empty()) return fail();
  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  Rational value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto num = s.substr(0, slash);
    auto den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) return fail();
    const BigInt d = decimal(den);
    if (d.is_zero()) throw InputError("zero denominator in '" + original + "'");
    value = Rational(decimal(num), d);
  } else {
    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
      auto exp_text = s.substr(e + 1);
      bool exp_negative = false;
      if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
        exp_negative = exp_text.front() == '-';
        exp_text.remove_prefix(1);
      }
      if (!all_digits(exp_text) || exp_text.size() > 6) return fail();
      exponent = std::stol(std::string(exp_text));
      if (exp_negative) exponent = -exponent;
      s = s.substr(0, e);
    }
    std::string digits;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
      auto int_part = s.substr(0, dot);
      auto frac_part = s.substr(dot + 1);
      if ((int_part.empty() && frac_part.empty()) || (!int_part.empty() && !all_digits(int_part)) ||
          (!frac_part.empty() && !all_digits(frac_part)))
        return fail();
      digits = std::string(int_part) + std::string(frac_part);
      exponent -= static_cast<long>(frac_part.size());
    } else {
      if (!all_digits(s)) return fail();
      digits = std::string(s);
    }
    if (std::labs(exponent) > 4000) return fail();
    const BigInt mantissa = decimal(digits);
    if (exponent >= 0)
      value = Rational(mantissa * pow10(exponent));
    else
      value = Rational(mantissa, pow10(-exponent));
  }
  return negative ? Rational(-value) : value;
}

std::string format_rational(const Rational& q) { return q.str(); }

ExactComplex parse_exact_complex(std::string_view text) {
  std::string_view s = trim(text);
  if (!s.empty() && s.front() == '(') {
    if (s.back() != ')') throw InputError("unterminated complex number '" + std::string(s) + "'");
    auto inner = s.substr(1, s.size() - 2);
    auto comma = inner.find(',');
    if (comma == std::string_view::npos)
      throw InputError("complex number needs '(re,im)': '" + std::string(s) + "'");
    return {parse_rational(inner.substr(0, comma)), parse_rational(inner.substr(comma + 1))};
  }
  return {parse_rational(s)};
}

std::string format_exact_complex(const ExactComplex& z) {
  if (z.is_real()) return format_rational(z.re);
  return "(" + format_rational(z.re) + "," + format_rational(z.im) + ")";
}

}  // namespace susyhom
