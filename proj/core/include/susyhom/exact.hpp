#pragma once

#include <complex>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>

namespace susyhom {

using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

// Gaussian rational re + i*im. Every finite double is a dyadic rational, so
// coefficients read from floating-point input convert without loss.
struct ExactComplex {
  Rational re;
  Rational im;

  ExactComplex() = default;
  ExactComplex(Rational r) : re(std::move(r)) {}  // NOLINT: implicit by design
  ExactComplex(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
  ExactComplex(long long v) : re(v) {}  // NOLINT
  ExactComplex(int v) : re(v) {}        // NOLINT

  static ExactComplex from_double(double v);
  static ExactComplex from_complex(std::complex<double> v);
  static ExactComplex imaginary_unit() { return {Rational(0), Rational(1)}; }

  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  bool is_real() const { return im.is_zero(); }
  ExactComplex conj() const { return {re, -im}; }
  std::complex<double> to_complex() const;
  // |z| as a double (exact norm is irrational in general).
  double abs() const;

  ExactComplex& operator+=(const ExactComplex& o);
  ExactComplex& operator-=(const ExactComplex& o);
  ExactComplex& operator*=(const ExactComplex& o);
  ExactComplex operator-() const { return {-re, -im}; }

  friend ExactComplex operator+(ExactComplex a, const ExactComplex& b) { return a += b; }
  friend ExactComplex operator-(ExactComplex a, const ExactComplex& b) { return a -= b; }
  friend ExactComplex operator*(ExactComplex a, const ExactComplex& b) { return a *= b; }
  friend bool operator==(const ExactComplex& a, const ExactComplex& b) {
    return a.re == b.re && a.im == b.im;
  }
};

Rational rational_from_double(double v);

// "3/4", "-2", "0.125", "1e-3" -> exact rational. Throws InputError.
Rational parse_rational(std::string_view text);
std::string format_rational(const Rational& q);

// Accepts a real rational or "(re,im)". Throws InputError.
ExactComplex parse_exact_complex(std::string_view text);
// Real values print as a plain rational, others as "(re,im)".
std::string format_exact_complex(const ExactComplex& z);

}  // namespace susyhom
