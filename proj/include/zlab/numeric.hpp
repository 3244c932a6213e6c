#ifndef ZLAB_NUMERIC_HPP
#define ZLAB_NUMERIC_HPP

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cstdint>
#include <string>

namespace zlab {

// Exact rationals carry everything the budget constraint touches; Real is a
// dynamic-precision MPFR float for the transcendental pieces (entropy
// weights, logarithms of exact values).  Real values stay on the main
// thread; parallel kernels work in Rational or double only.
using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;
using Real = boost::multiprecision::mpfr_float;

// Precision is configured in bits (CLI flag) but MPFR is driven through a
// decimal-digit knob; the mapping rounds up so at least `bits` survive.
void set_real_precision_bits(unsigned bits);
unsigned real_precision_bits();

Real to_real(const Rational& q);

// Accepts "3/4", "-12", "0.05" (exact decimal), throws ConfigError otherwise.
Rational parse_rational(const std::string& text);

std::string to_string(const Rational& q);
std::string to_string(const Real& x);
std::string fmt_double(double x);

long floor_to_long(const Rational& q);
Rational pow_rational(const Rational& base, long exponent);
Rational factorial_rational(long n);

}  // namespace zlab

#endif
