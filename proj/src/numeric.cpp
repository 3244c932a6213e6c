#include "zlab/numeric.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "zlab/errors.hpp"

namespace zlab {

namespace {
unsigned g_precision_bits = 200;
}

void set_real_precision_bits(unsigned bits) {
  if (bits < 24) bits = 24;
  g_precision_bits = bits;
  // digits10 -> bits inside MPFR is ceil(d * log2(10)); round our way up.
  unsigned digits = static_cast<unsigned>(std::ceil(bits * 0.30102999566398119521)) + 2;
  Real::default_precision(digits);
}

unsigned real_precision_bits() { return g_precision_bits; }

Real to_real(const Rational& q) { return Real(q); }

namespace {

// Base-10 only.  A leading zero must not reach the GMP string constructor,
// which would read it as octal.
Integer parse_decimal_integer(std::string s, const std::string& original) {
  bool negative = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    negative = s[0] == '-';
    s = s.substr(1);
  }
  if (s.empty()) throw ConfigError("bad integer literal '" + original + "'");
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw ConfigError("bad integer literal '" + original + "'");
  std::size_t first = s.find_first_not_of('0');
  s = first == std::string::npos ? "0" : s.substr(first);
  Integer value(s);
  return negative ? Integer(-value) : value;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw ConfigError("empty rational literal");

  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Integer num = parse_decimal_integer(s.substr(0, slash), text);
    Integer den = parse_decimal_integer(s.substr(slash + 1), text);
    if (den == 0) throw ConfigError("zero denominator in '" + text + "'");
    return Rational(num, den);
  }

  auto dot = s.find('.');
  if (dot == std::string::npos) return Rational(parse_decimal_integer(s, text));

  // Exact decimal: digits.digits -> digitsdigits / 10^k.  Doubles are never
  // consulted, so 0.05 really means 1/20.
  std::string head = s.substr(0, dot);
  std::string tail = s.substr(dot + 1);
  if (tail.empty()) tail = "0";
  bool negative = false;
  if (!head.empty() && (head[0] == '-' || head[0] == '+')) {
    negative = head[0] == '-';
    head = head.substr(1);
  }
  if (head.empty()) head = "0";
  Integer scaled = parse_decimal_integer(head + tail, text);
  Integer den = 1;
  for (std::size_t k = 0; k < tail.size(); ++k) den *= 10;
  Rational out(scaled, den);
  return negative ? Rational(-out) : out;
}

std::string to_string(const Rational& q) {
  std::ostringstream os;
  os << q;
  return os.str();
}

std::string to_string(const Real& x) {
  return x.str(30, std::ios_base::scientific);
}

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

long floor_to_long(const Rational& q) {
  Integer num = numerator(q);
  Integer den = denominator(q);
  Integer fl = num / den;
  if (num < 0 && fl * den != num) fl -= 1;
  return fl.convert_to<long>();
}

Rational pow_rational(const Rational& base, long exponent) {
  if (exponent < 0) throw DomainError("pow_rational: negative exponent");
  Rational acc = 1;
  Rational b = base;
  long e = exponent;
  while (e > 0) {
    if (e & 1) acc *= b;
    b *= b;
    e >>= 1;
  }
  return acc;
}

Rational factorial_rational(long n) {
  if (n < 0) throw DomainError("factorial of negative integer");
  Integer acc = 1;
  for (long k = 2; k <= n; ++k) acc *= k;
  return Rational(acc);
}

}  // namespace zlab
