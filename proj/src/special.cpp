#include "zlab/special.hpp"

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include <cmath>
#include <numbers>

namespace zlab {

namespace {

// Godfrey's Lanczos coefficients (g = 7, 9 terms).
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

constexpr double kHalfLog2Pi = 0.91893853320467274178;  // ln(2*pi)/2

std::complex<double> clgamma_positive(std::complex<double> z) {
  // Valid for Re(z) >= 0.5.
  z -= 1.0;
  std::complex<double> x = kLanczos[0];
  for (int k = 1; k < 9; ++k) x += kLanczos[k] / (z + static_cast<double>(k));
  const std::complex<double> t = z + 7.5;
  return kHalfLog2Pi + (z + 0.5) * std::log(t) - t + std::log(x);
}

}  // namespace

std::complex<double> clgamma(std::complex<double> z) {
  if (z.real() >= 0.5) return clgamma_positive(z);
  // Reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z).
  const std::complex<double> pi(std::numbers::pi);
  return std::log(pi / std::sin(pi * z)) - clgamma_positive(1.0 - z);
}

std::complex<double> cgamma(std::complex<double> z) { return std::exp(clgamma(z)); }

std::complex<double> cgamma_recip(std::complex<double> z) {
  if (z.real() < 0.5) {
    // 1/Gamma(z) = sin(pi z)/pi * Gamma(1-z): finite everywhere, zero at poles.
    const std::complex<double> pi(std::numbers::pi);
    return std::sin(pi * z) / pi * std::exp(clgamma_positive(1.0 - z));
  }
  return std::exp(-clgamma_positive(z));
}

double digamma(double x) { return boost::math::digamma(x); }

double trigamma(double x) { return boost::math::trigamma(x); }

}  // namespace zlab
