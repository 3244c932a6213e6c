#ifndef ZLAB_SPECIAL_HPP
#define ZLAB_SPECIAL_HPP

#include <complex>

namespace zlab {

// Principal-branch-agnostic complex log-gamma (Lanczos, g = 7); callers
// exponentiate, so only exp(clgamma) is contractual.  Accurate to ~1e-14
// relative on Gamma away from the poles.
std::complex<double> clgamma(std::complex<double> z);

std::complex<double> cgamma(std::complex<double> z);

// 1/Gamma(z), zero at the poles.
std::complex<double> cgamma_recip(std::complex<double> z);

double digamma(double x);
double trigamma(double x);

}  // namespace zlab

#endif
