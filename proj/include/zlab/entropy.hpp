#ifndef ZLAB_ENTROPY_HPP
#define ZLAB_ENTROPY_HPP

#include <complex>
#include <vector>

#include "zlab/numeric.hpp"

namespace zlab {

// Dimer-fraction entropy H(p,j) and its p-stripped part Htilde with
// H = j ln p + Htilde.  The x ln x := 0 convention applies at x = 0 for both
// the (1-2j) and the (1-2j/p) factors.
struct EntropyFactor {
  Rational p;
  Rational j;
  Real H;
  Real Htilde;
};

// Throws DomainError when j < 0, j > p/2, or 2j >= 1.
EntropyFactor eval_H(const Rational& p, const Rational& j);

// beta(N, jN) = e^{N H(p,j)} and the dressed weight beta_tilde = e^{N Htilde}.
Real beta_factor(long N, long weight, const Rational& p);
Real beta_tilde(long N, long weight, const Rational& p);

// beta_tilde for every weight 0..max_weight; the dressed evaluators consume
// this table so MPFR work stays on one thread.
std::vector<Real> beta_tilde_table(long N, long max_weight, const Rational& p);

// Analytic extension of Htilde in the dimer fraction, used by the dressed
// contour integrand.  Valid while Re(2j) < 1 and Re(j) < p/2 (principal logs
// hit no branch cut there).
std::complex<double> htilde_complex(double p, std::complex<double> j);

}  // namespace zlab

#endif
