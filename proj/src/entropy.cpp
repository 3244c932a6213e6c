#include "zlab/entropy.hpp"

#include "zlab/errors.hpp"

namespace zlab {

namespace {

// x ln x with the entropy convention 0 ln 0 = 0; x is exact so the branch
// decision never wobbles.
Real xlnx(const Rational& x) {
  if (x == 0) return Real(0);
  Real xr(x);
  return xr * log(xr);
}

}  // namespace

EntropyFactor eval_H(const Rational& p, const Rational& j) {
  if (p <= 0 || p >= 1) throw DomainError("eval_H: p must lie in (0,1)");
  if (j < 0) throw DomainError("eval_H: j < 0");
  if (j > p / 2) throw DomainError("eval_H: j > p/2");
  if (2 * j >= 1) throw DomainError("eval_H: 2j >= 1");

  const Rational one_minus_2j = 1 - 2 * j;
  const Rational inner = 1 - 2 * j / p;

  Real htilde = xlnx(one_minus_2j) + Real(j) - Real(p) / 2 * (inner == 0 ? Real(0) : Real(inner) * log(Real(inner)));

  EntropyFactor out;
  out.p = p;
  out.j = j;
  out.Htilde = htilde;
  out.H = (j == 0 ? Real(0) : Real(j) * log(Real(p))) + htilde;
  return out;
}

Real beta_factor(long N, long weight, const Rational& p) {
  Rational j(weight, N);
  return exp(Real(N) * eval_H(p, j).H);
}

Real beta_tilde(long N, long weight, const Rational& p) {
  Rational j(weight, N);
  return exp(Real(N) * eval_H(p, j).Htilde);
}

std::vector<Real> beta_tilde_table(long N, long max_weight, const Rational& p) {
  std::vector<Real> table;
  table.reserve(static_cast<std::size_t>(max_weight) + 1);
  for (long w = 0; w <= max_weight; ++w) table.push_back(beta_tilde(N, w, p));
  return table;
}

std::complex<double> htilde_complex(double p, std::complex<double> j) {
  const std::complex<double> one_minus_2j = 1.0 - 2.0 * j;
  const std::complex<double> inner = 1.0 - 2.0 * j / p;
  std::complex<double> acc = j;
  if (one_minus_2j != std::complex<double>(0.0))
    acc += one_minus_2j * std::log(one_minus_2j);
  if (inner != std::complex<double>(0.0))
    acc -= 0.5 * p * inner * std::log(inner);
  return acc;
}

}  // namespace zlab
