#ifndef ZLAB_BOUNDS_HPP
#define ZLAB_BOUNDS_HPP

#include <cstdint>
#include <span>
#include <string>

#include "zlab/dissection.hpp"
#include "zlab/model.hpp"

namespace zlab {

// One inequality instance; holds <=> lhs <= rhs.
struct BoundReport {
  std::string name;
  double lhs = 0;
  double rhs = 0;
  std::uint64_t seed = 0;
  std::string detail;

  double margin() const { return rhs - lhs; }
  bool holds() const { return lhs <= rhs; }
};

struct QValue {
  double value = 0;  // prod ((p r)^i N)^{alpha_i} / alpha_i!
  double log = 0;
};

QValue eval_Q(const Occupation& alpha, double p, double r, long N);

// Lagrange maximizer of f(x) = sum_i [i x_i ln(pr) - x_i ln x_i + x_i] over
// the high-occupation region sum_i i x_i >= m_tilde.  The maximizer sits on
// the boundary sum_i i x_i = m_tilde with x_i = q^i.  imax <= 0 sums the
// series to infinity.
struct OccupationBound {
  double m_tilde = 0;
  double q = 0;       // p r e^{-lambda}
  double f_max = 0;
  double F = 0;       // N * f_max
  double F_asym = 0;  // -N m |ln(p/sqrt(m))|
  double constraint_residual = 0;
};

OccupationBound occupation_bound(double m_tilde, double p, double r, int imax, long N);

// exp of f at an arbitrary feasible point; used by the optimality check.
double lagrange_objective(std::span<const int> indices, std::span<const double> x, double p,
                          double r);

// |T3| <= A * B with A the enumerated sup of the half-power product over the
// high-occupation region and B the per-index closed bound (1 + c sqrt(a))e^a,
// c = 1/Gamma(3/2).  detail records the Lagrange-asymptotic stand-in for A.
BoundReport T3_overestimate(const ModelParams& params, const CouplingSequence& couplings);

// g(a, n) = e^{|a|} * sum_{i>n} |a|^i/i!, summed directly (no cancellation).
double tail_g(double a, long n);

// prod(1 + x_i) - 1 <= e * sum x_i for x_i >= 0, sum <= 1.
BoundReport product_inequality_check(std::span<const double> x);

double A_beta(const std::map<int, long>& t, const CouplingSequence& couplings,
              const ModelParams& params);
double B0(const CouplingSequence& couplings, const ModelParams& params);
// Level-zero boxed chunk residual product; chunk must be level-zero boxed.
double B_beta(const Chunk& chunk, const CouplingSequence& couplings, const ModelParams& params);

struct LargestTermResult {
  double log_sum = 0;   // ln(B0 * sum A^beta)
  double log_max = 0;   // ln(max A^beta * B0)
  double gap_per_N = 0; // (ln sum - ln max)/N
  BoundReport report;   // max <= sum
};

LargestTermResult largest_term_approx(const ModelParams& params,
                                      const CouplingSequence& couplings);

// h(a, n) = (a^n/n!) e^{-a} against ln h <= -n ln(n/a) + n - a; n may be the
// non-integer gamma*p*N, handled through lgamma.
BoundReport h_bound(double a, double n);
double h_value(double a, double n);

}  // namespace zlab

#endif
