#ifndef ZLAB_MODEL_HPP
#define ZLAB_MODEL_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "zlab/numeric.hpp"

namespace zlab {

// Occupation multi-index: alpha[i] clusters of size i, absent means zero.
using Occupation = std::map<int, long>;

long occupation_weight(const Occupation& alpha);

struct ModelParams {
  long N = 48;
  Rational p = Rational(1, 4);
  Rational r = Rational(1, 2);
  int imax = 4;        // index cutoff, reported in every output
  double eps = 1.0;    // weight exponent for the box profile

  ModelParams() = default;
  ModelParams(long N_, Rational p_, Rational r_, int imax_, double eps_ = 1.0);

  // floor(p N / 2): the admissibility ceiling on sum_i i*alpha_i.
  long budget() const;
  // p N / 4, kept exact; free/boxed classification compares against this.
  Rational half_budget() const;
  // p^i N, exact.
  Rational p_pow_N(int i) const;
  std::vector<int> indices() const;  // {2, ..., imax}
};

struct CouplingSequence {
  std::map<int, Rational> values;  // J_i keyed by i >= 2
  Rational r;
  std::vector<int> positive;  // P: indices with J_i >= 0, ascending
  std::vector<int> negative;  // N: indices with J_i < 0, ascending

  const Rational& at(int i) const { return values.at(i); }
};

// Checks |J_i| <= r^i for every index and records the sign partition.
// Throws GrowthViolation(i) at the first offending index.
CouplingSequence validate_couplings(const std::map<int, Rational>& values, const Rational& r);

// Zero-fills missing indices in 2..imax before validating, so the sequence
// covers exactly the model's index set.
CouplingSequence complete_couplings(std::map<int, Rational> values, const Rational& r, int imax);

enum class EnumOrder {
  FirstIndexInner,  // matches the documented order: (0,0),(1,0),(2,0),(0,1),...
  FirstIndexOuter,
};

// Visits every alpha supported on `indices` with sum_i i*alpha_i <= budget,
// exactly once.  `counts` is aligned with `indices` and only valid during
// the visit.  Streams are restartable: work may be split by the value of the
// outermost coordinate.
void for_each_occupation(std::span<const int> indices, long budget,
                         const std::function<void(std::span<const long>)>& visit,
                         EnumOrder order = EnumOrder::FirstIndexInner);

std::vector<Occupation> enumerate_occupations(const std::vector<int>& indices, long budget);

// Independent recursive counter for the same set (no enumeration involved).
std::uint64_t count_occupations(std::span<const int> indices, long budget);

bool admissible(const Occupation& alpha, long budget);

}  // namespace zlab

#endif
