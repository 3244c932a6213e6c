#ifndef ZLAB_SERIES_HPP
#define ZLAB_SERIES_HPP

#include <cstdint>
#include <vector>

#include "zlab/numeric.hpp"

namespace zlab {

// Weight polynomial: coeff[w] collects sum over occupations of total weight
// w of prod (g_i^{alpha_i}/alpha_i!).  Truncated products of these replace
// term-by-term enumeration; the algebra is exact so both routes agree
// bit for bit.
using WeightPoly = std::vector<Rational>;
using CountPoly = std::vector<std::uint64_t>;

// sum_{t=0}^{min(max_count, max_weight/i)} (g^t/t!) x^{i t}; max_count < 0
// means no per-index cap beyond the degree bound.
WeightPoly index_weight_poly(const Rational& g, int i, long max_count, long max_weight);
CountPoly index_count_poly(int i, long max_count, long max_weight);

WeightPoly mul_truncated(const WeightPoly& a, const WeightPoly& b, long max_weight);
CountPoly mul_truncated(const CountPoly& a, const CountPoly& b, long max_weight);

Rational poly_sum(const WeightPoly& a);
std::uint64_t poly_sum(const CountPoly& a);

}  // namespace zlab

#endif
