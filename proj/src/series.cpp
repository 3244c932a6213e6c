#include "zlab/series.hpp"

namespace zlab {

WeightPoly index_weight_poly(const Rational& g, int i, long max_count, long max_weight) {
  WeightPoly poly(static_cast<std::size_t>(max_weight) + 1, Rational(0));
  Rational term = 1;  // g^t / t!
  long t = 0;
  while (t * i <= max_weight && (max_count < 0 || t <= max_count)) {
    poly[static_cast<std::size_t>(t * i)] = term;
    ++t;
    term *= g;
    term /= t;
  }
  return poly;
}

CountPoly index_count_poly(int i, long max_count, long max_weight) {
  CountPoly poly(static_cast<std::size_t>(max_weight) + 1, 0);
  long t = 0;
  while (t * i <= max_weight && (max_count < 0 || t <= max_count)) {
    poly[static_cast<std::size_t>(t * i)] = 1;
    ++t;
  }
  return poly;
}

WeightPoly mul_truncated(const WeightPoly& a, const WeightPoly& b, long max_weight) {
  WeightPoly out(static_cast<std::size_t>(max_weight) + 1, Rational(0));
  for (std::size_t wa = 0; wa < a.size(); ++wa) {
    if (a[wa] == 0) continue;
    const std::size_t wb_max = std::min(b.size(), out.size() - wa);
    for (std::size_t wb = 0; wb < wb_max; ++wb) {
      if (b[wb] == 0) continue;
      out[wa + wb] += a[wa] * b[wb];
    }
  }
  return out;
}

CountPoly mul_truncated(const CountPoly& a, const CountPoly& b, long max_weight) {
  CountPoly out(static_cast<std::size_t>(max_weight) + 1, 0);
  for (std::size_t wa = 0; wa < a.size(); ++wa) {
    if (a[wa] == 0) continue;
    const std::size_t wb_max = std::min(b.size(), out.size() - wa);
    for (std::size_t wb = 0; wb < wb_max; ++wb) out[wa + wb] += a[wa] * b[wb];
  }
  return out;
}

Rational poly_sum(const WeightPoly& a) {
  Rational s = 0;
  for (const auto& c : a) s += c;
  return s;
}

std::uint64_t poly_sum(const CountPoly& a) {
  std::uint64_t s = 0;
  for (auto c : a) s += c;
  return s;
}

}  // namespace zlab
