#include "zlab/model.hpp"

#include <algorithm>

#include "zlab/errors.hpp"

namespace zlab {

long occupation_weight(const Occupation& alpha) {
  long w = 0;
  for (const auto& [i, count] : alpha) w += static_cast<long>(i) * count;
  return w;
}

ModelParams::ModelParams(long N_, Rational p_, Rational r_, int imax_, double eps_)
    : N(N_), p(std::move(p_)), r(std::move(r_)), imax(imax_), eps(eps_) {
  if (N < 1) throw DomainError("ModelParams: N must be positive");
  if (p <= 0 || p >= 1) throw DomainError("ModelParams: p must lie in (0,1)");
  if (r <= 0) throw DomainError("ModelParams: r must be positive");
  if (imax < 2) throw DomainError("ModelParams: imax must be at least 2");
  if (eps <= 0) throw DomainError("ModelParams: eps must be positive");
}

long ModelParams::budget() const { return floor_to_long(p * N / 2); }

Rational ModelParams::half_budget() const { return p * N / 4; }

Rational ModelParams::p_pow_N(int i) const { return pow_rational(p, i) * N; }

std::vector<int> ModelParams::indices() const {
  std::vector<int> out;
  for (int i = 2; i <= imax; ++i) out.push_back(i);
  return out;
}

CouplingSequence validate_couplings(const std::map<int, Rational>& values, const Rational& r) {
  if (r <= 0) throw DomainError("validate_couplings: r must be positive");
  CouplingSequence seq;
  seq.values = values;
  seq.r = r;
  for (const auto& [i, J] : values) {
    if (i < 2) throw DomainError("coupling index below 2");
    Rational bound = pow_rational(r, i);
    if (abs(J) > bound) throw GrowthViolation(i);
    if (J >= 0)
      seq.positive.push_back(i);
    else
      seq.negative.push_back(i);
  }
  return seq;
}

CouplingSequence complete_couplings(std::map<int, Rational> values, const Rational& r, int imax) {
  for (int i = 2; i <= imax; ++i)
    if (!values.contains(i)) values[i] = 0;
  return validate_couplings(values, r);
}

namespace {

void visit_recursive(std::span<const int> indices, long remaining, std::vector<long>& counts,
                     int pos, int step_end, int step,
                     const std::function<void(std::span<const long>)>& visit) {
  if (pos == step_end) {
    visit(std::span<const long>(counts));
    return;
  }
  const long i = indices[pos];
  for (long t = 0; t * i <= remaining; ++t) {
    counts[pos] = t;
    visit_recursive(indices, remaining - t * i, counts, pos + step, step_end, step, visit);
  }
  counts[pos] = 0;
}

}  // namespace

void for_each_occupation(std::span<const int> indices, long budget,
                         const std::function<void(std::span<const long>)>& visit,
                         EnumOrder order) {
  if (budget < 0) throw DomainError("for_each_occupation: negative budget");
  std::vector<long> counts(indices.size(), 0);
  if (indices.empty()) {
    visit(std::span<const long>(counts));
    return;
  }
  if (order == EnumOrder::FirstIndexInner) {
    // Outermost loop runs over the last index so the first index varies fastest.
    visit_recursive(indices, budget, counts, static_cast<int>(indices.size()) - 1, -1, -1, visit);
  } else {
    visit_recursive(indices, budget, counts, 0, static_cast<int>(indices.size()), +1, visit);
  }
}

std::vector<Occupation> enumerate_occupations(const std::vector<int>& indices, long budget) {
  std::vector<Occupation> out;
  for_each_occupation(indices, budget, [&](std::span<const long> counts) {
    Occupation alpha;
    for (std::size_t k = 0; k < counts.size(); ++k)
      if (counts[k] > 0) alpha[indices[k]] = counts[k];
    out.push_back(std::move(alpha));
  });
  return out;
}

namespace {

std::uint64_t count_recursive(std::span<const int> indices, long remaining, std::size_t pos) {
  if (pos == indices.size()) return 1;
  std::uint64_t total = 0;
  const long i = indices[pos];
  for (long t = 0; t * i <= remaining; ++t) total += count_recursive(indices, remaining - t * i, pos + 1);
  return total;
}

}  // namespace

std::uint64_t count_occupations(std::span<const int> indices, long budget) {
  if (budget < 0) return 0;
  return count_recursive(indices, budget, 0);
}

bool admissible(const Occupation& alpha, long budget) {
  for (const auto& [i, count] : alpha)
    if (count < 0) return false;
  return occupation_weight(alpha) <= budget;
}

}  // namespace zlab
