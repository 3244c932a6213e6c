#include "zlab/partition.hpp"

#include <string>

#include "zlab/entropy.hpp"
#include "zlab/errors.hpp"

namespace zlab {

namespace {

std::uint64_t admissible_count(const ModelParams& params, std::uint64_t cap) {
  const long budget = params.budget();
  CountPoly counts(static_cast<std::size_t>(budget) + 1, 0);
  counts[0] = 1;
  for (int i : params.indices()) counts = mul_truncated(counts, index_count_poly(i, -1, budget), budget);
  std::uint64_t total = poly_sum(counts);
  if (total > cap)
    throw BudgetOverflow("admissible term count " + std::to_string(total) + " exceeds cap " +
                         std::to_string(cap));
  return total;
}

}  // namespace

WeightPoly weight_slices(const ModelParams& params, const CouplingSequence& couplings) {
  const long budget = params.budget();
  WeightPoly poly(static_cast<std::size_t>(budget) + 1, Rational(0));
  poly[0] = 1;
  for (int i : params.indices()) {
    const Rational g = couplings.at(i) * params.p_pow_N(i);
    poly = mul_truncated(poly, index_weight_poly(g, i, -1, budget), budget);
  }
  return poly;
}

PartitionValue eval_Z(const ModelParams& params, const CouplingSequence& couplings,
                      const EvalOptions& opts) {
  PartitionValue out;
  out.budget_used = params.budget();
  out.term_count = admissible_count(params, opts.term_cap);
  out.value = poly_sum(weight_slices(params, couplings));
  return out;
}

PartitionValue eval_Z_reference(const ModelParams& params, const CouplingSequence& couplings,
                                const EvalOptions& opts) {
  const long budget = params.budget();
  const std::vector<int> idx = params.indices();
  std::vector<Rational> bases;
  bases.reserve(idx.size());
  for (int i : idx) bases.push_back(couplings.at(i) * params.p_pow_N(i));

  PartitionValue out;
  out.budget_used = budget;
  out.value = 0;

  // Recursive product accumulation: stepping alpha_k -> alpha_k + 1
  // multiplies the running term by g_k/(alpha_k + 1).
  struct Walker {
    std::span<const int> idx;
    std::span<const Rational> bases;
    Rational sum = 0;
    std::uint64_t terms = 0;
    std::uint64_t cap;
    int step;

    void walk(int pos, long remaining, const Rational& term) {
      if (pos < 0 || pos == static_cast<int>(idx.size())) {
        sum += term;
        if (++terms > cap) throw BudgetOverflow("reference enumeration exceeded term cap");
        return;
      }
      const long i = idx[pos];
      Rational running = term;
      for (long t = 0; t * i <= remaining; ++t) {
        if (t > 0) {
          running *= bases[pos];
          running /= t;
        }
        walk(pos + step, remaining - t * i, running);
      }
    }
  };

  Walker w{idx, bases, Rational(0), 0, opts.term_cap,
           opts.order == EnumOrder::FirstIndexInner ? -1 : +1};
  const int start = opts.order == EnumOrder::FirstIndexInner ? static_cast<int>(idx.size()) - 1 : 0;
  if (idx.empty()) {
    w.sum = 1;
    w.terms = 1;
  } else {
    w.walk(start, budget, Rational(1));
  }
  out.value = w.sum;
  out.term_count = w.terms;
  return out;
}

DressedPartitionValue eval_Zstar(const ModelParams& params, const CouplingSequence& couplings,
                                 const ZstarOptions& opts) {
  const long budget = params.budget();
  DressedPartitionValue out;
  out.budget_used = budget;
  out.term_count = admissible_count(params, opts.term_cap);

  const WeightPoly slices = weight_slices(params, couplings);
  Real acc(0);
  if (opts.unit_beta) {
    acc = Real(poly_sum(slices));
  } else {
    for (long w = 0; w <= budget; ++w) {
      const Rational& c = slices[static_cast<std::size_t>(w)];
      if (c == 0) continue;
      acc += beta_tilde(params.N, w, params.p) * Real(c);
    }
  }
  out.value = acc;
  return out;
}

Rational factorized_Z(const ModelParams& params, const CouplingSequence& couplings) {
  const long budget = params.budget();
  Rational prod = 1;
  for (int i : params.indices()) {
    const Rational g = couplings.at(i) * params.p_pow_N(i);
    Rational partial = 0;
    Rational term = 1;
    for (long t = 0; t * i <= budget; ++t) {
      if (t > 0) {
        term *= g;
        term /= t;
      }
      partial += term;
    }
    prod *= partial;
  }
  return prod;
}

Real target_series(const CouplingSequence& couplings, const Rational& p) {
  if (p <= 0 || p >= 1) throw DomainError("target_series: p must lie in (0,1)");
  Rational acc = 0;
  for (const auto& [i, J] : couplings.values) acc += pow_rational(p, i) * J;
  return Real(acc);
}

}  // namespace zlab
