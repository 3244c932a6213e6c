#ifndef ZLAB_PARTITION_HPP
#define ZLAB_PARTITION_HPP

#include <cstdint>

#include "zlab/model.hpp"
#include "zlab/numeric.hpp"
#include "zlab/series.hpp"

namespace zlab {

struct PartitionValue {
  Rational value;
  std::uint64_t term_count = 0;
  long budget_used = 0;
};

struct DressedPartitionValue {
  Real value;
  std::uint64_t term_count = 0;
  long budget_used = 0;
};

struct EvalOptions {
  std::uint64_t term_cap = 10'000'000;
  EnumOrder order = EnumOrder::FirstIndexInner;
};

// Z = sum over admissible alpha of prod (J_i p^i N)^{alpha_i}/alpha_i!,
// exact.  Production path multiplies truncated weight polynomials; the
// reference path enumerates terms one by one and exists to cross-check it.
PartitionValue eval_Z(const ModelParams& params, const CouplingSequence& couplings,
                      const EvalOptions& opts = {});
PartitionValue eval_Z_reference(const ModelParams& params, const CouplingSequence& couplings,
                                const EvalOptions& opts = {});

// Per-weight slices of Z: coeff[w] = sum over admissible alpha of weight w.
WeightPoly weight_slices(const ModelParams& params, const CouplingSequence& couplings);

struct ZstarOptions {
  std::uint64_t term_cap = 10'000'000;
  bool unit_beta = false;  // test hook: beta_tilde forced to 1 reduces Z* to Z
};

// Z* = sum over admissible alpha of beta_tilde(N, w(alpha)) * term(alpha).
DressedPartitionValue eval_Zstar(const ModelParams& params, const CouplingSequence& couplings,
                                 const ZstarOptions& opts = {});

// prod_i sum_{alpha_i=0}^{floor(budget/i)} (J_i p^i N)^{alpha_i}/alpha_i!
// (the factorized approximation; per-index sums truncated at the budget box).
Rational factorized_Z(const ModelParams& params, const CouplingSequence& couplings);

// sum_{i} p^i J_i over the couplings' index set.
Real target_series(const CouplingSequence& couplings, const Rational& p);

}  // namespace zlab

#endif
