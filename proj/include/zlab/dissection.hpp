#ifndef ZLAB_DISSECTION_HPP
#define ZLAB_DISSECTION_HPP

#include <cstdint>
#include <map>
#include <vector>

#include "zlab/model.hpp"
#include "zlab/numeric.hpp"
#include "zlab/series.hpp"

namespace zlab {

// Box weight profile U_i = i^-(2+eps); jump_spacing(i) = 1/U_i is the gap
// between consecutive jumps of floor(x U_i).
struct WeightProfile {
  double eps = 1.0;
  std::map<int, Real> U;
  std::map<int, Real> spacing;

  const Real& at(int i) const { return U.at(i); }
  const Real& jump_spacing(int i) const { return spacing.at(i); }
};

WeightProfile weights(const std::vector<int>& indexset, double eps);

// sup{ x : sum_{i in residual} i*floor(x U_i) <= remaining_budget }.  The sup
// is the smallest jump point whose step pushes the sum past the budget;
// coordinates jumping at the same x are applied together.
Real compute_cap(const std::vector<int>& residual, const WeightProfile& profile,
                 long remaining_budget);

// Left-limit floors at C: the largest box satisfying the budget.  floor(C U_i)
// evaluated exactly at the sup can overshoot, so a jump landing on C itself
// is not counted.
std::map<int, long> box_limits(const Real& C, const WeightProfile& profile,
                               const std::vector<int>& residual, long remaining_budget);

enum class ChunkKind { Free, Boxed };

// One node of the dissection.  `assigned` fixes alpha_i = t_i on
// P, B_1, ..., B_n (zeros on P included); `residual` is N_n.  For a boxed
// chunk `box` holds its own limits m_n; for a free chunk of level >= 1 it
// holds the parent box m_{n-1}, which still caps the residual sum (without
// that cap the same term would also appear in a deeper chunk).  A boxed
// chunk with an empty residual is fully assigned.
struct Chunk {
  int level = 0;
  ChunkKind kind = ChunkKind::Boxed;
  std::vector<std::pair<int, long>> assigned;  // ascending by index
  std::vector<int> residual;                   // ascending
  std::vector<Real> caps;                      // C_0 >= C_1 >= ... along the path
  std::map<int, long> box;
  long R_cumulative = 0;
  int parent = -1;  // index of the parent boxed chunk, -1 at level 0
};

struct ChunkForest {
  std::vector<Chunk> chunks;
};

struct BuildOptions {
  std::uint64_t node_cap = 5'000'000;
};

ChunkForest build_chunks(const ModelParams& params, const CouplingSequence& couplings,
                         const BuildOptions& opts = {});

// Identifies a chunk: level plus the full assignment map.
struct ChunkKey {
  int level = 0;
  std::vector<std::pair<int, long>> assigned;
  auto operator<=>(const ChunkKey&) const = default;
};

// The unique chunk containing an admissible occupation.
ChunkKey classify_occupation(const Occupation& alpha, const CouplingSequence& couplings,
                             const ModelParams& params);

// Membership by the chunk's own definition; test oracle for disjointness.
bool chunk_contains(const Chunk& chunk, const Occupation& alpha, const ModelParams& params);

// Residual sum as a weight polynomial in the added weight 0..budget-R.
WeightPoly chunk_residual_poly(const Chunk& chunk, const CouplingSequence& couplings,
                               const ModelParams& params);
Rational chunk_assigned_factor(const Chunk& chunk, const CouplingSequence& couplings,
                               const ModelParams& params);

Rational eval_chunk(const Chunk& chunk, const CouplingSequence& couplings,
                    const ModelParams& params);
// Dressed variant: weights each term by beta_by_weight[R_cumulative + w].
Real eval_chunk_dressed(const Chunk& chunk, const CouplingSequence& couplings,
                        const ModelParams& params, const std::vector<Real>& beta_by_weight);

std::uint64_t chunk_term_count(const Chunk& chunk, const ModelParams& params);

struct ChunkEvaluation {
  std::vector<Rational> values;  // per chunk, in forest order
  Rational total;
};

// OpenMP-parallel over chunks; `parallel = false` is the serial reference.
// Values are folded in forest order either way, so results are bit-identical.
ChunkEvaluation eval_all_chunks(const ChunkForest& forest, const CouplingSequence& couplings,
                                const ModelParams& params, bool parallel = true);

struct TSplit {
  Rational T1;  // level-zero boxed
  Rational T2;  // boxed, level >= 1
  Rational T3;  // free, any level
  std::uint64_t count_T1 = 0, count_T2 = 0, count_T3 = 0;
};

TSplit split_T(const ChunkForest& forest, const ChunkEvaluation& values);

}  // namespace zlab

#endif
