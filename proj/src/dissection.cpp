#include "zlab/dissection.hpp"

#include <algorithm>
#include <queue>
#include <string>

#include "zlab/errors.hpp"

namespace zlab {

WeightProfile weights(const std::vector<int>& indexset, double eps) {
  if (eps <= 0) throw DomainError("weights: eps must be positive");
  WeightProfile profile;
  profile.eps = eps;
  for (int i : indexset) {
    if (i < 2) throw DomainError("weights: index below 2");
    Real s = pow(Real(i), Real(2.0 + eps));
    profile.spacing[i] = s;
    profile.U[i] = Real(1) / s;
  }
  return profile;
}

Real compute_cap(const std::vector<int>& residual, const WeightProfile& profile,
                 long remaining_budget) {
  if (residual.empty()) throw EmptyResidual();
  if (remaining_budget < 0) throw DomainError("compute_cap: negative budget");

  struct Node {
    Real x;       // jump location n * spacing_i
    std::size_t pos;
    long n;
  };
  auto cmp = [](const Node& a, const Node& b) { return a.x > b.x; };
  std::priority_queue<Node, std::vector<Node>, decltype(cmp)> heap(cmp);
  for (std::size_t k = 0; k < residual.size(); ++k)
    heap.push({profile.jump_spacing(residual[k]), k, 1});

  long used = 0;
  while (true) {
    // Gather every coordinate jumping at the same x; the step function moves
    // by their combined cost at once.
    Node first = heap.top();
    heap.pop();
    std::vector<Node> batch{first};
    while (!heap.empty() && heap.top().x == first.x) {
      batch.push_back(heap.top());
      heap.pop();
    }
    long delta = 0;
    for (const Node& nd : batch) delta += residual[nd.pos];
    if (used + delta > remaining_budget) return first.x;
    used += delta;
    for (const Node& nd : batch)
      heap.push({Real(nd.n + 1) * profile.jump_spacing(residual[nd.pos]), nd.pos, nd.n + 1});
  }
}

std::map<int, long> box_limits(const Real& C, const WeightProfile& profile,
                               const std::vector<int>& residual, long remaining_budget) {
  std::map<int, long> m;
  long cost = 0;
  for (int i : residual) {
    const Real& s = profile.jump_spacing(i);
    long n = static_cast<long>(floor(Real(C / s)).convert_to<double>());
    // Count jumps strictly below C; rounding in the division is repaired by
    // the exact product comparisons.
    while (n >= 1 && Real(n) * s >= C) --n;
    while (Real(n + 1) * s < C) ++n;
    if (n < 0) n = 0;
    m[i] = n;
    cost += static_cast<long>(i) * n;
  }
  if (cost > remaining_budget)
    throw DomainError("box_limits: box exceeds budget (inconsistent cap)");
  return m;
}

namespace {

struct Builder {
  const ModelParams& params;
  const CouplingSequence& couplings;
  const WeightProfile& profile;
  long budget;
  Rational half_budget;
  std::uint64_t node_cap;
  ChunkForest forest;

  void emit(Chunk&& chunk) {
    if (forest.chunks.size() >= node_cap)
      throw TreeOverflow("chunk forest exceeds node cap " + std::to_string(node_cap));
    forest.chunks.push_back(std::move(chunk));
  }

  // Expands the level-(n+1) children of the boxed chunk at `parent_idx`.
  // Overflow assignments obey m_n(i) < t_i <= m_{n-1}(i); `upper` carries
  // m_{n-1} (empty means the level-one case, where only the budget caps t).
  void expand(int parent_idx, std::map<int, long> upper, bool upper_bounded) {
    // The chunk vector reallocates while children are emitted; work on copies.
    const Chunk parent = forest.chunks[static_cast<std::size_t>(parent_idx)];
    const std::vector<int> residual = parent.residual;
    const std::map<int, long> prev_box = parent.box;
    std::vector<std::pair<int, long>> picks;

    auto recurse = [&](auto&& self, std::size_t pos, long spent) -> void {
      if (pos == residual.size()) {
        if (picks.empty()) return;  // B_{n+1} must be nonempty
        make_child(parent_idx, parent, residual, prev_box, picks, spent);
        return;
      }
      const int i = residual[pos];
      // Option 1: i stays in the residual.
      self(self, pos + 1, spent);
      // Option 2: i joins B_{n+1} with m_n(i) < t_i <= m_{n-1}(i).
      const long lo = prev_box.at(i) + 1;
      long hi = (budget - parent.R_cumulative - spent) / i;
      if (upper_bounded) hi = std::min(hi, upper.at(i));
      for (long t = lo; t <= hi; ++t) {
        picks.emplace_back(i, t);
        self(self, pos + 1, spent + static_cast<long>(i) * t);
        picks.pop_back();
      }
    };
    recurse(recurse, 0, 0);
  }

  void make_child(int parent_idx, const Chunk& parent, const std::vector<int>& residual,
                  const std::map<int, long>& prev_box,
                  const std::vector<std::pair<int, long>>& picks, long spent) {
    Chunk child;
    child.level = parent.level + 1;
    child.parent = parent_idx;
    child.R_cumulative = parent.R_cumulative + spent;
    child.caps = parent.caps;
    child.assigned = parent.assigned;
    for (const auto& pk : picks) child.assigned.push_back(pk);
    std::sort(child.assigned.begin(), child.assigned.end());
    for (int i : residual)
      if (std::find_if(picks.begin(), picks.end(), [&](const auto& pk) { return pk.first == i; }) ==
          picks.end())
        child.residual.push_back(i);

    if (Rational(child.R_cumulative) >= half_budget) {
      child.kind = ChunkKind::Free;
      // Residual still lives inside the parent box.
      for (int i : child.residual) child.box[i] = prev_box.at(i);
      emit(std::move(child));
      return;
    }
    child.kind = ChunkKind::Boxed;
    if (child.residual.empty()) {
      emit(std::move(child));
      return;
    }
    const Real C = compute_cap(child.residual, profile, budget - child.R_cumulative);
    child.box = box_limits(C, profile, child.residual, budget - child.R_cumulative);
    child.caps.push_back(C);
    emit(std::move(child));
    const int idx = static_cast<int>(forest.chunks.size()) - 1;
    expand(idx, prev_box, true);
  }

  void build_level0() {
    const std::vector<int>& P = couplings.positive;
    const std::vector<int>& Neg = couplings.negative;
    std::vector<long> counts(P.size(), 0);

    auto emit_root = [&](std::span<const long> t) {
      long R0 = 0;
      Chunk root;
      for (std::size_t k = 0; k < P.size(); ++k) {
        root.assigned.emplace_back(P[k], t[k]);
        R0 += static_cast<long>(P[k]) * t[k];
      }
      root.level = 0;
      root.R_cumulative = R0;
      if (Rational(R0) >= half_budget) {
        root.kind = ChunkKind::Free;
        root.residual = Neg;
        emit(std::move(root));
        return;
      }
      root.kind = ChunkKind::Boxed;
      if (Neg.empty()) {
        emit(std::move(root));
        return;
      }
      root.residual = Neg;
      const Real C0 = compute_cap(Neg, profile, budget - R0);
      root.box = box_limits(C0, profile, Neg, budget - R0);
      root.caps.push_back(C0);
      emit(std::move(root));
      const int idx = static_cast<int>(forest.chunks.size()) - 1;
      expand(idx, {}, false);
    };

    for_each_occupation(P, budget, emit_root);
  }
};

}  // namespace

ChunkForest build_chunks(const ModelParams& params, const CouplingSequence& couplings,
                         const BuildOptions& opts) {
  const WeightProfile profile = weights(params.indices(), params.eps);
  Builder builder{params, couplings, profile, params.budget(), params.half_budget(),
                  opts.node_cap, {}};
  builder.build_level0();
  return std::move(builder.forest);
}

ChunkKey classify_occupation(const Occupation& alpha, const CouplingSequence& couplings,
                             const ModelParams& params) {
  const WeightProfile profile = weights(params.indices(), params.eps);
  const long budget = params.budget();
  const Rational half = params.half_budget();

  auto value_of = [&](int i) {
    auto it = alpha.find(i);
    return it == alpha.end() ? 0L : it->second;
  };

  ChunkKey key;
  long R = 0;
  for (int i : couplings.positive) {
    const long t = value_of(i);
    key.assigned.emplace_back(i, t);
    R += static_cast<long>(i) * t;
  }
  key.level = 0;
  if (Rational(R) >= half) return key;

  std::vector<int> residual = couplings.negative;
  while (!residual.empty()) {
    const Real C = compute_cap(residual, profile, budget - R);
    const std::map<int, long> box = box_limits(C, profile, residual, budget - R);
    std::vector<int> keep;
    std::vector<int> overflow;
    for (int i : residual)
      (value_of(i) > box.at(i) ? overflow : keep).push_back(i);
    if (overflow.empty()) return key;  // boxed at this level
    key.level += 1;
    for (int i : overflow) {
      key.assigned.emplace_back(i, value_of(i));
      R += static_cast<long>(i) * value_of(i);
    }
    std::sort(key.assigned.begin(), key.assigned.end());
    residual = std::move(keep);
    if (Rational(R) >= half) return key;  // free at this level
  }
  return key;  // fully assigned
}

bool chunk_contains(const Chunk& chunk, const Occupation& alpha, const ModelParams& params) {
  const long budget = params.budget();
  auto value_of = [&](int i) {
    auto it = alpha.find(i);
    return it == alpha.end() ? 0L : it->second;
  };
  long total = 0;
  for (const auto& [i, t] : chunk.assigned) {
    if (value_of(i) != t) return false;
    total += static_cast<long>(i) * t;
  }
  // Any support outside assigned ∪ residual excludes alpha.
  for (const auto& [i, v] : alpha) {
    if (v == 0) continue;
    const bool in_assigned =
        std::find_if(chunk.assigned.begin(), chunk.assigned.end(),
                     [&](const auto& pr) { return pr.first == i; }) != chunk.assigned.end();
    const bool in_residual =
        std::find(chunk.residual.begin(), chunk.residual.end(), i) != chunk.residual.end();
    if (!in_assigned && !in_residual) return false;
  }
  for (int i : chunk.residual) {
    const long v = value_of(i);
    if (!chunk.box.empty() && v > chunk.box.at(i)) return false;
    total += static_cast<long>(i) * v;
  }
  return total <= budget;
}

WeightPoly chunk_residual_poly(const Chunk& chunk, const CouplingSequence& couplings,
                               const ModelParams& params) {
  const long remaining = params.budget() - chunk.R_cumulative;
  WeightPoly poly(static_cast<std::size_t>(remaining) + 1, Rational(0));
  poly[0] = 1;
  for (int i : chunk.residual) {
    const Rational g = couplings.at(i) * params.p_pow_N(i);
    const long cap = chunk.box.empty() ? -1 : chunk.box.at(i);
    poly = mul_truncated(poly, index_weight_poly(g, i, cap, remaining), remaining);
  }
  return poly;
}

Rational chunk_assigned_factor(const Chunk& chunk, const CouplingSequence& couplings,
                               const ModelParams& params) {
  Rational acc = 1;
  for (const auto& [i, t] : chunk.assigned) {
    const Rational g = couplings.at(i) * params.p_pow_N(i);
    acc *= pow_rational(g, t);
    acc /= factorial_rational(t);
  }
  return acc;
}

Rational eval_chunk(const Chunk& chunk, const CouplingSequence& couplings,
                    const ModelParams& params) {
  return chunk_assigned_factor(chunk, couplings, params) *
         poly_sum(chunk_residual_poly(chunk, couplings, params));
}

Real eval_chunk_dressed(const Chunk& chunk, const CouplingSequence& couplings,
                        const ModelParams& params, const std::vector<Real>& beta_by_weight) {
  const Rational assigned = chunk_assigned_factor(chunk, couplings, params);
  const WeightPoly poly = chunk_residual_poly(chunk, couplings, params);
  Real acc(0);
  for (std::size_t w = 0; w < poly.size(); ++w) {
    if (poly[w] == 0) continue;
    acc += beta_by_weight.at(static_cast<std::size_t>(chunk.R_cumulative) + w) * Real(poly[w]);
  }
  return Real(assigned) * acc;
}

std::uint64_t chunk_term_count(const Chunk& chunk, const ModelParams& params) {
  const long remaining = params.budget() - chunk.R_cumulative;
  CountPoly poly(static_cast<std::size_t>(remaining) + 1, 0);
  poly[0] = 1;
  for (int i : chunk.residual) {
    const long cap = chunk.box.empty() ? -1 : chunk.box.at(i);
    poly = mul_truncated(poly, index_count_poly(i, cap, remaining), remaining);
  }
  return poly_sum(poly);
}

ChunkEvaluation eval_all_chunks(const ChunkForest& forest, const CouplingSequence& couplings,
                                const ModelParams& params, bool parallel) {
  ChunkEvaluation out;
  out.values.assign(forest.chunks.size(), Rational(0));
  const long n = static_cast<long>(forest.chunks.size());
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (long k = 0; k < n; ++k)
      out.values[static_cast<std::size_t>(k)] =
          eval_chunk(forest.chunks[static_cast<std::size_t>(k)], couplings, params);
  } else {
    for (long k = 0; k < n; ++k)
      out.values[static_cast<std::size_t>(k)] =
          eval_chunk(forest.chunks[static_cast<std::size_t>(k)], couplings, params);
  }
  out.total = 0;
  for (const Rational& v : out.values) out.total += v;
  return out;
}

TSplit split_T(const ChunkForest& forest, const ChunkEvaluation& values) {
  TSplit split;
  split.T1 = split.T2 = split.T3 = 0;
  for (std::size_t k = 0; k < forest.chunks.size(); ++k) {
    const Chunk& chunk = forest.chunks[k];
    const Rational& v = values.values[k];
    if (chunk.kind == ChunkKind::Free) {
      split.T3 += v;
      ++split.count_T3;
    } else if (chunk.level == 0) {
      split.T1 += v;
      ++split.count_T1;
    } else {
      split.T2 += v;
      ++split.count_T2;
    }
  }
  return split;
}

}  // namespace zlab
