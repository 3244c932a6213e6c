#include "zlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "zlab/errors.hpp"
#include "zlab/partition.hpp"

namespace zlab {

QValue eval_Q(const Occupation& alpha, double p, double r, long N) {
  double log_q = 0.0;
  const double log_pr = std::log(p * r);
  const double log_n = std::log(static_cast<double>(N));
  for (const auto& [i, count] : alpha) {
    if (count == 0) continue;
    log_q += count * (i * log_pr + log_n) - std::lgamma(static_cast<double>(count) + 1.0);
  }
  return {std::exp(log_q), log_q};
}

namespace {

// sum_{i=2}^{imax} i q^i (imax <= 0: to infinity).
double weighted_power_sum(double q, int imax) {
  if (imax <= 0) {
    const double om = 1.0 - q;
    return q * q * (2.0 - q) / (om * om);
  }
  double s = 0.0, qi = q * q;
  for (int i = 2; i <= imax; ++i) {
    s += i * qi;
    qi *= q;
  }
  return s;
}

double power_sum(double q, int imax) {
  if (imax <= 0) return q * q / (1.0 - q);
  double s = 0.0, qi = q * q;
  for (int i = 2; i <= imax; ++i) {
    s += qi;
    qi *= q;
  }
  return s;
}

}  // namespace

OccupationBound occupation_bound(double m_tilde, double p, double r, int imax, long N) {
  if (m_tilde <= 0) throw DomainError("occupation_bound: m_tilde must be positive");
  if (p * r <= 0 || p * r >= 1) throw DomainError("occupation_bound: need 0 < pr < 1");
  if (imax > 0 && weighted_power_sum(1.0 - 1e-12, imax) < m_tilde)
    throw NoRoot("occupation_bound: m_tilde beyond the series range");

  // The Lagrange stationarity condition for the weighted constraint gives
  // x_i = (p r e^{-lambda})^i = q^i; the constraint pins q.
  double lo = 0.0, hi = 1.0 - 1e-15;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (weighted_power_sum(mid, imax) < m_tilde ? lo : hi) = mid;
  }
  const double q = 0.5 * (lo + hi);

  OccupationBound out;
  out.m_tilde = m_tilde;
  out.q = q;
  out.constraint_residual = std::abs(weighted_power_sum(q, imax) - m_tilde);
  // f at x_i = q^i collapses to sum q^i + m ln(pr/q).
  out.f_max = power_sum(q, imax) + m_tilde * std::log(p * r / q);
  out.F = static_cast<double>(N) * out.f_max;
  out.F_asym = -static_cast<double>(N) * m_tilde * std::abs(std::log(p / std::sqrt(m_tilde)));
  return out;
}

double lagrange_objective(std::span<const int> indices, std::span<const double> x, double p,
                          double r) {
  const double log_pr = std::log(p * r);
  double f = 0.0;
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const double xi = x[k];
    if (xi < 0) throw DomainError("lagrange_objective: negative coordinate");
    f += indices[k] * xi * log_pr + xi;
    if (xi > 0) f -= xi * std::log(xi);
  }
  return f;
}

BoundReport T3_overestimate(const ModelParams& params, const CouplingSequence& couplings) {
  const long budget = params.budget();
  const Rational half = params.half_budget();
  const double p = params.p.convert_to<double>();
  const double r = params.r.convert_to<double>();
  const double log_pr = std::log(p * r);
  const double log_n = std::log(static_cast<double>(params.N));

  // Exact T3 from the dissection.
  const ChunkForest forest = build_chunks(params, couplings);
  const ChunkEvaluation values = eval_all_chunks(forest, couplings, params);
  const TSplit split = split_T(forest, values);
  const double t3 = std::abs(split.T3.convert_to<double>());

  // A: enumerated sup of the half-power product over weight >= pN/4.
  const std::vector<int> idx = params.indices();
  double log_a_sup = -std::numeric_limits<double>::infinity();
  for_each_occupation(idx, budget, [&](std::span<const long> counts) {
    long w = 0;
    for (std::size_t k = 0; k < counts.size(); ++k) w += idx[k] * counts[k];
    if (Rational(w) < half) return;
    double log_half_prod = 0.0;
    for (std::size_t k = 0; k < counts.size(); ++k) {
      if (counts[k] == 0) continue;
      const double half_count = 0.5 * static_cast<double>(counts[k]);
      log_half_prod += half_count * (idx[k] * log_pr + log_n) - std::lgamma(half_count + 1.0);
    }
    log_a_sup = std::max(log_a_sup, log_half_prod);
  });
  if (!std::isfinite(log_a_sup)) log_a_sup = 0.0;  // empty region: sup of nothing, A = 1

  // B: per-index closed bound (1 + c sqrt(a)) e^a with c = 1/Gamma(3/2).
  const double c = 2.0 / std::sqrt(std::numbers::pi);
  double log_b = 0.0;
  for (int i : idx) {
    const double a = std::pow(p * r, i) * static_cast<double>(params.N);
    log_b += std::log1p(c * std::sqrt(a)) + a;
  }

  OccupationBound lag = occupation_bound(p / 4.0, p, r, params.imax, params.N);

  BoundReport report;
  report.name = "T3_overestimate";
  report.lhs = t3;
  report.rhs = std::exp(log_a_sup + log_b);
  report.detail = "lnA_sup=" + fmt_double(log_a_sup) + " lnB=" + fmt_double(log_b) +
                  " F_asym(m=p/4)=" + fmt_double(lag.F_asym);
  return report;
}

double tail_g(double a, long n) {
  if (n < 0) throw DomainError("tail_g: n must be non-negative");
  const double mag = std::abs(a);
  if (mag == 0.0) return 0.0;
  // First tail term |a|^{n+1}/(n+1)!, then the ratio recurrence.
  double term = std::exp((n + 1) * std::log(mag) - std::lgamma(static_cast<double>(n) + 2.0));
  double sum = 0.0;
  long k = n + 1;
  while (term > sum * 1e-19 + 1e-300) {
    sum += term;
    ++k;
    term *= mag / static_cast<double>(k);
  }
  return sum * std::exp(mag);
}

BoundReport product_inequality_check(std::span<const double> x) {
  double sum = 0.0;
  for (double xi : x) {
    if (xi < 0) throw PreconditionViolated("product_inequality_check: negative entry");
    sum += xi;
  }
  if (sum > 1.0) throw PreconditionViolated("product_inequality_check: sum exceeds 1");
  double prod = 1.0;
  for (double xi : x) prod *= 1.0 + xi;
  BoundReport report;
  report.name = "product_inequality";
  report.lhs = prod - 1.0;
  report.rhs = std::numbers::e * sum;
  return report;
}

double A_beta(const std::map<int, long>& t, const CouplingSequence& couplings,
              const ModelParams& params) {
  double log_a = 0.0;
  for (const auto& [i, count] : t) {
    if (count == 0) continue;
    const double g = (couplings.at(i) * params.p_pow_N(i)).convert_to<double>();
    if (g < 0) throw DomainError("A_beta: negative coupling on a P index");
    log_a += count * std::log(g) - std::lgamma(static_cast<double>(count) + 1.0);
  }
  return std::exp(log_a);
}

double B0(const CouplingSequence& couplings, const ModelParams& params) {
  double exponent = 0.0;
  for (int i : couplings.negative)
    exponent += (couplings.at(i) * params.p_pow_N(i)).convert_to<double>();
  return std::exp(exponent);
}

double B_beta(const Chunk& chunk, const CouplingSequence& couplings, const ModelParams& params) {
  if (chunk.kind != ChunkKind::Boxed || chunk.level != 0)
    throw DomainError("B_beta expects a level-zero boxed chunk");
  double prod = 1.0;
  for (int i : chunk.residual) {
    const Rational g = couplings.at(i) * params.p_pow_N(i);
    Rational partial = 0, term = 1;
    for (long alpha = 0; alpha <= chunk.box.at(i); ++alpha) {
      if (alpha > 0) {
        term *= g;
        term /= alpha;
      }
      partial += term;
    }
    prod *= partial.convert_to<double>();
  }
  return prod;
}

LargestTermResult largest_term_approx(const ModelParams& params,
                                      const CouplingSequence& couplings) {
  const Rational half = params.half_budget();
  // Strict R0 < pN/4: the largest admissible assigned weight under it.
  long degree = floor_to_long(half);
  if (Rational(degree) == half) degree -= 1;
  if (degree < 0) degree = 0;

  // Exact sum over assignments on P, per-weight polynomial product.
  WeightPoly poly(static_cast<std::size_t>(degree) + 1, Rational(0));
  poly[0] = 1;
  for (int i : couplings.positive) {
    const Rational g = couplings.at(i) * params.p_pow_N(i);
    poly = mul_truncated(poly, index_weight_poly(g, i, -1, degree), degree);
  }
  const double sum_a = poly_sum(poly).convert_to<double>();

  // Max A^beta by a bounded-knapsack max-product sweep in the log domain.
  std::vector<double> best(static_cast<std::size_t>(degree) + 1,
                           -std::numeric_limits<double>::infinity());
  best[0] = 0.0;
  for (int i : couplings.positive) {
    const double g = (couplings.at(i) * params.p_pow_N(i)).convert_to<double>();
    std::vector<double> next = best;
    if (g > 0) {
      const double log_g = std::log(g);
      for (long w = 0; w <= degree; ++w) {
        if (!std::isfinite(best[static_cast<std::size_t>(w)])) continue;
        double add = 0.0;
        for (long t = 1; w + t * i <= degree; ++t) {
          add += log_g - std::log(static_cast<double>(t));
          next[static_cast<std::size_t>(w + t * i)] =
              std::max(next[static_cast<std::size_t>(w + t * i)],
                       best[static_cast<std::size_t>(w)] + add);
        }
      }
    }
    best = std::move(next);
  }
  const double log_max_a = *std::max_element(best.begin(), best.end());

  const double b0 = B0(couplings, params);
  LargestTermResult out;
  out.log_sum = std::log(sum_a) + std::log(b0);
  out.log_max = log_max_a + std::log(b0);
  out.gap_per_N = (std::log(sum_a) - log_max_a) / static_cast<double>(params.N);
  out.report.name = "largest_term";
  out.report.lhs = out.log_max;
  out.report.rhs = out.log_sum;
  out.report.detail = "gap_per_N=" + fmt_double(out.gap_per_N);
  return out;
}

double h_value(double a, double n) {
  return std::exp(n * std::log(a) - std::lgamma(n + 1.0) - a);
}

BoundReport h_bound(double a, double n) {
  if (a <= 0) throw DomainError("h_bound: a must be positive");
  if (n < 1) throw DomainError("h_bound: n must be at least 1");
  BoundReport report;
  report.name = "h_stirling";
  report.lhs = n * std::log(a) - std::lgamma(n + 1.0) - a;
  report.rhs = -n * std::log(n / a) + n - a;
  report.detail = "h=" + fmt_double(h_value(a, n));
  return report;
}

}  // namespace zlab
