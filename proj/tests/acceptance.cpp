// End-to-end acceptance runs.  Each criterion prints one PASS/FAIL line and
// the binary exits non-zero if any fails.  Tolerances are pinned here, not
// configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "zlab/bounds.hpp"
#include "zlab/contour.hpp"
#include "zlab/dissection.hpp"
#include "zlab/entropy.hpp"
#include "zlab/partition.hpp"
#include "zlab/special.hpp"
#include "zlab/verifier.hpp"

using namespace zlab;

namespace {

int g_failures = 0;

void report(int number, const char* name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s — %s\n", pass ? "PASS" : "FAIL", number, name,
              detail.c_str());
  if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// 1: 100 seeded random mixed-sign instances; chunk sums must equal Z in
// exact rational arithmetic.
void criterion_partition_exactness() {
  const auto start = std::chrono::steady_clock::now();
  RunConfig config = default_config();
  config.instances = 100;
  config.seed = 20240501;
  const SuiteResult result = run_verify_partition(config);
  const bool pass = result.pass;
  report(1, "chunk partition exactness", pass,
         "100 random instances, failures=" + std::to_string(int(result.report["random_failures"])) +
             ", default-instance gap=" + std::string(result.report["instance"]["gap"]) +
             ", " + fmt_double(seconds_since(start)) + "s");
}

// 2: sum-to-contour identity across the full (a, n, f) grid at 1e-10
// relative, 1e-12 absolute floor.
void criterion_contour_identity() {
  const auto start = std::chrono::steady_clock::now();
  const double a_grid[] = {0.5, 1.0, 2.0, 5.0, 10.0, 20.0};
  const std::pair<const char*, CFunc> funcs[] = {
      {"1", [](std::complex<double>) { return std::complex<double>(1.0); }},
      {"z", [](std::complex<double> z) { return z; }},
      {"z^2", [](std::complex<double> z) { return z * z; }},
      {"exp(z/10)", [](std::complex<double> z) { return std::exp(z / 10.0); }}};
  int cells = 0, failures = 0;
  double worst = 0.0;
  for (double a : a_grid)
    for (long n = 0; n <= 10; ++n)
      for (const auto& [name, f] : funcs) {
        ++cells;
        const double lhs = alternating_sum(a, n, f);
        const double rhs = contour_identity_rhs(a, n, f, ContourSpec{});
        const double err = std::abs(rhs - lhs);
        const double allowed = std::max(1e-10 * std::abs(lhs), 1e-12);
        worst = std::max(worst, err / allowed);
        if (err > allowed) ++failures;
      }
  report(2, "contour identity", failures == 0,
         std::to_string(cells) + " cells, worst err/tol=" + fmt_double(worst) + ", " +
             fmt_double(seconds_since(start)) + "s");
}

// 3: the limit numerics at p = 0.05, r = 1, J_i = (-1)^i, N grid 200..2000;
// extrapolation within 1e-4, monotone gap, imax 8 -> 10 shift below 1e-6.
void criterion_limit_numeric(LimitReport& base_out) {
  const auto start = std::chrono::steady_clock::now();
  RunConfig config = limit_scan_defaults();
  const LimitReport base_scan = run_limit_scan(config);

  RunConfig config_wide = config;
  config_wide.imax = 10;
  config_wide.couplings.clear();
  for (int i = 2; i <= 10; ++i) config_wide.couplings[i] = (i % 2 == 0) ? 1 : -1;
  const LimitReport wide_scan = run_limit_scan(config_wide);

  const double gap = std::abs(base_scan.extrapolated - base_scan.target);
  const double shift = std::abs(base_scan.extrapolated - wide_scan.extrapolated);
  const bool pass = gap <= 1e-4 && base_scan.gap_monotone && shift <= 1e-6;
  report(3, "thermodynamic limit", pass,
         "|extrapolated-target|=" + fmt_double(gap) +
             ", gap monotone=" + (base_scan.gap_monotone ? std::string("yes") : std::string("no")) +
             ", imax 8->10 shift=" + fmt_double(shift) + ", " +
             fmt_double(seconds_since(start)) + "s");
  base_out = base_scan;
}

// 4: at the largest grid N, (ln T1)/N tracks the target within 1e-3 while
// the T2 and T3 logs sit strictly below it.
void criterion_tsplit_ordering(const LimitReport& base_scan) {
  const bool pass = base_scan.t1_gap <= 1e-3 && base_scan.t2_margin > 0 && base_scan.t3_margin > 0;
  report(4, "T-split ordering", pass,
         "t1 gap=" + fmt_double(base_scan.t1_gap) + ", t2 margin=" + fmt_double(base_scan.t2_margin) +
             ", t3 margin=" + fmt_double(base_scan.t3_margin));
}

// 5: ln Q <= F over 10^4 random high-occupation draws at (p, r, N) =
// (0.05, 1, 400); the Lagrange constraint residual stays below 1e-12.
void criterion_high_occupation() {
  const auto start = std::chrono::steady_clock::now();
  const ModelParams params(400, Rational(1, 20), 1, 8);
  const double p = 0.05, r = 1.0;
  const double m_tilde = (params.half_budget() / params.N).convert_to<double>();
  const OccupationBound bound = occupation_bound(m_tilde, p, r, params.imax, params.N);

  int violations = 0;
  double min_margin = 1e300;
  int accepted = 0;
  std::uint64_t attempt = 0;
  while (accepted < 10000) {
    Rng rng(0xacc5ull + attempt++);
    Occupation alpha;
    long w = 0;
    for (int i = 2; i <= params.imax; ++i) {
      const long v =
          static_cast<long>(rng.below(static_cast<std::uint64_t>(params.budget() / i) + 1));
      if (v > 0) alpha[i] = v;
      w += i * v;
    }
    if (w > params.budget() || Rational(w) < params.half_budget()) continue;
    ++accepted;
    const QValue q = eval_Q(alpha, p, r, params.N);
    min_margin = std::min(min_margin, bound.F - q.log);
    if (q.log > bound.F) ++violations;
  }
  const bool pass = violations == 0 && bound.constraint_residual <= 1e-12;
  report(5, "high-occupation domination", pass,
         "10^4 draws, violations=" + std::to_string(violations) +
             ", min margin=" + fmt_double(min_margin) +
             ", constraint residual=" + fmt_double(bound.constraint_residual) + ", " +
             fmt_double(seconds_since(start)) + "s");
}

// 6: the inequality battery, zero violations on every randomized grid, and
// geometric decay of h with fitted rate > 0.
void criterion_inequality_suite() {
  const auto start = std::chrono::steady_clock::now();
  RunConfig config = default_config();
  config.seed = 20240501;
  const BoundSuiteResult suite = run_bound_suite(config);
  std::string failing;
  bool pass = true;
  double gamma_tilde = 0.0;
  for (const BoundReport& r : suite.reports) {
    if (!r.holds()) {
      pass = false;
      failing += r.name + " ";
    }
    if (r.name == "h_geometric") gamma_tilde = -r.lhs;
  }
  pass = pass && gamma_tilde > 0;
  report(6, "inequality suite", pass,
         (failing.empty() ? "all reports hold" : "failing: " + failing) +
             ", h rate gamma~=" + fmt_double(gamma_tilde) + ", " +
             fmt_double(seconds_since(start)) + "s");
}

// 7: digamma root bracket and residual across the a table.
void criterion_stationary_point() {
  bool pass = true;
  double worst_residual = 0.0;
  for (double a : {1.0, 2.0, 5.0, 10.0, 100.0}) {
    const StationaryPoint sp = stationary_point(a);
    worst_residual = std::max(worst_residual, std::abs(digamma(sp.w_star) - std::log(a)));
    if (!(sp.w_star > a && sp.w_star < a + 1.0)) pass = false;
  }
  pass = pass && worst_residual <= 1e-12;
  report(7, "stationary point", pass, "worst residual=" + fmt_double(worst_residual));
}

// 8: contour deformation; vertical lines match the hugging rectangle when no
// pole is crossed, each crossing removes its residue, and the s = 2 product
// case factorizes.
void criterion_contour_deformation() {
  const auto start = std::chrono::steady_clock::now();
  bool pass = true;
  std::string detail;

  const ContourSpec spec;
  {
    const double hug = contour_identity_rhs(1.0, 3,
                                            [](std::complex<double>) {
                                              return std::complex<double>(1.0);
                                            },
                                            spec);
    const double vertical = vertical_contour_eval(1.0, 3, 0.0, spec);
    const double err = std::abs(vertical - hug);
    detail += "no-cross err=" + fmt_double(err);
    if (err > 1e-8) pass = false;
  }
  {
    const double a = 1.5;
    const long n = 4;
    double worst = 0.0;
    for (double z0 : {1.3, 2.8}) {
      const long crossed = static_cast<long>(std::floor(z0));
      double expected = 0.0, term = 1.0;
      for (long k = 0; k <= n; ++k) {
        if (k > 0) term *= -a / static_cast<double>(k);
        if (k >= crossed) expected += term;
      }
      worst = std::max(worst, std::abs(vertical_contour_eval(a, n, z0, spec) - expected));
    }
    detail += ", residue err=" + fmt_double(worst);
    if (worst > 1e-8) pass = false;
  }
  {
    ContourSpec coarse = spec;
    coarse.step = 1.0 / 8;
    coarse.truncation_height = 30.0;
    const double a[] = {1.0, 2.0};
    const long n[] = {2, 3};
    const double z0[] = {0.0, 0.0};
    const double tensor = vertical_contour_eval_multi(
        a, n, z0, coarse,
        [](std::span<const std::complex<double>>) { return std::complex<double>(1.0); });
    const double product = vertical_contour_eval(a[0], n[0], z0[0], coarse) *
                           vertical_contour_eval(a[1], n[1], z0[1], coarse);
    const double err = std::abs(tensor - product);
    detail += ", s=2 factorization err=" + fmt_double(err);
    if (err > 1e-8 * std::max(1.0, std::abs(product))) pass = false;
  }
  report(8, "contour deformation", pass, detail + ", " + fmt_double(seconds_since(start)) + "s");
}

}  // namespace

int main() {
  set_real_precision_bits(200);
  const auto start = std::chrono::steady_clock::now();

  criterion_partition_exactness();
  criterion_contour_identity();
  LimitReport base_scan;
  criterion_limit_numeric(base_scan);
  criterion_tsplit_ordering(base_scan);
  criterion_high_occupation();
  criterion_inequality_suite();
  criterion_stationary_point();
  criterion_contour_deformation();

  std::printf("%d/8 criteria passed in %.1fs\n", 8 - g_failures, seconds_since(start));
  return g_failures == 0 ? 0 : 1;
}
