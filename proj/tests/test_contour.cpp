#include <doctest.h>

#include <cmath>
#include <numbers>

#include "zlab/contour.hpp"
#include "zlab/entropy.hpp"
#include "zlab/errors.hpp"
#include "zlab/special.hpp"
#include "zlab/verifier.hpp"

using namespace zlab;

namespace {

const CFunc kUnit = [](std::complex<double>) { return std::complex<double>(1.0); };

}  // namespace

TEST_CASE("alternating sums") {
  CHECK(alternating_sum(7.0, 0, kUnit) == 1.0);
  CHECK(alternating_sum(1.0, 2, kUnit) == doctest::Approx(0.5).epsilon(1e-15));
  // n = 3, a = 2, f(k) = k: 0 - 2 + 4 - 4 = -2.
  const double got = alternating_sum(2.0, 3, [](std::complex<double> z) { return z; });
  CHECK(got == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK_THROWS_AS(alternating_sum(-1.0, 2, kUnit), DomainError);
}

TEST_CASE("sum-to-contour identity on a spot grid") {
  const ContourSpec spec;
  SUBCASE("n = 0 picks out the single residue") {
    CHECK(contour_identity_rhs(3.0, 0, kUnit, spec) == doctest::Approx(1.0).epsilon(1e-11));
  }
  SUBCASE("n = 2, a = 1 gives one half") {
    CHECK(contour_identity_rhs(1.0, 2, kUnit, spec) == doctest::Approx(0.5).epsilon(1e-11));
  }
  SUBCASE("polynomial f across a few cells") {
    for (double a : {0.5, 5.0, 20.0})
      for (long n : {0L, 3L, 10L}) {
        const CFunc fz2 = [](std::complex<double> z) { return z * z; };
        const double lhs = alternating_sum(a, n, fz2);
        const double rhs = contour_identity_rhs(a, n, fz2, spec);
        CHECK(std::abs(rhs - lhs) <= std::max(1e-10 * std::abs(lhs), 1e-12));
      }
  }
}

TEST_CASE("reflected and direct integrands agree off the poles") {
  SUBCASE("z = -1/2, a = 1 gives -sqrt(pi)") {
    const std::complex<double> z(-0.5, 0.0);
    const double a = 1.0;
    const std::complex<double> got = integrand_g({&z, 1}, {&a, 1}, 1.0);
    CHECK(got.real() == doctest::Approx(-std::sqrt(std::numbers::pi)).epsilon(1e-13));
    CHECK(std::abs(got.imag()) < 1e-13);
  }
  SUBCASE("pointwise equality at 100 random off-pole points") {
    for (int k = 0; k < 100; ++k) {
      Rng rng(31000 + static_cast<std::uint64_t>(k));
      const std::size_t s = 1 + rng.below(3);
      std::vector<std::complex<double>> z(s);
      std::vector<double> a(s);
      for (std::size_t d = 0; d < s; ++d) {
        while (true) {
          const std::complex<double> candidate(-3.0 + 11.0 * rng.uniform(),
                                               -5.0 + 10.0 * rng.uniform());
          const long nearest = std::max(0L, std::lround(candidate.real()));
          if (std::abs(candidate - std::complex<double>(static_cast<double>(nearest), 0)) > 0.15) {
            z[d] = candidate;
            break;
          }
        }
        a[d] = 0.3 + 20.0 * rng.uniform();
      }
      const std::complex<double> lhs = integrand_direct(z, a, 1.0);
      const std::complex<double> rhs = integrand_g(z, a, 1.0);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(lhs));
    }
  }
  SUBCASE("unit beta leaves the undressed integrand") {
    const std::complex<double> z(1.3, 0.4);
    const double a = 2.0;
    CHECK(integrand_g({&z, 1}, {&a, 1}, 1.0) ==
          integrand_g({&z, 1}, {&a, 1}, std::complex<double>(1.0)));
  }
  SUBCASE("pole guard") {
    const std::complex<double> z(3.01, 0.0);
    const double a = 1.0;
    CHECK_THROWS_AS(integrand_g({&z, 1}, {&a, 1}, 1.0, 0.05), PoleProximity);
  }
}

TEST_CASE("stationary point of the integrand") {
  SUBCASE("classical digamma root at a = 1") {
    const StationaryPoint sp = stationary_point(1.0);
    CHECK(sp.w_star == doctest::Approx(1.4616321449683623).epsilon(1e-12));
    CHECK(sp.z_star == -sp.w_star);
  }
  SUBCASE("bracket, residual, and the large-a asymptote") {
    for (double a : {0.5, 1.0, 5.0, 10.0, 100.0}) {
      const StationaryPoint sp = stationary_point(a);
      CHECK(sp.w_star > a);
      CHECK(sp.w_star < a + 1.0);
      CHECK(std::abs(digamma(sp.w_star) - std::log(a)) <= 1e-12);
      if (a >= 10.0) CHECK(std::abs(sp.w_star - sp.asymptotic) <= 1.0);
    }
  }
  CHECK_THROWS_AS(stationary_point(0.0), DomainError);
}

TEST_CASE("vertical-line contours") {
  const ContourSpec spec;
  SUBCASE("no shift reproduces the hugging rectangle") {
    const double hug = contour_identity_rhs(1.0, 3, kUnit, spec);
    const double vertical = vertical_contour_eval(1.0, 3, 0.4, spec);
    CHECK(std::abs(vertical - hug) <= 1e-8);
  }
  SUBCASE("each crossed pole removes its residue") {
    const double a = 1.5;
    const long n = 4;
    for (double z0 : {1.4, 2.2, 3.9}) {
      const long crossed = static_cast<long>(std::floor(z0));
      double expected = 0.0, term = 1.0;
      for (long k = 0; k <= n; ++k) {
        if (k > 0) term *= -a / static_cast<double>(k);
        if (k >= crossed) expected += term;
      }
      CHECK(std::abs(vertical_contour_eval(a, n, z0, spec) - expected) <= 1e-8);
    }
  }
  SUBCASE("s = 2 product integrand factorizes through the tensor path") {
    ContourSpec coarse = spec;
    coarse.step = 1.0 / 8;
    coarse.truncation_height = 30.0;
    const double a[] = {1.0, 2.5};
    const long n[] = {2, 1};
    const double z0[] = {0.0, 0.0};
    const CFuncN unit_beta = [](std::span<const std::complex<double>>) {
      return std::complex<double>(1.0);
    };
    const double tensor = vertical_contour_eval_multi(a, n, z0, coarse, unit_beta);
    const double product = vertical_contour_eval(a[0], n[0], z0[0], coarse) *
                           vertical_contour_eval(a[1], n[1], z0[1], coarse);
    CHECK(std::abs(tensor - product) <= 1e-8 * std::max(1.0, std::abs(product)));
  }
  SUBCASE("s = 3 factorizing smoke test at coarse tolerance") {
    ContourSpec coarse = spec;
    coarse.step = 1.0 / 4;
    coarse.truncation_height = 12.0;
    coarse.max_truncation_height = 12.0;
    coarse.tail_tol = 1e-7;
    coarse.tol = 1e-6;
    const double a[] = {1.0, 1.5, 2.0};
    const long n[] = {1, 1, 1};
    const double z0[] = {0.0, 0.0, 0.0};
    const CFuncN unit_beta = [](std::span<const std::complex<double>>) {
      return std::complex<double>(1.0);
    };
    const double tensor = vertical_contour_eval_multi(a, n, z0, coarse, unit_beta);
    const double product = vertical_contour_eval_multi(a, n, z0, coarse);  // factorized route
    CHECK(std::abs(tensor - product) <= 1e-5 * std::max(1.0, std::abs(product)));
  }
  SUBCASE("tail budget failure surfaces as TailNotNegligible") {
    ContourSpec cramped = spec;
    cramped.truncation_height = 4.0;
    cramped.max_truncation_height = 4.0;
    cramped.tail_tol = 1e-14;
    CHECK_THROWS_AS(vertical_contour_eval(1.0, 3, 0.0, cramped), TailNotNegligible);
  }
}

TEST_CASE("quadrature refinement failure is reported") {
  ContourSpec impossible;
  impossible.tol = 1e-30;  // below double roundoff, can never settle
  impossible.max_refine = 4;
  CHECK_THROWS_AS(contour_identity_rhs(5.0, 8, kUnit, impossible), QuadratureNonConvergence);
}

TEST_CASE("integrand at the shifted line's center tracks the series scale") {
  // |ln(series) - ln|g(center)|| grows only logarithmically in a, so the
  // per-a gap shrinks.
  double previous = 1e300;
  for (double a : {20.0, 40.0, 80.0, 160.0}) {
    const StationaryPoint sp = stationary_point(a);
    const std::complex<double> center(-0.5 + std::floor(sp.z_star), 0.0);
    const double log_g = (center * std::log(a) + clgamma(-center)).real();
    const double gap = std::abs(-a - log_g) / a;
    CHECK(gap < previous);
    previous = gap;
  }
  CHECK(previous < 0.02);
}

TEST_CASE("entropy-dressed identity on the rectangle") {
  const double p = 0.4;
  const long N = 100;
  const double a = 1.2;
  const long n = 3;
  auto dressed = [&](std::complex<double> z) {
    return std::exp(static_cast<double>(N) * htilde_complex(p, (2.0 + 3.0 * z) / static_cast<double>(N)));
  };
  const double lhs = alternating_sum(a, n, dressed);
  const double rhs = contour_identity_rhs(a, n, dressed, ContourSpec{});
  CHECK(std::abs(rhs - lhs) <= 1e-9 * std::max(1.0, std::abs(lhs)));
}
