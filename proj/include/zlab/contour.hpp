#ifndef ZLAB_CONTOUR_HPP
#define ZLAB_CONTOUR_HPP

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace zlab {

using CFunc = std::function<std::complex<double>(std::complex<double>)>;
using CFuncN = std::function<std::complex<double>(std::span<const std::complex<double>>)>;

enum class ContourShape { HuggingRectangle, ShiftedRectangle, VerticalLines };

struct ContourSpec {
  ContourShape shape = ContourShape::HuggingRectangle;
  double left_anchor = -0.5;   // -1/2, or -1/2 + floor(z0) after shifting
  double right_anchor = 0.5;   // m + 1/2
  double half_height = 0.5;    // rectangles
  double truncation_height = 40.0;  // vertical lines
  double max_truncation_height = 60.0;
  double step = 1.0 / 16;      // vertical-line quadrature step before halving
  double tol = 1e-12;          // refinement agreement target
  double tail_tol = 1e-14;     // vertical-line truncated-tail budget
  double pole_guard = 0.05;    // minimum node distance to a pole
  int max_refine = 20;
};

// sum_{k=0}^{n} (-a)^k f(k) / k!
double alternating_sum(double a, long n, const CFunc& f);

// (1/2*pi*i) \oint (pi/sin(pi z)) a^z/z! f(z) dz over a rectangle hugging
// {0..n}; equals alternating_sum for f analytic inside.
double contour_identity_rhs(double a, long n, const CFunc& f, const ContourSpec& spec);

// Reflected integrand prod_i (-a_i^{z_i} Gamma(-z_i)) * beta.
std::complex<double> integrand_g(std::span<const std::complex<double>> z,
                                 std::span<const double> a, std::complex<double> beta,
                                 double pole_guard = 0.05);
// Unreflected form prod_i (pi/sin(pi z_i)) a_i^{z_i}/Gamma(z_i+1) * beta.
std::complex<double> integrand_direct(std::span<const std::complex<double>> z,
                                      std::span<const double> a, std::complex<double> beta,
                                      double pole_guard = 0.05);

struct StationaryPoint {
  double a = 0;
  double w_star = 0;      // root of digamma(w) = ln a
  double z_star = 0;      // -w_star
  double asymptotic = 0;  // a + 1
  double residual = 0;    // |digamma(w_star) - ln a|
};

// digamma(a) < ln a < digamma(a+1) for every a > 0, so the root is bracketed
// by (a, a+1); Newton polishes it.
StationaryPoint stationary_point(double a);

// Two vertical lines at x = -1/2 + floor(z0) and x = n + 1/2, traversed
// counterclockwise; closing segments at infinity contribute nothing, which
// the truncated-tail estimate enforces.
double vertical_contour_eval(double a, long n, double z0, const ContourSpec& spec);

// s <= 3 variables; beta couples the coordinates (pass {} for beta == 1).
double vertical_contour_eval_multi(std::span<const double> a, std::span<const long> n,
                                   std::span<const double> z0, const ContourSpec& spec,
                                   const CFuncN& beta = {});

// Dressed 1-d rectangle quadrature with a general analytic f (used to check
// the sum-to-contour identity with entropy-dressed integrands).
double contour_rectangle_eval(double a, long n, const CFunc& f, const ContourSpec& spec);

}  // namespace zlab

#endif
