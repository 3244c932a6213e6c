#include "zlab/contour.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "zlab/errors.hpp"
#include "zlab/special.hpp"

namespace zlab {

namespace {

constexpr double kPi = std::numbers::pi;
using Complex = std::complex<double>;

void check_pole_guard(Complex z, double guard) {
  const long k = std::max(0L, std::lround(z.real()));
  if (std::abs(z - Complex(static_cast<double>(k), 0.0)) < guard)
    throw PoleProximity("evaluation point within " + std::to_string(guard) +
                        " of the pole at z = " + std::to_string(k));
}

Complex one_var_direct(Complex z, double a, double guard) {
  check_pole_guard(z, guard);
  return kPi / std::sin(kPi * z) * std::exp(z * std::log(a)) * cgamma_recip(z + 1.0);
}

// Romberg on one straight segment; trapezoid halving with Richardson rows.
// Plain trapezoid is only O(h^2) on an open segment, which cannot reach
// 1e-12 at sane node counts; the extrapolation keeps the halving structure.
Complex romberg_segment(const std::function<Complex(double)>& f, double t0, double t1, double tol,
                        int max_refine) {
  const double span = t1 - t0;
  int panels = 8;
  double h = span / panels;
  Complex trap = 0.5 * (f(t0) + f(t1));
  for (int k = 1; k < panels; ++k) trap += f(t0 + k * h);
  trap *= h;

  std::vector<Complex> prev{trap};
  for (int level = 1; level <= max_refine; ++level) {
    Complex mids = 0.0;
    for (int k = 0; k < panels; ++k) mids += f(t0 + (k + 0.5) * h);
    trap = 0.5 * trap + 0.5 * h * mids;
    panels *= 2;
    h *= 0.5;

    std::vector<Complex> row(prev.size() + 1);
    row[0] = trap;
    double factor = 4.0;
    for (std::size_t j = 1; j < row.size(); ++j) {
      row[j] = row[j - 1] + (row[j - 1] - prev[j - 1]) / (factor - 1.0);
      factor *= 4.0;
    }
    const Complex best = row.back();
    const Complex last = prev.back();
    if (level >= 3 && std::abs(best - last) <= tol * std::max(1.0, std::abs(best))) return best;
    prev = std::move(row);
  }
  throw QuadratureNonConvergence("segment quadrature did not settle at tol " +
                                 std::to_string(tol));
}

Complex rectangle_integral(const std::function<Complex(Complex)>& w, double left, double right,
                           double half_height, double tol, int max_refine) {
  const Complex bl(left, -half_height), br(right, -half_height);
  const Complex tr(right, half_height), tl(left, half_height);
  auto along = [&](Complex from, Complex to) {
    const Complex dir = to - from;
    return dir * romberg_segment([&](double t) { return w(from + t * dir); }, 0.0, 1.0, tol,
                                 max_refine);
  };
  // Counterclockwise: bottom, right side up, top, left side down.
  return along(bl, br) + along(br, tr) + along(tr, tl) + along(tl, bl);
}

}  // namespace

double alternating_sum(double a, long n, const CFunc& f) {
  if (a < 0) throw DomainError("alternating_sum: a must be non-negative");
  if (n < 0) throw DomainError("alternating_sum: n must be non-negative");
  double sum = 0.0, carry = 0.0;
  double term = 1.0;  // (-a)^k / k!
  for (long k = 0; k <= n; ++k) {
    if (k > 0) term *= -a / static_cast<double>(k);
    const double contribution = term * f(Complex(static_cast<double>(k), 0.0)).real();
    const double y = contribution - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return sum;
}

double contour_rectangle_eval(double a, long n, const CFunc& f, const ContourSpec& spec) {
  if (a <= 0) throw DomainError("contour quadrature needs a > 0");
  (void)n;
  auto w = [&](Complex z) { return one_var_direct(z, a, spec.pole_guard) * f(z); };
  const Complex raw = rectangle_integral(w, spec.left_anchor, spec.right_anchor, spec.half_height,
                                         spec.tol, spec.max_refine);
  const Complex value = raw / (Complex(0.0, 2.0 * kPi));
  return value.real();
}

double contour_identity_rhs(double a, long n, const CFunc& f, const ContourSpec& spec) {
  ContourSpec hug = spec;
  hug.shape = ContourShape::HuggingRectangle;
  hug.left_anchor = -0.5;
  hug.right_anchor = static_cast<double>(n) + 0.5;
  return contour_rectangle_eval(a, n, f, hug);
}

std::complex<double> integrand_g(std::span<const Complex> z, std::span<const double> a,
                                 Complex beta, double pole_guard) {
  Complex acc = beta;
  for (std::size_t i = 0; i < z.size(); ++i) {
    check_pole_guard(z[i], pole_guard);
    acc *= -std::exp(z[i] * std::log(a[i])) * cgamma(-z[i]);
  }
  return acc;
}

std::complex<double> integrand_direct(std::span<const Complex> z, std::span<const double> a,
                                      Complex beta, double pole_guard) {
  Complex acc = beta;
  for (std::size_t i = 0; i < z.size(); ++i) acc *= one_var_direct(z[i], a[i], pole_guard);
  return acc;
}

StationaryPoint stationary_point(double a) {
  if (a <= 0) throw DomainError("stationary_point: a must be positive");
  const double target = std::log(a);
  double lo = a, hi = a + 1.0;
  // digamma(x) sits strictly between ln x - 1/x and ln x - 1/(2x), so the
  // bracket (a, a+1) always holds.
  double w = a + 0.5;
  double res = digamma(w) - target;
  for (int iter = 0; iter < 200 && std::abs(res) > 1e-15 * std::max(1.0, std::abs(target));
       ++iter) {
    if (res > 0)
      hi = w;
    else
      lo = w;
    const double step = res / trigamma(w);
    double next = w - step;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == w) break;
    w = next;
    res = digamma(w) - target;
  }
  StationaryPoint out;
  out.a = a;
  out.w_star = w;
  out.z_star = -w;
  out.asymptotic = a + 1.0;
  out.residual = std::abs(res);
  return out;
}

namespace {

// Upward integral over the truncated vertical line Re z = x, |Im z| <= Y,
// fixed-step trapezoid with halving.  The integrand is analytic in a strip
// around the line, so the trapezoid error decays like exp(-c/h).
Complex vertical_line_integral(const std::function<Complex(Complex)>& w, double x, double Y,
                               const ContourSpec& spec) {
  auto attempt = [&](double h) {
    const long steps = std::lround(2.0 * Y / h);
    Complex acc = 0.5 * (w(Complex(x, -Y)) + w(Complex(x, Y)));
    for (long k = 1; k < steps; ++k) acc += w(Complex(x, -Y + k * h));
    return acc * Complex(0.0, h);  // dz = i dy
  };
  double h = spec.step;
  Complex value = attempt(h);
  for (int level = 0; level < spec.max_refine; ++level) {
    const Complex refined = attempt(h / 2);
    if (std::abs(refined - value) <= spec.tol * std::max(1.0, std::abs(refined))) return refined;
    value = refined;
    h /= 2;
  }
  throw QuadratureNonConvergence("vertical-line quadrature did not settle");
}

// Raises Y until the analytic envelope of the remaining tail drops below
// tail_tol; the envelope is |w| at the truncation points times the integral
// of exp(-pi (y - Y)/2), with a safety factor.
double settle_truncation_height(const std::function<Complex(Complex)>& w,
                                std::span<const double> xs, const ContourSpec& spec) {
  double Y = spec.truncation_height;
  while (true) {
    double estimate = 0.0;
    for (double x : xs)
      estimate += (std::abs(w(Complex(x, Y))) + std::abs(w(Complex(x, -Y)))) * (2.0 / kPi);
    estimate *= 4.0;
    if (estimate <= spec.tail_tol) return Y;
    if (Y >= spec.max_truncation_height)
      throw TailNotNegligible("vertical-line tail estimate " + std::to_string(estimate) +
                              " exceeds budget at Y = " + std::to_string(Y));
    Y += 10.0;
  }
}

}  // namespace

double vertical_contour_eval(double a, long n, double z0, const ContourSpec& spec) {
  if (a <= 0) throw DomainError("vertical_contour_eval: a must be positive");
  const double xl = -0.5 + std::floor(z0);
  const double xr = static_cast<double>(n) + 0.5;
  auto w = [&](Complex z) { return one_var_direct(z, a, spec.pole_guard); };
  const double xs[] = {xl, xr};
  const double Y = settle_truncation_height(w, xs, spec);
  const Complex right = vertical_line_integral(w, xr, Y, spec);
  const Complex left = vertical_line_integral(w, xl, Y, spec);
  return ((right - left) / Complex(0.0, 2.0 * kPi)).real();
}

double vertical_contour_eval_multi(std::span<const double> a, std::span<const long> n,
                                   std::span<const double> z0, const ContourSpec& spec,
                                   const CFuncN& beta) {
  const std::size_t s = a.size();
  if (s == 0 || s > 3) throw DomainError("vertical_contour_eval_multi: s must be 1..3");
  if (n.size() != s || z0.size() != s) throw DomainError("vertical_contour_eval_multi: size mismatch");

  std::vector<double> xl(s), xr(s);
  for (std::size_t d = 0; d < s; ++d) {
    xl[d] = -0.5 + std::floor(z0[d]);
    xr[d] = static_cast<double>(n[d]) + 0.5;
  }

  if (!beta) {
    // beta == 1 factorizes exactly into per-dimension line pairs.
    Complex prod = 1.0;
    for (std::size_t d = 0; d < s; ++d) {
      auto w = [&](Complex z) { return one_var_direct(z, a[d], spec.pole_guard); };
      const double xs[] = {xl[d], xr[d]};
      const double Y = settle_truncation_height(w, xs, spec);
      const Complex right = vertical_line_integral(w, xr[d], Y, spec);
      const Complex left = vertical_line_integral(w, xl[d], Y, spec);
      prod *= (right - left) / Complex(0.0, 2.0 * kPi);
    }
    return prod.real();
  }

  // Tensor trapezoid over every line combination, factors precomputed per
  // dimension; halve the step once more until the value settles.
  std::vector<double> Y(s);
  for (std::size_t d = 0; d < s; ++d) {
    auto w = [&](Complex z) { return one_var_direct(z, a[d], spec.pole_guard); };
    const double xs[] = {xl[d], xr[d]};
    Y[d] = settle_truncation_height(w, xs, spec);
  }

  auto attempt = [&](double h) {
    std::vector<std::vector<Complex>> nodes(s);      // z samples per dim per line
    std::vector<std::vector<Complex>> factors_l(s);  // left-line factor values
    std::vector<std::vector<Complex>> factors_r(s);
    std::vector<long> steps(s);
    for (std::size_t d = 0; d < s; ++d) {
      steps[d] = std::lround(2.0 * Y[d] / h);
      for (long k = 0; k <= steps[d]; ++k) {
        const double y = -Y[d] + k * h;
        factors_l[d].push_back(one_var_direct(Complex(xl[d], y), a[d], spec.pole_guard));
        factors_r[d].push_back(one_var_direct(Complex(xr[d], y), a[d], spec.pole_guard));
      }
    }
    Complex total = 0.0;
    std::vector<Complex> z(s);
    for (unsigned combo = 0; combo < (1u << s); ++combo) {
      int left_count = 0;
      for (std::size_t d = 0; d < s; ++d)
        if (combo & (1u << d)) ++left_count;
      const double sign = (left_count % 2 == 0) ? 1.0 : -1.0;

      std::vector<long> idx(s, 0);
      Complex acc = 0.0;
      while (true) {
        Complex point = 1.0;
        double weight = 1.0;
        for (std::size_t d = 0; d < s; ++d) {
          const bool left = combo & (1u << d);
          point *= (left ? factors_l : factors_r)[d][static_cast<std::size_t>(idx[d])];
          z[d] = Complex(left ? xl[d] : xr[d], -Y[d] + idx[d] * h);
          if (idx[d] == 0 || idx[d] == steps[d]) weight *= 0.5;
        }
        acc += point * beta(std::span<const Complex>(z)) * weight;
        // Odometer over the tensor grid.
        std::size_t d = 0;
        while (d < s && ++idx[d] > steps[d]) {
          idx[d] = 0;
          ++d;
        }
        if (d == s) break;
      }
      Complex measure = 1.0;
      for (std::size_t d = 0; d < s; ++d) measure *= Complex(0.0, h);
      total += sign * acc * measure;
    }
    Complex norm = 1.0;
    for (std::size_t d = 0; d < s; ++d) norm *= Complex(0.0, 2.0 * kPi);
    return total / norm;
  };

  double h = spec.step;
  Complex value = attempt(h);
  for (int level = 0; level < spec.max_refine; ++level) {
    const Complex refined = attempt(h / 2);
    if (std::abs(refined - value) <= spec.tol * std::max(1.0, std::abs(refined)))
      return refined.real();
    value = refined;
    h /= 2;
  }
  throw QuadratureNonConvergence("multi-line quadrature did not settle");
}

}  // namespace zlab
