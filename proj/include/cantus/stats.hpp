// Descriptive and inferential statistics: means, Pearson correlation, and
// two-tailed p-values via the Student-t distribution, whose tail probability
// is evaluated with a regularized incomplete beta continued fraction.

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "cantus/error.hpp"

namespace cantus {

struct Sample {
  std::vector<double> values;
  std::string label;
};

struct CorrelationResult {
  double r = 0.0;
  int n = 0;
  double t_statistic = 0.0;  // sign matches r
  int dof = 0;               // n - 2
  double p_two_tailed = 1.0;
};

namespace detail {

inline void require_finite(const Sample& s) {
  for (double v : s.values) {
    if (!std::isfinite(v)) {
      throw Error(errc::invalid_field,
                  "sample '" + s.label + "' contains a non-finite value");
    }
  }
}

/// Lentz-style continued fraction for the incomplete beta; converges fast
/// when x < (a+1)/(a+b+2), which the caller guarantees via the symmetry
/// transform.
inline double incomplete_beta_cf(double a, double b, double x) {
  constexpr int kMaxIterations = 300;
  constexpr double kRelativeTolerance = 1e-12;  // comfortably under 1e-10 absolute
  constexpr double kTiny = 1e-300;

  const double apb = a + b;
  const double ap1 = a + 1.0;
  const double am1 = a - 1.0;

  double c = 1.0;
  double d = 1.0 - apb * x / ap1;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double result = d;

  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double numerator = m * (b - m) * x / ((am1 + m2) * (a + m2));
    d = 1.0 + numerator * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + numerator / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    result *= d * c;

    numerator = -(a + m) * (apb + m) * x / ((a + m2) * (ap1 + m2));
    d = 1.0 + numerator * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + numerator / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    result *= delta;
    if (std::fabs(delta - 1.0) < kRelativeTolerance) return result;
  }
  throw Error(errc::non_convergence,
              "incomplete beta continued fraction did not converge within 300 "
              "iterations");
}

/// t statistic for a correlation r on n samples, saturated near |r| = 1 so
/// the result stays finite and sign-correct.
inline double t_from_r(double r, int n) {
  const double denom = std::max(1.0 - r * r, 1e-24);
  return r * std::sqrt((n - 2) / denom);
}

}  // namespace detail

inline double mean(const Sample& s) {
  if (s.values.empty()) throw Error(errc::empty_input, "mean of an empty sample");
  detail::require_finite(s);
  return std::accumulate(s.values.begin(), s.values.end(), 0.0) /
         static_cast<double>(s.values.size());
}

inline double pearson_r(const Sample& x, const Sample& y) {
  if (x.values.empty() || y.values.empty()) {
    throw Error(errc::empty_input, "correlation of an empty sample");
  }
  if (x.values.size() != y.values.size()) {
    throw Error(errc::length_mismatch,
                "samples differ in length: " + std::to_string(x.values.size()) +
                    " vs " + std::to_string(y.values.size()));
  }
  const size_t n = x.values.size();
  if (n < 3) {
    throw Error(errc::degenerate_sample,
                "correlation needs at least 3 pairs, got " + std::to_string(n));
  }
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double dx = x.values[i] - mx;
    const double dy = y.values[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0) {
    throw Error(errc::zero_variance, "sample '" + x.label + "' has zero variance");
  }
  if (syy == 0.0) {
    throw Error(errc::zero_variance, "sample '" + y.label + "' has zero variance");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

/// I_x(a, b), the regularized incomplete beta function, by continued fraction
/// with the symmetry transform I_x(a,b) = 1 - I_{1-x}(b,a) applied when x is
/// past the fast-convergence region.
inline double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw Error(errc::invalid_field, "incomplete beta requires a > 0 and b > 0");
  }
  if (!(x >= 0.0 && x <= 1.0)) {
    throw Error(errc::invalid_field, "incomplete beta requires x in [0, 1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;

  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * detail::incomplete_beta_cf(a, b, x) / a;
  }
  return 1.0 - front * detail::incomplete_beta_cf(b, a, 1.0 - x) / b;
}

/// Two-tailed tail probability of the Student-t distribution with dof degrees
/// of freedom: p = I_x(dof/2, 1/2) with x = dof / (dof + t^2).
inline double p_value_from_t(double t, int dof) {
  if (dof < 1) {
    throw Error(errc::degenerate_sample,
                "t distribution needs at least 1 degree of freedom");
  }
  const double nu = dof;
  const double x = nu / (nu + t * t);
  return std::clamp(regularized_incomplete_beta(nu / 2.0, 0.5, x), 0.0, 1.0);
}

inline double p_value_two_tailed(double r, int n) {
  if (n < 3) {
    throw Error(errc::degenerate_sample,
                "p-value needs n >= 3, got " + std::to_string(n));
  }
  const double rc = std::clamp(r, -1.0, 1.0);
  if (std::fabs(rc) >= 1.0 - 1e-12) return 0.0;
  return p_value_from_t(detail::t_from_r(rc, n), n - 2);
}

/// Convenience bundle: r, t, dof, and p for one pair of samples.
inline CorrelationResult correlate(const Sample& x, const Sample& y) {
  CorrelationResult result;
  result.r = pearson_r(x, y);
  result.n = static_cast<int>(x.values.size());
  result.dof = result.n - 2;
  result.t_statistic = detail::t_from_r(result.r, result.n);
  result.p_two_tailed = p_value_two_tailed(result.r, result.n);
  return result;
}

}  // namespace cantus
