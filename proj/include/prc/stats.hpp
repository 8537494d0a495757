#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace prc {

struct Interval {
  double lo;
  double hi;
};

/// z for a two-sided 99% interval.
inline constexpr double kZ99 = 2.5758293035489004;

/// Wilson score interval for a binomial proportion.
inline Interval wilson_ci(uint64_t successes, uint64_t trials, double z = kZ99) {
  if (trials == 0) return {0.0, 1.0};
  double n = static_cast<double>(trials);
  double phat = static_cast<double>(successes) / n;
  double z2 = z * z;
  double denom = 1.0 + z2 / n;
  double center = (phat + z2 / (2.0 * n)) / denom;
  double half = (z / denom) * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
  double lo = center - half;
  double hi = center + half;
  if (lo < 0.0) lo = 0.0;
  if (hi > 1.0) hi = 1.0;
  return {lo, hi};
}

/// Two-proportion z statistic under the pooled null of equal rates.
inline double two_proportion_z(uint64_t s1, uint64_t n1, uint64_t s2, uint64_t n2) {
  double p1 = static_cast<double>(s1) / static_cast<double>(n1);
  double p2 = static_cast<double>(s2) / static_cast<double>(n2);
  double pool = static_cast<double>(s1 + s2) / static_cast<double>(n1 + n2);
  double se = std::sqrt(pool * (1.0 - pool) * (1.0 / n1 + 1.0 / n2));
  if (se == 0.0) return 0.0;
  return (p1 - p2) / se;
}

inline double log_choose(uint64_t n, uint64_t k) {
  if (k > n) return -INFINITY;
  return std::lgamma(static_cast<double>(n) + 1.0) -
         std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

inline double binom_log_pmf(uint64_t n, double p, uint64_t k) {
  if (p <= 0.0) return k == 0 ? 0.0 : -INFINITY;
  if (p >= 1.0) return k == n ? 0.0 : -INFINITY;
  return log_choose(n, k) + static_cast<double>(k) * std::log(p) +
         static_cast<double>(n - k) * std::log1p(-p);
}

/// Pr[Bin(n, p) <= k], direct summation in log space.
inline double binom_cdf(uint64_t n, double p, uint64_t k) {
  if (k >= n) return 1.0;
  double acc = 0.0;
  for (uint64_t i = 0; i <= k; ++i) acc += std::exp(binom_log_pmf(n, p, i));
  return acc > 1.0 ? 1.0 : acc;
}

inline double binom_tail_ge(uint64_t n, double p, uint64_t k) {
  if (k == 0) return 1.0;
  return 1.0 - binom_cdf(n, p, k - 1);
}

/// Smallest k with Pr[Bin(n, p) <= k] >= q (a binomial quantile).
inline uint64_t binom_quantile(uint64_t n, double p, double q) {
  double acc = 0.0;
  for (uint64_t k = 0; k <= n; ++k) {
    acc += std::exp(binom_log_pmf(n, p, k));
    if (acc >= q) return k;
  }
  return n;
}

/// Wilson-Hilferty approximation to the chi-square quantile. Good to a few
/// percent for df >= 3, which is all the uniformity tests here need.
inline double chi2_critical(double df, double upper_tail_prob) {
  // inverse normal via Acklam's rational approximation
  auto inv_norm = [](double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    double q, r;
    if (p < 0.02425) {
      q = std::sqrt(-2.0 * std::log(p));
      return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
             ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - 0.02425) {
      q = std::sqrt(-2.0 * std::log(1.0 - p));
      return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
             ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    q = p - 0.5;
    r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  };
  double z = inv_norm(1.0 - upper_tail_prob);
  double t = 1.0 - 2.0 / (9.0 * df) + z * std::sqrt(2.0 / (9.0 * df));
  return df * t * t * t;
}

namespace detail {

// Desk-scale parameter arithmetic (n^delta, thresholds) goes through doubles;
// nudge before rounding so exact powers of two do not fall on the wrong side.
inline double nudged_floor(double x) { return std::floor(x + 1e-9); }
inline double nudged_ceil(double x) { return std::ceil(x - 1e-9); }

}  // namespace detail

}  // namespace prc
