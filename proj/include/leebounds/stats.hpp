#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "leebounds/common.hpp"

namespace lee {

inline double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / 2.50662827463100050241576528481;
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / 1.41421356237309504880168872421); }

// Inverse standard normal CDF: Acklam's rational approximation refined by one
// Halley step against erfc, accurate to ~1e-15 over (0,1).
inline double normal_quantile(double p) {
  require(p > 0.0 && p < 1.0, errc::config_error, "normal_quantile requires p in (0,1)");
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
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  double e = normal_cdf(x) - p;
  double u = e * 2.50662827463100050241576528481 * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

// q-th sample quantile as the ceil(n*q)-th order statistic (1-indexed),
// i.e. the left-continuous inverse of the empirical CDF. Input must be
// sorted ascending.
inline double sorted_quantile(const std::vector<double>& sorted, double q) {
  require(!sorted.empty(), errc::empty_sample, "quantile of empty sample");
  const auto n = static_cast<long long>(sorted.size());
  long long idx = static_cast<long long>(std::ceil(static_cast<double>(n) * q - 1e-12));
  idx = std::clamp(idx, 1LL, n);
  return sorted[static_cast<std::size_t>(idx - 1)];
}

inline double mean_of(const std::vector<double>& x) {
  require(!x.empty(), errc::empty_sample, "mean of empty sample");
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

// Unbiased sample variance (ddof = 1).
inline double variance_of(const std::vector<double>& x) {
  require(x.size() >= 2, errc::empty_sample, "variance needs at least two points");
  double m = mean_of(x), s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

// Trapezoid weights on an increasing evaluation grid; used to approximate the
// L2 inner product over the covered probability range.
inline Vec trapezoid_weights(const Vec& grid) {
  const Eigen::Index k = grid.size();
  require(k >= 1, errc::empty_sample, "trapezoid weights of empty grid");
  Vec w(k);
  if (k == 1) {
    w(0) = 1.0;
    return w;
  }
  w(0) = (grid(1) - grid(0)) / 2.0;
  for (Eigen::Index j = 1; j + 1 < k; ++j) w(j) = (grid(j + 1) - grid(j - 1)) / 2.0;
  w(k - 1) = (grid(k - 1) - grid(k - 2)) / 2.0;
  return w;
}

// Orthonormal basis of the hyperplane orthogonal to a unit vector, as the
// trailing columns of the Householder reflection mapping e1 to the normal.
// Deterministic: depends only on the normal.
inline Mat orthonormal_complement(const Vec& unit_normal) {
  const Eigen::Index k = unit_normal.size();
  require(k >= 2, errc::bad_dimension, "complement basis needs dimension >= 2");
  require(std::abs(unit_normal.norm() - 1.0) < 1e-10, errc::config_error,
          "complement basis expects a unit normal");
  Mat basis(k, k - 1);
  if (unit_normal(0) > 1.0 - 1e-12) {
    basis.setZero();
    for (Eigen::Index j = 0; j < k - 1; ++j) basis(j + 1, j) = 1.0;
    return basis;
  }
  Vec v = unit_normal;
  v(0) -= 1.0;  // e1 - normal, negated; reflection H = I - 2vv'/(v'v) sends e1 to normal
  const double vv = v.squaredNorm();
  for (Eigen::Index j = 1; j < k; ++j) {
    Vec col = Vec::Zero(k);
    col(j) = 1.0;
    col -= (2.0 * v(j) / vv) * v;
    basis.col(j - 1) = col;
  }
  return basis;
}

}  // namespace lee
