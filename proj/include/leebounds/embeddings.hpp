#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "leebounds/common.hpp"
#include "leebounds/stats.hpp"

namespace lee {

// ---------------------------------------------------------------------------
// Domain types. Factories validate the type invariants; the structs themselves
// stay plain aggregates.
// ---------------------------------------------------------------------------

struct CompositionPoint {
  Vec parts;  // nonnegative shares summing to 1
};

inline CompositionPoint make_composition(Vec parts) {
  require(parts.size() >= 2, errc::bad_dimension, "composition needs at least 2 parts");
  for (Eigen::Index j = 0; j < parts.size(); ++j)
    require(parts(j) >= -1e-12, errc::schema_error, "negative composition part");
  require(std::abs(parts.sum() - 1.0) <= 1e-12 * std::max(1.0, parts.cwiseAbs().sum()),
          errc::schema_error, "composition parts must sum to 1");
  return CompositionPoint{std::move(parts)};
}

struct QuantileCurve {
  Vec grid;    // strictly increasing probabilities in (0,1)
  Vec values;  // nondecreasing outcome values
};

inline QuantileCurve make_quantile_curve(Vec grid, Vec values) {
  require(grid.size() == values.size(), errc::dimension_mismatch, "grid/values size mismatch");
  require(grid.size() >= 1, errc::empty_sample, "empty quantile grid");
  for (Eigen::Index j = 0; j < grid.size(); ++j) {
    require(grid(j) > 0.0 && grid(j) < 1.0, errc::schema_error, "grid points must lie in (0,1)");
    if (j > 0) {
      require(grid(j) > grid(j - 1), errc::schema_error, "grid must be strictly increasing");
      require(values(j) >= values(j - 1) - 1e-12, errc::not_in_image,
              "quantile values must be nondecreasing");
    }
  }
  return QuantileCurve{std::move(grid), std::move(values)};
}

struct IntervalPoint {
  double lower = 0.0;
  double upper = 0.0;
};

struct LaplacianPoint {
  Mat entries;  // m x m graph Laplacian
};

inline LaplacianPoint make_laplacian(Mat entries) {
  const Eigen::Index m = entries.rows();
  require(m >= 2 && entries.cols() == m, errc::bad_dimension, "Laplacian must be square, m >= 2");
  const double scale = std::max(1.0, entries.cwiseAbs().maxCoeff());
  for (Eigen::Index p = 0; p < m; ++p) {
    require(std::abs(entries.row(p).sum()) <= 1e-10 * scale, errc::schema_error,
            "Laplacian rows must sum to 0");
    for (Eigen::Index q = 0; q < m; ++q) {
      require(std::abs(entries(p, q) - entries(q, p)) <= 1e-10 * scale, errc::not_symmetric,
              "Laplacian must be symmetric");
      if (p != q)
        require(entries(p, q) <= 1e-12 * scale, errc::schema_error,
                "off-diagonal Laplacian entries must be nonpositive");
    }
  }
  return LaplacianPoint{std::move(entries)};
}

struct SpdPoint {
  Mat entries;  // m x m symmetric positive (semi)definite
};

enum class SpdMode { power, log_euclidean };

// ---------------------------------------------------------------------------
// Aitchison map for strictly positive compositions.
// ---------------------------------------------------------------------------

// Centered log-ratio coordinates: coords_j = log(x_j / g(x)); image sums to 0.
inline Vec aitchison_embed(const CompositionPoint& x) {
  const Eigen::Index k = x.parts.size();
  Vec logs(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    require(x.parts(j) > 0.0, errc::zero_component,
            "Aitchison map needs strictly positive parts");
    logs(j) = std::log(x.parts(j));
  }
  logs.array() -= logs.mean();
  return logs;
}

inline CompositionPoint aitchison_inverse(const Vec& v) {
  require(std::abs(v.sum()) <= 1e-8 * std::max(1.0, v.cwiseAbs().maxCoeff()), errc::not_in_image,
          "Aitchison image coordinates must sum to 0");
  const double vmax = v.maxCoeff();
  Vec parts = (v.array() - vmax).exp();
  parts /= parts.sum();
  return CompositionPoint{std::move(parts)};
}

// ---------------------------------------------------------------------------
// Sphere maps for compositions that may contain zeros: square-root transform
// onto the unit sphere, then log/exp maps at a reference point mu.
// ---------------------------------------------------------------------------

inline Vec default_sphere_reference(int k) {
  require(k >= 2, errc::bad_dimension, "sphere reference needs k >= 2");
  return Vec::Constant(k, 1.0 / std::sqrt(static_cast<double>(k)));
}

inline Vec sphere_embed(const CompositionPoint& x, const Vec& mu) {
  require_same_dim(x.parts, mu);
  Vec z = x.parts.cwiseMax(0.0).cwiseSqrt();
  z /= z.norm();
  double c = std::clamp(z.dot(mu), -1.0, 1.0);
  require(c > -1.0 + 1e-12, errc::antipodal_point, "log map undefined at the antipode of mu");
  Vec w = z - c * mu;  // tangential component
  const double nw = w.norm();
  if (nw < 1e-14) return Vec::Zero(mu.size());
  return (std::acos(c) / nw) * w;
}

inline CompositionPoint sphere_inverse(const Vec& v, const Vec& mu) {
  require_same_dim(v, mu);
  require(std::abs(mu.dot(v)) <= 1e-8 * std::max(1.0, v.norm()), errc::not_tangent,
          "vector is not tangent to the sphere at mu");
  const double nv = v.norm();
  Vec point = (nv < 1e-14) ? Vec(mu) : Vec(std::cos(nv) * mu + (std::sin(nv) / nv) * v);
  Vec parts = point.cwiseProduct(point);
  parts /= parts.sum();
  return CompositionPoint{std::move(parts)};
}

// ---------------------------------------------------------------------------
// Quantile evaluation-point embedding for 1-D distributional outcomes.
// ---------------------------------------------------------------------------

inline QuantileCurve quantile_embed(const std::vector<double>& samples, const Vec& grid) {
  require(!samples.empty(), errc::empty_sample, "quantile embedding of empty sample");
  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  Vec values(grid.size());
  for (Eigen::Index j = 0; j < grid.size(); ++j) values(j) = sorted_quantile(sorted, grid(j));
  return make_quantile_curve(grid, std::move(values));
}

// ---------------------------------------------------------------------------
// Interval data: the support-function pair (s(-1), s(+1)) = (-lower, upper).
// ---------------------------------------------------------------------------

inline Vec interval_embed(const IntervalPoint& x) {
  require(x.lower <= x.upper, errc::inverted_interval, "interval has lower > upper");
  Vec v(2);
  v << -x.lower, x.upper;
  return v;
}

inline IntervalPoint interval_inverse(const Vec& v) {
  require(v.size() == 2, errc::dimension_mismatch, "interval image has dimension 2");
  require(v(0) + v(1) >= -1e-8, errc::not_in_image, "interval image needs coords sum >= 0");
  return IntervalPoint{-v(0), v(1)};
}

// ---------------------------------------------------------------------------
// Graph Laplacians: identity embedding, flattened row-major.
// ---------------------------------------------------------------------------

inline Vec laplacian_embed(const LaplacianPoint& x) {
  const Eigen::Index m = x.entries.rows();
  Vec v(m * m);
  for (Eigen::Index p = 0; p < m; ++p)
    for (Eigen::Index q = 0; q < m; ++q) v(p * m + q) = x.entries(p, q);
  return v;
}

inline LaplacianPoint laplacian_inverse(const Vec& v, int m) {
  require(v.size() == static_cast<Eigen::Index>(m) * m, errc::dimension_mismatch,
          "flattened Laplacian has m*m entries");
  Mat entries(m, m);
  for (int p = 0; p < m; ++p)
    for (int q = 0; q < m; ++q) entries(p, q) = v(p * static_cast<Eigen::Index>(m) + q);
  return make_laplacian(std::move(entries));
}

// ---------------------------------------------------------------------------
// Symmetric positive (semi)definite matrices: power and log-Euclidean maps.
// ---------------------------------------------------------------------------

namespace detail {

inline Eigen::SelfAdjointEigenSolver<Mat> spd_eigen(const Mat& a) {
  const Eigen::Index m = a.rows();
  require(m >= 1 && a.cols() == m, errc::bad_dimension, "matrix must be square");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  require((a - a.transpose()).cwiseAbs().maxCoeff() <= 1e-10 * scale, errc::not_symmetric,
          "matrix must be symmetric");
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (a + a.transpose()));
  return es;
}

inline Vec flatten(const Mat& a) {
  const Eigen::Index m = a.rows();
  Vec v(m * m);
  for (Eigen::Index p = 0; p < m; ++p)
    for (Eigen::Index q = 0; q < m; ++q) v(p * m + q) = a(p, q);
  return v;
}

inline Mat unflatten(const Vec& v, int m) {
  require(v.size() == static_cast<Eigen::Index>(m) * m, errc::dimension_mismatch,
          "flattened matrix has m*m entries");
  Mat a(m, m);
  for (int p = 0; p < m; ++p)
    for (int q = 0; q < m; ++q) a(p, q) = v(p * static_cast<Eigen::Index>(m) + q);
  return a;
}

}  // namespace detail

inline Vec spd_embed(const SpdPoint& x, SpdMode mode, double power = 0.5) {
  auto es = detail::spd_eigen(x.entries);
  Vec lam = es.eigenvalues();
  const double lmax = std::max(1.0, lam.cwiseAbs().maxCoeff());
  Vec mapped(lam.size());
  for (Eigen::Index j = 0; j < lam.size(); ++j) {
    if (mode == SpdMode::log_euclidean) {
      require(lam(j) > 0.0, errc::not_positive_definite,
              "log-Euclidean map needs strictly positive eigenvalues");
      mapped(j) = std::log(lam(j));
    } else {
      require(lam(j) >= -1e-10 * lmax, errc::not_positive_definite,
              "power map needs positive semidefinite input");
      mapped(j) = std::pow(std::max(lam(j), 0.0), power);
    }
  }
  Mat image = es.eigenvectors() * mapped.asDiagonal() * es.eigenvectors().transpose();
  image = 0.5 * (image + image.transpose());
  return detail::flatten(image);
}

inline SpdPoint spd_inverse(const Vec& v, int m, SpdMode mode, double power = 0.5) {
  Mat a = detail::unflatten(v, m);
  auto es = detail::spd_eigen(a);
  Vec lam = es.eigenvalues();
  Vec mapped(lam.size());
  for (Eigen::Index j = 0; j < lam.size(); ++j) {
    if (mode == SpdMode::log_euclidean) {
      mapped(j) = std::exp(lam(j));
    } else {
      require(lam(j) >= -1e-10 * std::max(1.0, lam.cwiseAbs().maxCoeff()), errc::not_in_image,
              "power-map image must be positive semidefinite");
      mapped(j) = std::pow(std::max(lam(j), 0.0), 1.0 / power);
    }
  }
  Mat out = es.eigenvectors() * mapped.asDiagonal() * es.eigenvectors().transpose();
  return SpdPoint{0.5 * (out + out.transpose())};
}

// ---------------------------------------------------------------------------
// Distances and image-membership checks.
// ---------------------------------------------------------------------------

inline double embedded_distance(const Vec& a, const Vec& b) {
  require_same_dim(a, b);
  return (a - b).norm();
}

// Grid-weighted norm used for quantile-curve coordinates.
inline double embedded_distance(const Vec& a, const Vec& b, const Vec& weights) {
  require_same_dim(a, b);
  require_same_dim(a, weights);
  return std::sqrt(((a - b).array().square() * weights.array()).sum());
}

inline bool aitchison_image_ok(const Vec& v, double tol = 1e-8) {
  return std::abs(v.sum()) <= tol * std::max(1.0, v.cwiseAbs().maxCoeff());
}

inline bool sphere_image_ok(const Vec& v, const Vec& mu, double tol = 1e-8) {
  return v.size() == mu.size() && std::abs(mu.dot(v)) <= tol * std::max(1.0, v.norm());
}

inline bool interval_image_ok(const Vec& v, double tol = 1e-8) {
  return v.size() == 2 && v(0) + v(1) >= -tol;
}

inline bool quantile_image_ok(const Vec& values, double tol = 1e-8) {
  for (Eigen::Index j = 1; j < values.size(); ++j)
    if (values(j) < values(j - 1) - tol) return false;
  return true;
}

}  // namespace lee
