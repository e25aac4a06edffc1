#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "leebounds/region.hpp"
#include "leebounds/rng.hpp"

namespace lee {

// ---------------------------------------------------------------------------
// Embedded-difference effect regions.
// ---------------------------------------------------------------------------

// Region for the embedded contrast with a point-identified control mean:
// region (-) {mu0}.
inline HalfspaceRegion embedded_effect_region(const HalfspaceRegion& region, const Vec& mu0) {
  return minkowski_diff_point(region, mu0);
}

// Region for the embedded contrast against a coordinatewise confidence box
// around the control mean: region (-) box via the box support function.
inline HalfspaceRegion embedded_effect_region(const HalfspaceRegion& region, const Vec& center,
                                              const Vec& halfwidth) {
  return minkowski_diff_box(region, center, halfwidth);
}

// Axis-projection effect interval in embedded coordinates:
// project_interval(region, j) shifted by -mu0_j.
inline std::pair<double, double> projection_effect(const HalfspaceRegion& region, const Vec& mu0,
                                                   int axis) {
  require(mu0.size() == region.directions.cols(), errc::dimension_mismatch,
          "mu0 dimension differs from region dimension");
  auto [lo, hi] = project_interval(region, axis);
  return {lo - mu0(axis), hi - mu0(axis)};
}

// ---------------------------------------------------------------------------
// Geodesics through the embedding: path(t) = decode((1-t) a + t b).
// ---------------------------------------------------------------------------

inline std::vector<Vec> geodesic_embedded(const Vec& a, const Vec& b, const Vec& t_grid) {
  require_same_dim(a, b);
  std::vector<Vec> path;
  path.reserve(static_cast<std::size_t>(t_grid.size()));
  for (Eigen::Index i = 0; i < t_grid.size(); ++i) {
    const double t = t_grid(i);
    path.push_back((1.0 - t) * a + t * b);
  }
  return path;
}

// Geodesic decoded to object-space coordinate rows.
struct GeodesicSample {
  Vec t;
  std::vector<Vec> points;  // object-space coordinates per t
};

using Decoder = std::function<Vec(const Vec&)>;

inline GeodesicSample geodesic(const Vec& mu0_emb, const Vec& mu1_emb, const Vec& t_grid,
                               const Decoder& decode) {
  GeodesicSample g;
  g.t = t_grid;
  for (const Vec& v : geodesic_embedded(mu0_emb, mu1_emb, t_grid)) g.points.push_back(decode(v));
  return g;
}

// ---------------------------------------------------------------------------
// Hit-and-run sampling of a bounded full-dimensional region.
// ---------------------------------------------------------------------------

// Uniform-chord hit-and-run walk started at the region witness. Deterministic
// per seed; sample i is the state after burn_in + i + 1 accepted steps.
inline std::vector<Vec> hit_and_run(const HalfspaceRegion& region, int n_samples,
                                    std::uint64_t seed, int burn_in = 100) {
  require(region.witness.size() == region.directions.cols(), errc::empty_region,
          "hit-and-run needs a region witness");
  require(contains(region, region.witness, 1e-8), errc::empty_region,
          "witness violates the region constraints");
  const int d = region.dim();
  std::vector<Vec> samples;
  samples.reserve(static_cast<std::size_t>(std::max(n_samples, 0)));
  Vec x = region.witness;
  auto rng = CounterRng::keyed(seed, {0x686974616e647275ULL});
  const int steps = burn_in + std::max(n_samples, 0);
  for (int s = 0; s < steps; ++s) {
    Vec w(d);
    double nw = 0.0;
    do {
      for (int j = 0; j < d; ++j) w(j) = rng.next_gaussian();
      nw = w.norm();
    } while (nw < 1e-12);
    w /= nw;
    double t_lo = -std::numeric_limits<double>::infinity();
    double t_hi = std::numeric_limits<double>::infinity();
    for (int i = 0; i < region.size(); ++i) {
      const double a = region.directions.row(i).dot(w);
      const double slack = region.offsets(i) - region.directions.row(i).dot(x);
      if (a > 1e-14) t_hi = std::min(t_hi, slack / a);
      else if (a < -1e-14) t_lo = std::max(t_lo, slack / a);
    }
    if (!std::isfinite(t_lo) || !std::isfinite(t_hi))
      fail(errc::empty_region, "hit-and-run chord is unbounded");
    t_lo = std::min(t_lo, 0.0);
    t_hi = std::max(t_hi, 0.0);
    const double span = t_hi - t_lo;
    double t = t_lo + rng.next_double() * span;
    // keep strictly inside against roundoff
    t = std::clamp(t, t_lo + 1e-12 * span, t_hi - 1e-12 * span);
    x += t * w;
    if (s >= burn_in) samples.push_back(x);
  }
  return samples;
}

// Geodesic bundle from mu0 to points sampled from an identified or confidence
// region.
inline std::vector<GeodesicSample> geodesic_effect_set(const Vec& mu0_emb,
                                                       const HalfspaceRegion& region,
                                                       int n_samples, std::uint64_t seed,
                                                       const Vec& t_grid, const Decoder& decode) {
  std::vector<GeodesicSample> out;
  for (const Vec& endpoint : hit_and_run(region, n_samples, seed))
    out.push_back(geodesic(mu0_emb, endpoint, t_grid, decode));
  return out;
}

// ---------------------------------------------------------------------------
// Distributional band from per-coordinate projections.
// ---------------------------------------------------------------------------

struct QuantileBand {
  Vec grid;   // evaluation probabilities
  Vec lower;  // s_j^l, nondecreasing
  Vec upper;  // s_j^u, nondecreasing
  bool monotonicity_clamped = false;
  double max_violation = 0.0;
};

// Per-coordinate projection intervals of a region over quantile-grid
// coordinates; monotonicity across the grid is enforced by cumulative max and
// flagged when it binds beyond tolerance.
inline QuantileBand quantile_band(const HalfspaceRegion& region, const Vec& grid) {
  const int d = region.dim();
  require(grid.size() == d, errc::dimension_mismatch,
          "evaluation grid length differs from region dimension");
  QuantileBand band;
  band.grid = grid;
  band.lower.resize(d);
  band.upper.resize(d);
  for (int j = 0; j < d; ++j) {
    auto [lo, hi] = project_interval(region, j);
    band.lower(j) = lo;
    band.upper(j) = hi;
  }
  for (int j = 1; j < d; ++j) {
    for (Vec* side : {&band.lower, &band.upper}) {
      Vec& v = *side;
      if (v(j) < v(j - 1)) {
        band.max_violation = std::max(band.max_violation, v(j - 1) - v(j));
        v(j) = v(j - 1);
        if (band.max_violation > 1e-6) band.monotonicity_clamped = true;
      }
    }
  }
  return band;
}

// ---------------------------------------------------------------------------
// Componentwise classical bounds for comparison output.
// ---------------------------------------------------------------------------

// Scalar bounds [E(Y|Y<=Q(p)), E(Y|Y>=Q(1-p))] with the fractional-trimming
// convention, applied to each raw component independently.
inline std::vector<std::pair<double, double>> naive_lee_componentwise(
    const Mat& raw_treated_selected, const TrimFraction& p) {
  std::vector<std::pair<double, double>> out;
  const Eigen::Index d = raw_treated_selected.rows();
  const Eigen::Index n = raw_treated_selected.cols();
  require(n > 0, errc::empty_cell, "no treated-selected units");
  for (Eigen::Index j = 0; j < d; ++j) {
    std::vector<double> z(static_cast<std::size_t>(n)), neg(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
      z[static_cast<std::size_t>(i)] = raw_treated_selected(j, i);
      neg[static_cast<std::size_t>(i)] = -raw_treated_selected(j, i);
    }
    const double hi = detail::upper_trimmed_mean(z, p.p_hat, TrimMode::fractional);
    const double lo = -detail::upper_trimmed_mean(neg, p.p_hat, TrimMode::fractional);
    out.emplace_back(lo, hi);
  }
  return out;
}

// Range of a scalar functional over a 2-D region via its polygon vertices
// (used to decode compositional share projections for k = 3).
inline std::pair<double, double> range_over_polygon(const Polygon2D& poly,
                                                    const std::function<double(const Vec&)>& f) {
  require(!poly.vertices.empty(), errc::empty_region, "empty polygon");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& v : poly.vertices) {
    Vec x(2);
    x << v.x(), v.y();
    const double val = f(x);
    lo = std::min(lo, val);
    hi = std::max(hi, val);
  }
  return {lo, hi};
}

// Same range over hit-and-run samples (k > 3 compositions); approximation
// error shrinks with the sample size, which the caller reports.
inline std::pair<double, double> range_over_samples(const std::vector<Vec>& samples,
                                                    const std::function<double(const Vec&)>& f) {
  require(!samples.empty(), errc::empty_sample, "no samples");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& v : samples) {
    const double val = f(v);
    lo = std::min(lo, val);
    hi = std::max(hi, val);
  }
  return {lo, hi};
}

}  // namespace lee
