#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <utility>
#include <vector>

#include "leebounds/selection.hpp"

namespace lee {

// Intersection of half-spaces {v : <u_i, v> <= offset_i}. Regions built from
// support profiles carry the treated-selected sample mean as an interior
// witness (the support estimator dominates <u, mean> for every u).
struct HalfspaceRegion {
  Mat directions;  // N x d, unit rows
  Vec offsets;     // N
  Vec witness;     // interior point; may be empty for raw regions

  int dim() const { return static_cast<int>(directions.cols()); }
  int size() const { return static_cast<int>(directions.rows()); }
};

inline bool contains(const HalfspaceRegion& region, const Vec& v, double tol = 1e-8) {
  require(v.size() == region.directions.cols(), errc::dimension_mismatch,
          "point dimension differs from region dimension");
  Vec slack = region.offsets - region.directions * v;
  return slack.minCoeff() >= -tol;
}

inline HalfspaceRegion build_region(const SupportProfile& profile) {
  HalfspaceRegion region;
  region.directions = profile.grid.directions;
  region.offsets = profile.sigma;
  region.witness = profile.sample_mean;
  require(contains(region, profile.sample_mean, 1e-8), errc::empty_region,
          "profile does not contain its own sample mean; numerical corruption");
  return region;
}

// Axis projection (lo, hi) = (-offset at -e_j, offset at +e_j).
inline std::pair<double, double> project_interval(const HalfspaceRegion& region, int axis) {
  const int d = region.dim();
  require(axis >= 0 && axis < d, errc::bad_dimension, "axis out of range");
  int pos = -1, neg = -1;
  for (int i = 0; i < region.size() && (pos < 0 || neg < 0); ++i) {
    bool is_axis = true;
    for (int l = 0; l < d && is_axis; ++l)
      if (l != axis && std::abs(region.directions(i, l)) > 1e-12) is_axis = false;
    if (!is_axis) continue;
    if (pos < 0 && std::abs(region.directions(i, axis) - 1.0) <= 1e-12) pos = i;
    if (neg < 0 && std::abs(region.directions(i, axis) + 1.0) <= 1e-12) neg = i;
  }
  require(pos >= 0 && neg >= 0, errc::missing_axis_direction,
          "region grid lacks +-e_" + std::to_string(axis + 1));
  return {-region.offsets(neg), region.offsets(pos)};
}

// Translate: region (-) {v}, i.e. {x - v : x in region}.
inline HalfspaceRegion minkowski_diff_point(const HalfspaceRegion& region, const Vec& v) {
  require(v.size() == region.directions.cols(), errc::dimension_mismatch,
          "point dimension differs from region dimension");
  HalfspaceRegion out = region;
  out.offsets -= region.directions * v;
  if (out.witness.size() > 0) out.witness -= v;
  return out;
}

// Region (-) axis-aligned box via its support function:
// sigma_{A (-) B}(u) = sigma_A(u) + sigma_B(-u).
inline HalfspaceRegion minkowski_diff_box(const HalfspaceRegion& region, const Vec& center,
                                          const Vec& halfwidth) {
  require(center.size() == region.directions.cols(), errc::dimension_mismatch,
          "box dimension differs from region dimension");
  require_same_dim(center, halfwidth);
  HalfspaceRegion out = region;
  for (int i = 0; i < region.size(); ++i) {
    double box_support = -region.directions.row(i).dot(center);
    for (Eigen::Index j = 0; j < halfwidth.size(); ++j)
      box_support += halfwidth(j) * std::abs(region.directions(i, j));
    out.offsets(i) += box_support;
  }
  if (out.witness.size() > 0) out.witness -= center;
  return out;
}

// ---------------------------------------------------------------------------
// 2-D vertex enumeration by angular sort + incremental deque intersection.
// ---------------------------------------------------------------------------

struct Polygon2D {
  std::vector<Eigen::Vector2d> vertices;  // counterclockwise
};

namespace detail {

// Directed boundary line of {x : <u,x> <= c}: point p0 = c*u on the line,
// direction t = rot90(u); the feasible side is the left of (p0, t).
struct BoundaryLine {
  Eigen::Vector2d p0, t;
  double angle = 0.0;
  double offset = 0.0;
  Eigen::Vector2d normal;
};

inline double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

inline Eigen::Vector2d line_intersection(const BoundaryLine& a, const BoundaryLine& b) {
  const double denom = cross2(a.t, b.t);
  const double s = cross2(b.p0 - a.p0, b.t) / denom;
  return a.p0 + s * a.t;
}

inline bool strictly_outside(const BoundaryLine& l, const Eigen::Vector2d& pt, double eps) {
  return l.normal.dot(pt) > l.offset + eps;
}

}  // namespace detail

// Convex polygon of a bounded 2-D region. Near-parallel constraints (angular
// gap < 1e-9 rad) are merged keeping the binding one. Degenerate regions can
// yield polygons with fewer than three distinct vertices.
inline Polygon2D vertices_2d(const HalfspaceRegion& region) {
  require(region.dim() == 2, errc::bad_dimension, "vertex enumeration needs d = 2");
  require(region.size() >= 1, errc::empty_region, "no constraints");

  const double scale =
      std::max(1.0, region.offsets.cwiseAbs().maxCoeff());
  const double bound = 4.0 * scale + 1.0;
  std::vector<detail::BoundaryLine> lines;
  lines.reserve(static_cast<std::size_t>(region.size()) + 4);
  auto add_line = [&](const Eigen::Vector2d& u, double c) {
    detail::BoundaryLine l;
    l.normal = u;
    l.offset = c;
    l.p0 = c * u;
    l.t = Eigen::Vector2d(-u.y(), u.x());
    l.angle = std::atan2(l.t.y(), l.t.x());
    lines.push_back(l);
  };
  for (int i = 0; i < region.size(); ++i)
    add_line(region.directions.row(i).transpose(), region.offsets(i));
  // Enclosing box keeps the intersection bounded; it is redundant for every
  // region actually produced by support profiles.
  add_line(Eigen::Vector2d(1, 0), bound);
  add_line(Eigen::Vector2d(-1, 0), bound);
  add_line(Eigen::Vector2d(0, 1), bound);
  add_line(Eigen::Vector2d(0, -1), bound);

  std::sort(lines.begin(), lines.end(),
            [](const auto& a, const auto& b) { return a.angle < b.angle; });
  // Merge near-parallel constraints, keeping the smaller offset.
  std::vector<detail::BoundaryLine> merged;
  for (const auto& l : lines) {
    if (!merged.empty() && std::abs(l.angle - merged.back().angle) < 1e-9) {
      if (l.offset < merged.back().offset) merged.back() = l;
    } else {
      merged.push_back(l);
    }
  }
  // Wrap-around pair at angle +-pi.
  if (merged.size() >= 2 &&
      std::abs((merged.front().angle + 2.0 * M_PI) - merged.back().angle) < 1e-9) {
    if (merged.back().offset < merged.front().offset) merged.front() = merged.back();
    merged.pop_back();
  }

  const double eps = 1e-12 * scale;
  std::deque<detail::BoundaryLine> dq;
  auto back_bad = [&](const detail::BoundaryLine& l) {
    if (dq.size() < 2) return false;
    auto pt = detail::line_intersection(dq[dq.size() - 2], dq[dq.size() - 1]);
    return detail::strictly_outside(l, pt, eps);
  };
  auto front_bad = [&](const detail::BoundaryLine& l) {
    if (dq.size() < 2) return false;
    auto pt = detail::line_intersection(dq[0], dq[1]);
    return detail::strictly_outside(l, pt, eps);
  };
  for (const auto& l : merged) {
    while (back_bad(l)) dq.pop_back();
    while (front_bad(l)) dq.pop_front();
    if (!dq.empty() && std::abs(detail::cross2(dq.back().t, l.t)) < 1e-12 &&
        dq.back().t.dot(l.t) < 0.0) {
      // Antiparallel pair: empty if the slabs do not overlap.
      if (dq.back().normal.dot(l.p0) > dq.back().offset + eps)
        fail(errc::empty_region, "contradictory antiparallel constraints");
    }
    dq.push_back(l);
  }
  while (dq.size() > 2 && back_bad(dq.front())) dq.pop_back();
  while (dq.size() > 2 && front_bad(dq.back())) dq.pop_front();
  require(dq.size() >= 3, errc::empty_region, "fewer than three active constraints");

  Polygon2D poly;
  poly.vertices.reserve(dq.size());
  for (std::size_t i = 0; i < dq.size(); ++i) {
    const auto& a = dq[i];
    const auto& b = dq[(i + 1) % dq.size()];
    if (std::abs(detail::cross2(a.t, b.t)) < 1e-15) continue;
    poly.vertices.push_back(detail::line_intersection(a, b));
  }
  // Every candidate vertex must satisfy all constraints; otherwise the
  // region is empty.
  for (const auto& v : poly.vertices)
    for (const auto& l : merged)
      if (detail::strictly_outside(l, v, 1e-6 * scale))
        fail(errc::empty_region, "half-plane intersection is empty");

  // Drop duplicate consecutive vertices (degenerate or merged corners).
  std::vector<Eigen::Vector2d> dedup;
  for (const auto& v : poly.vertices) {
    if (dedup.empty() || (v - dedup.back()).norm() > 1e-10 * scale) dedup.push_back(v);
  }
  while (dedup.size() > 1 && (dedup.front() - dedup.back()).norm() <= 1e-10 * scale)
    dedup.pop_back();
  poly.vertices = std::move(dedup);
  return poly;
}

}  // namespace lee
