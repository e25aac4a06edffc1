#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "leebounds/common.hpp"
#include "leebounds/rng.hpp"

namespace lee {

enum class GridScheme { equal_angle, fibonacci, gaussian };

inline const char* scheme_name(GridScheme s) {
  switch (s) {
    case GridScheme::equal_angle: return "equal-angle";
    case GridScheme::fibonacci: return "fibonacci";
    case GridScheme::gaussian: return "gaussian";
  }
  return "?";
}

// Finite set of unit directions used to evaluate support functions. The
// coordinate axes +-e_j are always present (snapped or appended), so axis
// projections can be read off offsets directly.
struct DirectionGrid {
  Mat directions;  // N x d, unit rows
  GridScheme scheme = GridScheme::gaussian;
  std::uint64_t seed = 0;
  std::vector<int> pos_axis;  // row index of +e_j
  std::vector<int> neg_axis;  // row index of -e_j

  int size() const { return static_cast<int>(directions.rows()); }
  int dim() const { return static_cast<int>(directions.cols()); }
};

inline bool same_grid(const DirectionGrid& a, const DirectionGrid& b) {
  return a.directions.rows() == b.directions.rows() &&
         a.directions.cols() == b.directions.cols() && a.directions == b.directions;
}

inline GridScheme default_scheme(int d) {
  if (d <= 2) return GridScheme::equal_angle;
  if (d == 3) return GridScheme::fibonacci;
  return GridScheme::gaussian;
}

namespace detail {

// Snap a direction to an exact axis vector when it is one up to roundoff.
inline bool snap_to_axis(Vec& u) {
  const Eigen::Index d = u.size();
  for (Eigen::Index j = 0; j < d; ++j) {
    if (std::abs(std::abs(u(j)) - 1.0) < 1e-12) {
      double rest = 0.0;
      for (Eigen::Index l = 0; l < d; ++l)
        if (l != j) rest = std::max(rest, std::abs(u(l)));
      if (rest < 1e-12) {
        double s = u(j) > 0 ? 1.0 : -1.0;
        u.setZero();
        u(j) = s;
        return true;
      }
    }
  }
  return false;
}

}  // namespace detail

inline DirectionGrid direction_grid(int d, GridScheme scheme, int n, std::uint64_t seed) {
  require(d >= 1, errc::bad_dimension, "direction grid needs d >= 1");
  require(n >= 2 * d, errc::bad_dimension, "direction grid needs at least 2d directions");

  std::vector<Vec> rows;
  rows.reserve(static_cast<std::size_t>(n) + 2 * static_cast<std::size_t>(d));

  if (d == 1) {
    rows.push_back(Vec::Constant(1, 1.0));
    rows.push_back(Vec::Constant(1, -1.0));
  } else if (scheme == GridScheme::equal_angle) {
    require(d == 2, errc::bad_dimension, "equal-angle spacing is defined for d = 2");
    for (int i = 0; i < n; ++i) {
      const double theta = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n);
      Vec u(2);
      u << std::cos(theta), std::sin(theta);
      detail::snap_to_axis(u);
      rows.push_back(u);
    }
  } else if (scheme == GridScheme::fibonacci) {
    require(d == 3, errc::bad_dimension, "Fibonacci lattice is defined for d = 3");
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i) {
      const double z = 1.0 - (2.0 * i + 1.0) / static_cast<double>(n);
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * static_cast<double>(i);
      Vec u(3);
      u << r * std::cos(phi), r * std::sin(phi), z;
      u /= u.norm();
      rows.push_back(u);
    }
  } else {
    for (int i = 0; i < n; ++i) {
      Vec u(d);
      for (int attempt = 0;; ++attempt) {
        auto rng = CounterRng::keyed(seed, {0x6772696463747260ULL, static_cast<std::uint64_t>(i),
                                            static_cast<std::uint64_t>(attempt)});
        for (int j = 0; j < d; ++j) u(j) = rng.next_gaussian();
        if (u.norm() > 1e-8) break;
      }
      u /= u.norm();
      rows.push_back(u);
    }
  }

  // Append exact axis directions when absent.
  DirectionGrid g;
  g.scheme = scheme;
  g.seed = seed;
  g.pos_axis.assign(d, -1);
  g.neg_axis.assign(d, -1);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Vec& u = rows[i];
    for (int j = 0; j < d; ++j) {
      bool axis = true;
      for (int l = 0; l < d && axis; ++l)
        if (l != j && u(l) != 0.0) axis = false;
      if (!axis) continue;
      if (u(j) == 1.0) g.pos_axis[j] = static_cast<int>(i);
      if (u(j) == -1.0) g.neg_axis[j] = static_cast<int>(i);
    }
  }
  for (int j = 0; j < d; ++j) {
    if (g.pos_axis[j] < 0) {
      Vec u = Vec::Zero(d);
      u(j) = 1.0;
      g.pos_axis[j] = static_cast<int>(rows.size());
      rows.push_back(u);
    }
    if (g.neg_axis[j] < 0) {
      Vec u = Vec::Zero(d);
      u(j) = -1.0;
      g.neg_axis[j] = static_cast<int>(rows.size());
      rows.push_back(u);
    }
  }

  g.directions.resize(static_cast<Eigen::Index>(rows.size()), d);
  for (std::size_t i = 0; i < rows.size(); ++i) g.directions.row(static_cast<Eigen::Index>(i)) = rows[i];
  return g;
}

inline DirectionGrid direction_grid(int d, int n, std::uint64_t seed) {
  return direction_grid(d, default_scheme(d), n, seed);
}

}  // namespace lee
