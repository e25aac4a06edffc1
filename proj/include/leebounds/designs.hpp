#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "leebounds/direction_grid.hpp"
#include "leebounds/raw_data.hpp"
#include "leebounds/rng.hpp"
#include "leebounds/stats.hpp"

namespace lee {

// Synthetic designs: random 50/50 assignment, independent per-arm retention,
// and no true treatment effect unless an explicit shift is set. Selection
// draws are coupled across retention settings through the per-unit stream, so
// lowering a retention rate only removes units.
struct DesignSpec {
  enum class Kind { atus_like, sleep_like };
  Kind kind = Kind::atus_like;
  int n = 1397;
  double retention_treated = 0.90;
  double retention_control = 0.85;

  // atus-like: 3-part compositions from a fixed logistic-normal law,
  // parameterized in orthonormal tangent (ilr) coordinates.
  Vec ilr_mean;
  Vec ilr_sd;

  // sleep-like: per-unit draws from a unit-specific normal.
  double location = 7.0;
  double between_sd = 0.5;
  double within_sd = 1.0;
  int draws_per_unit = 20;
  double effect_shift = 0.0;
};

namespace detail {

constexpr std::uint64_t kAssignStream = 0x61737369676e0001ULL;
constexpr std::uint64_t kSelectStream = 0x73656c6563740001ULL;
constexpr std::uint64_t kOutcomeStream = 0x6f7574636f6d0001ULL;

inline Mat ilr_basis3() {
  return orthonormal_complement(Vec::Constant(3, 1.0 / std::sqrt(3.0)));
}

}  // namespace detail

inline DesignSpec atus_like_design(int n, double retention_treated, double retention_control) {
  require(retention_treated > 0.0 && retention_treated <= 1.0 && retention_control > 0.0 &&
              retention_control <= 1.0,
          errc::config_error, "retentions must lie in (0,1]");
  require(retention_treated >= retention_control, errc::config_error,
          "monotone design needs treated retention >= control retention");
  DesignSpec d;
  d.kind = DesignSpec::Kind::atus_like;
  d.n = n;
  d.retention_treated = retention_treated;
  d.retention_control = retention_control;
  // Fixed law: barycentric log-ratio location of shares (0.63, 0.295, 0.075)
  // with anisotropic spread, loosely calibrated to time-allocation data.
  Vec shares(3);
  shares << 0.63, 0.295, 0.075;
  Vec clr = shares.array().log();
  clr.array() -= clr.mean();
  d.ilr_mean = detail::ilr_basis3().transpose() * clr;
  d.ilr_sd = Vec(2);
  d.ilr_sd << 0.40, 0.18;
  return d;
}

inline DesignSpec sleep_like_design(int n, double retention_treated, double retention_control,
                                    double effect_shift = 0.0) {
  DesignSpec d = atus_like_design(n, retention_treated, retention_control);
  d.kind = DesignSpec::Kind::sleep_like;
  d.effect_shift = effect_shift;
  return d;
}

inline RawDataset generate_design(const DesignSpec& spec, std::uint64_t seed) {
  RawDataset raw;
  raw.space = spec.kind == DesignSpec::Kind::atus_like ? Space::compositional : Space::distribution;
  raw.k = spec.kind == DesignSpec::Kind::atus_like ? 3 : 0;
  raw.units.reserve(static_cast<std::size_t>(spec.n));
  const Mat basis = detail::ilr_basis3();
  for (int i = 0; i < spec.n; ++i) {
    RawUnit u;
    u.id = "u" + std::to_string(i + 1);
    u.treated = CounterRng::keyed(seed, {detail::kAssignStream, static_cast<std::uint64_t>(i)})
                    .next_double() < 0.5;
    const double retention = u.treated ? spec.retention_treated : spec.retention_control;
    u.selected = CounterRng::keyed(seed, {detail::kSelectStream, static_cast<std::uint64_t>(i)})
                     .next_double() < retention;
    if (u.selected) {
      auto rng = CounterRng::keyed(seed, {detail::kOutcomeStream, static_cast<std::uint64_t>(i)});
      if (spec.kind == DesignSpec::Kind::atus_like) {
        Vec ilr(2);
        ilr << spec.ilr_mean(0) + spec.ilr_sd(0) * rng.next_gaussian(),
            spec.ilr_mean(1) + spec.ilr_sd(1) * rng.next_gaussian();
        Vec clr = basis * ilr;
        const double cmax = clr.maxCoeff();
        Vec shares = (clr.array() - cmax).exp();
        shares /= shares.sum();
        u.values.assign(shares.data(), shares.data() + shares.size());
      } else {
        const double theta =
            spec.location + spec.between_sd * rng.next_gaussian() +
            (u.treated ? spec.effect_shift : 0.0);
        u.values.reserve(static_cast<std::size_t>(spec.draws_per_unit));
        for (int r = 0; r < spec.draws_per_unit; ++r)
          u.values.push_back(theta + spec.within_sd * rng.next_gaussian());
      }
    }
    raw.units.push_back(std::move(u));
  }
  return raw;
}

// Population trimming fraction of the design.
inline double design_true_p(const DesignSpec& spec) {
  return std::min(1.0, spec.retention_control / spec.retention_treated);
}

// Closed-form population support function of the atus-like design in the
// analysis (tangent) coordinates: projections are Gaussian, so the
// upper-trimmed mean is mean + sd * phi(Phi^{-1}(1-p)) / p. Selection is
// independent of the outcome, making this exact for the identified set.
inline Vec atus_true_sigma(const DesignSpec& spec, const DirectionGrid& grid) {
  require(spec.kind == DesignSpec::Kind::atus_like, errc::config_error,
          "closed-form truth is defined for the atus-like design");
  require(grid.dim() == 2, errc::dimension_mismatch, "atus-like analysis dimension is 2");
  const double p = design_true_p(spec);
  const double excess = p >= 1.0 ? 0.0 : normal_pdf(normal_quantile(1.0 - p)) / p;
  Vec sigma(grid.size());
  for (int i = 0; i < grid.size(); ++i) {
    const Vec u = grid.directions.row(i).transpose();
    const double mean_u = u.dot(spec.ilr_mean);
    const double sd_u = std::sqrt(u(0) * u(0) * spec.ilr_sd(0) * spec.ilr_sd(0) +
                                  u(1) * u(1) * spec.ilr_sd(1) * spec.ilr_sd(1));
    sigma(i) = mean_u + sd_u * excess;
  }
  return sigma;
}

}  // namespace lee
