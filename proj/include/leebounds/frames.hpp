#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "leebounds/dataset.hpp"
#include "leebounds/embeddings.hpp"
#include "leebounds/raw_data.hpp"
#include "leebounds/stats.hpp"

namespace lee {

struct EmbedOptions {
  Vec eval_grid;        // distribution space: evaluation probabilities
  Vec sphere_mu;        // compositional-zeros reference; default barycenter
  SpdMode spd_mode = SpdMode::log_euclidean;
  double spd_power = 0.5;
};

// Coordinate frame the analysis runs in. Compositional images are flat
// (k-1)-dimensional subspaces of R^k; those are reduced to orthonormal
// tangent coordinates (lift maps analysis coordinates back to the embedding).
// Other spaces are analyzed in their native embedded coordinates.
struct SpaceFrame {
  Space space = Space::scalar;
  int k = 0;            // parts / matrix side
  int dim = 0;          // analysis dimension
  Vec eval_grid;        // distribution space
  Vec sphere_mu;        // compositional-zeros
  SpdMode spd_mode = SpdMode::log_euclidean;
  double spd_power = 0.5;
  Mat lift;             // d_emb x dim; empty means identity

  Vec lift_vec(const Vec& reduced) const {
    return lift.size() == 0 ? reduced : Vec(lift * reduced);
  }
  Vec reduce_vec(const Vec& embedded) const {
    return lift.size() == 0 ? embedded : Vec(lift.transpose() * embedded);
  }

  // Object-space coordinate row for reports: shares, quantile values,
  // (lower, upper), flattened matrix entries, or the scalar itself.
  Vec decode_object(const Vec& reduced) const {
    switch (space) {
      case Space::compositional: return aitchison_inverse(lift_vec(reduced)).parts;
      case Space::compositional_zeros: return sphere_inverse(lift_vec(reduced), sphere_mu).parts;
      case Space::interval: {
        IntervalPoint p = interval_inverse(reduced);
        Vec v(2);
        v << p.lower, p.upper;
        return v;
      }
      case Space::spd: {
        SpdPoint p = spd_inverse(reduced, k, spd_mode, spd_power);
        return detail::flatten(p.entries);
      }
      case Space::network:
      case Space::distribution:
      case Space::scalar: return reduced;
    }
    return reduced;
  }

  double decode_component(const Vec& reduced, int j) const { return decode_object(reduced)(j); }

  // Number of reported object-space components and their column labels.
  int n_components() const {
    switch (space) {
      case Space::compositional:
      case Space::compositional_zeros: return k;
      case Space::distribution: return static_cast<int>(eval_grid.size());
      case Space::interval: return 2;
      case Space::network:
      case Space::spd: return k * k;
      case Space::scalar: return 1;
    }
    return dim;
  }
};

struct EmbeddedInput {
  AnalysisInput input;
  SpaceFrame frame;
  std::vector<std::string> stratum_labels;  // index = stratum id
};

namespace detail {

inline Vec embed_unit(const RawUnit& u, const RawDataset& raw, const EmbedOptions& opt,
                      const SpaceFrame& frame) {
  const auto vals = [&] {
    Vec v(static_cast<Eigen::Index>(u.values.size()));
    for (std::size_t i = 0; i < u.values.size(); ++i) v(static_cast<Eigen::Index>(i)) = u.values[i];
    return v;
  }();
  switch (raw.space) {
    case Space::compositional:
      return frame.reduce_vec(aitchison_embed(make_composition(vals)));
    case Space::compositional_zeros:
      return frame.reduce_vec(sphere_embed(make_composition(vals), frame.sphere_mu));
    case Space::distribution:
      return quantile_embed(u.values, frame.eval_grid).values;
    case Space::interval:
      require(vals.size() == 2, errc::schema_error, "interval unit needs lower,upper");
      return interval_embed(IntervalPoint{vals(0), vals(1)});
    case Space::network:
      return laplacian_embed(laplacian_inverse(vals, raw.k));
    case Space::spd: {
      require(vals.size() == static_cast<Eigen::Index>(raw.k) * raw.k, errc::schema_error,
              "matrix unit needs m*m entries");
      Mat a = unflatten(vals, raw.k);
      return spd_embed(SpdPoint{std::move(a)}, frame.spd_mode, frame.spd_power);
    }
    case Space::scalar:
      require(vals.size() == 1, errc::schema_error, "scalar unit needs one value");
      return vals;
  }
  fail(errc::config_error, "unhandled space");
}

}  // namespace detail

// Apply the space's isometric map to every selected unit and set up the
// analysis coordinate frame.
inline EmbeddedInput embed_dataset(const RawDataset& raw, const EmbedOptions& opt) {
  EmbeddedInput out;
  SpaceFrame& frame = out.frame;
  frame.space = raw.space;
  frame.k = raw.k;
  frame.eval_grid = opt.eval_grid;
  frame.spd_mode = opt.spd_mode;
  frame.spd_power = opt.spd_power;

  switch (raw.space) {
    case Space::compositional:
      frame.dim = raw.k - 1;
      frame.lift = orthonormal_complement(Vec::Constant(raw.k, 1.0 / std::sqrt(double(raw.k))));
      break;
    case Space::compositional_zeros:
      frame.sphere_mu = opt.sphere_mu.size() > 0 ? opt.sphere_mu : default_sphere_reference(raw.k);
      frame.dim = raw.k - 1;
      frame.lift = orthonormal_complement(frame.sphere_mu);
      break;
    case Space::distribution:
      require(opt.eval_grid.size() >= 1, errc::config_error,
              "distribution space needs evaluation points");
      frame.dim = static_cast<int>(opt.eval_grid.size());
      break;
    case Space::interval: frame.dim = 2; break;
    case Space::network:
    case Space::spd: frame.dim = raw.k * raw.k; break;
    case Space::scalar: frame.dim = 1; break;
  }

  std::vector<UnitRow> rows;
  rows.reserve(raw.units.size());
  int row_no = 0;
  for (const RawUnit& u : raw.units) {
    ++row_no;
    UnitRow r;
    r.treated = u.treated;
    r.selected = u.selected;
    if (u.selected) {
      try {
        r.outcome = detail::embed_unit(u, raw, opt, frame);
      } catch (const Error& e) {
        fail(e.code(), std::string(e.what()) + " (unit " + u.id + ", #" +
                           std::to_string(row_no) + ")");
      }
    }
    rows.push_back(std::move(r));
  }
  out.input.data = EmbeddedDataset::from_rows(rows, frame.dim);

  if (raw.has_covariate) {
    std::vector<std::string> labels;
    for (const auto& u : raw.units)
      if (std::find(labels.begin(), labels.end(), u.covariate) == labels.end())
        labels.push_back(u.covariate);
    std::sort(labels.begin(), labels.end());
    out.stratum_labels = labels;
    out.input.stratum.reserve(raw.units.size());
    for (const auto& u : raw.units) {
      auto it = std::find(labels.begin(), labels.end(), u.covariate);
      out.input.stratum.push_back(static_cast<int>(it - labels.begin()));
    }
  }
  return out;
}

}  // namespace lee
