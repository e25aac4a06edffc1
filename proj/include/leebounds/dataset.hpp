#pragma once

#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "leebounds/common.hpp"

namespace lee {

// One observation of the selection model: treatment flag, selection flag, and
// the embedded outcome (present exactly when selected).
struct UnitRow {
  bool treated = false;
  bool selected = false;
  std::optional<Vec> outcome;
};

// Column storage of embedded observations. Outcome columns of unselected
// units are NaN so accidental use shows up immediately.
struct EmbeddedDataset {
  std::vector<std::uint8_t> treated;
  std::vector<std::uint8_t> selected;
  Mat outcomes;  // dim x n
  int dim = 0;

  int n() const { return static_cast<int>(treated.size()); }

  int count(bool d, bool s) const {
    int c = 0;
    for (int i = 0; i < n(); ++i)
      if (treated[i] == static_cast<std::uint8_t>(d) && selected[i] == static_cast<std::uint8_t>(s)) ++c;
    return c;
  }
  int n_treated() const {
    int c = 0;
    for (auto t : treated) c += t;
    return c;
  }
  int n_control() const { return n() - n_treated(); }
  int n_treated_selected() const { return count(true, true); }
  int n_control_selected() const { return count(false, true); }

  static EmbeddedDataset from_rows(const std::vector<UnitRow>& rows, int dim) {
    EmbeddedDataset d;
    d.dim = dim;
    d.treated.reserve(rows.size());
    d.selected.reserve(rows.size());
    d.outcomes = Mat::Constant(dim, static_cast<Eigen::Index>(rows.size()),
                               std::numeric_limits<double>::quiet_NaN());
    Eigen::Index i = 0;
    for (const auto& r : rows) {
      require(r.outcome.has_value() == r.selected, errc::schema_error,
              "outcome must be present exactly when selected");
      if (r.outcome) {
        require(r.outcome->size() == dim, errc::dimension_mismatch,
                "outcome dimension differs from dataset dimension");
        d.outcomes.col(i) = *r.outcome;
      }
      d.treated.push_back(r.treated ? 1 : 0);
      d.selected.push_back(r.selected ? 1 : 0);
      ++i;
    }
    return d;
  }

  // Resample by unit indices (bootstrap).
  EmbeddedDataset subset(const std::vector<int>& idx) const {
    EmbeddedDataset d;
    d.dim = dim;
    d.treated.reserve(idx.size());
    d.selected.reserve(idx.size());
    d.outcomes.resize(dim, static_cast<Eigen::Index>(idx.size()));
    Eigen::Index j = 0;
    for (int i : idx) {
      d.treated.push_back(treated[static_cast<std::size_t>(i)]);
      d.selected.push_back(selected[static_cast<std::size_t>(i)]);
      d.outcomes.col(j++) = outcomes.col(i);
    }
    return d;
  }
};

struct TrimFraction {
  double p_hat = 1.0;  // in (0, 1]
  bool clipped = false;
};

inline TrimFraction make_trim_fraction(double p, bool clipped = false) {
  require(p > 0.0 && p <= 1.0, errc::config_error, "trim fraction must lie in (0,1]");
  return TrimFraction{p, clipped};
}

struct StratumWeights {
  std::vector<std::string> labels;
  Vec weights;  // nonnegative, sum to 1
};

inline StratumWeights make_stratum_weights(std::vector<std::string> labels, Vec weights) {
  require(static_cast<Eigen::Index>(labels.size()) == weights.size(), errc::dimension_mismatch,
          "labels/weights size mismatch");
  for (Eigen::Index j = 0; j < weights.size(); ++j)
    require(weights(j) >= 0.0, errc::config_error, "stratum weights must be nonnegative");
  require(std::abs(weights.sum() - 1.0) <= 1e-12, errc::config_error,
          "stratum weights must sum to 1");
  return StratumWeights{std::move(labels), std::move(weights)};
}

// Dataset plus optional discrete-stratum labels (-1 when unused).
struct AnalysisInput {
  EmbeddedDataset data;
  std::vector<int> stratum;  // empty or size n

  bool stratified() const { return !stratum.empty(); }

  AnalysisInput subset(const std::vector<int>& idx) const {
    AnalysisInput out;
    out.data = data.subset(idx);
    if (!stratum.empty()) {
      out.stratum.reserve(idx.size());
      for (int i : idx) out.stratum.push_back(stratum[static_cast<std::size_t>(i)]);
    }
    return out;
  }
};

}  // namespace lee
