#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "leebounds/dataset.hpp"
#include "leebounds/direction_grid.hpp"
#include "leebounds/stats.hpp"

namespace lee {

// ---------------------------------------------------------------------------
// Selection-model scalars.
// ---------------------------------------------------------------------------

// p_hat = P(S=1|D=0) / P(S=1|D=1), clipped to 1 when sampling noise pushes the
// ratio above 1 (the clipped flag records it).
inline TrimFraction estimate_p(const EmbeddedDataset& data) {
  int n1 = 0, n0 = 0, s1 = 0, s0 = 0;
  for (int i = 0; i < data.n(); ++i) {
    if (data.treated[i]) {
      ++n1;
      s1 += data.selected[i];
    } else {
      ++n0;
      s0 += data.selected[i];
    }
  }
  require(n1 > 0 && n0 > 0, errc::empty_arm, "both treatment arms must be nonempty");
  require(s1 > 0, errc::zero_selection, "no treated-selected units");
  require(s0 > 0, errc::zero_selection, "no control-selected units");
  const double ratio = (static_cast<double>(s0) / n0) / (static_cast<double>(s1) / n1);
  if (ratio > 1.0) return TrimFraction{1.0, true};
  return TrimFraction{ratio, false};
}

// Point-identified embedded control mean E[Psi(Y) | S=1, D=0].
inline Vec estimate_mu0(const EmbeddedDataset& data) {
  Vec sum = Vec::Zero(data.dim);
  int c = 0;
  for (int i = 0; i < data.n(); ++i)
    if (!data.treated[i] && data.selected[i]) {
      sum += data.outcomes.col(i);
      ++c;
    }
  require(c > 0, errc::empty_cell, "no control-selected units");
  return sum / static_cast<double>(c);
}

inline Vec treated_selected_mean(const EmbeddedDataset& data) {
  Vec sum = Vec::Zero(data.dim);
  int c = 0;
  for (int i = 0; i < data.n(); ++i)
    if (data.treated[i] && data.selected[i]) {
      sum += data.outcomes.col(i);
      ++c;
    }
  require(c > 0, errc::empty_cell, "no treated-selected units");
  return sum / static_cast<double>(c);
}

inline Mat treated_selected_outcomes(const EmbeddedDataset& data) {
  Mat out(data.dim, data.n_treated_selected());
  Eigen::Index j = 0;
  for (int i = 0; i < data.n(); ++i)
    if (data.treated[i] && data.selected[i]) out.col(j++) = data.outcomes.col(i);
  return out;
}

// ---------------------------------------------------------------------------
// Trimmed means.
// ---------------------------------------------------------------------------

enum class TrimMode {
  fractional,  // LP-exact: fractional weight on the marginal order statistic
  indicator,   // plain mean of {z : z >= Q(1-p)} with the ceil(n q) quantile
};

namespace detail {

// Mean of the top `mass` fraction of z. Fractional mode puts full weight on
// the top floor(n*mass) values and the remaining fractional weight on the
// next order statistic, which makes the estimator equal the box-and-sum LP
// optimum for every sample.
inline double upper_trimmed_mean(std::vector<double> z, double mass, TrimMode mode) {
  require(!z.empty(), errc::empty_cell, "trimmed mean of empty sample");
  require(mass > 0.0 && mass <= 1.0, errc::config_error, "trim mass must lie in (0,1]");
  const auto n = static_cast<double>(z.size());
  if (mode == TrimMode::indicator) {
    std::vector<double> sorted = z;
    std::sort(sorted.begin(), sorted.end());
    const double q = sorted_quantile(sorted, 1.0 - mass);
    double sum = 0.0;
    int count = 0;
    for (double v : z)
      if (v >= q) {
        sum += v;
        ++count;
      }
    return sum / count;
  }
  std::sort(z.begin(), z.end(), std::greater<double>());
  const double m = mass * n;
  auto k = static_cast<std::size_t>(std::floor(m + 1e-9));
  double frac = m - static_cast<double>(k);
  if (frac < 1e-9) frac = 0.0;
  if (k >= z.size()) {
    k = z.size();
    frac = 0.0;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) sum += z[i];
  if (frac > 0.0) sum += frac * z[k];
  return sum / m;
}

}  // namespace detail

// Upper support-function estimate in direction u: the upper-trimmed mean of
// projections <u, Psi(Y_i)> over treated-selected units, keeping mass p.
inline double trimmed_support(const EmbeddedDataset& data, const Eigen::Ref<const Vec>& u,
                              const TrimFraction& p, TrimMode mode = TrimMode::fractional) {
  require(u.size() == data.dim, errc::dimension_mismatch, "direction dimension mismatch");
  std::vector<double> z;
  z.reserve(static_cast<std::size_t>(data.n()));
  for (int i = 0; i < data.n(); ++i)
    if (data.treated[i] && data.selected[i]) z.push_back(u.dot(data.outcomes.col(i)));
  require(!z.empty(), errc::empty_cell, "no treated-selected units");
  return detail::upper_trimmed_mean(std::move(z), p.p_hat, mode);
}

// Contaminated-data bound: upper-trimmed mean keeping the top (1 - lambda)
// mass of the given projections; lambda = 0 returns the plain mean.
inline double contaminated_support(std::vector<double> samples, double lambda) {
  require(lambda >= 0.0 && lambda < 1.0, errc::bad_lambda, "lambda must lie in [0,1)");
  require(!samples.empty(), errc::empty_sample, "contaminated bound of empty sample");
  return detail::upper_trimmed_mean(std::move(samples), 1.0 - lambda, TrimMode::fractional);
}

// ---------------------------------------------------------------------------
// Support profiles over a direction grid.
// ---------------------------------------------------------------------------

struct SupportProfile {
  DirectionGrid grid;
  Vec sigma;                   // per-direction support values
  Vec variance;                // per-direction V_hat(u); empty until estimated
  TrimFraction p;
  Vec sample_mean;             // treated-selected embedded mean (region witness)
  Vec control_mean;            // control-selected embedded mean (empty if none)
  int n_treated_selected = 0;
  int n_total = 0;

  bool has_variance() const { return variance.size() == sigma.size(); }
};

inline SupportProfile support_profile(const EmbeddedDataset& data, const DirectionGrid& grid,
                                      const TrimFraction& p, TrimMode mode = TrimMode::fractional) {
  require(grid.dim() == data.dim, errc::dimension_mismatch, "grid dimension mismatch");
  SupportProfile out;
  out.grid = grid;
  out.p = p;
  out.n_total = data.n();
  const Mat ts = treated_selected_outcomes(data);
  out.n_treated_selected = static_cast<int>(ts.cols());
  out.sample_mean = ts.rowwise().mean();
  if (data.n_control_selected() > 0) out.control_mean = estimate_mu0(data);

  const Mat z = grid.directions * ts;  // N x n11 projections
  out.sigma.resize(grid.size());
  std::vector<double> buf(static_cast<std::size_t>(ts.cols()));
  for (int i = 0; i < grid.size(); ++i) {
    for (Eigen::Index j = 0; j < z.cols(); ++j) buf[static_cast<std::size_t>(j)] = z(i, j);
    out.sigma(i) = detail::upper_trimmed_mean(buf, p.p_hat, mode);
  }
  return out;
}

// Covariate-stratified combination sigma(u) = sum_x w_x sigma_x(u) on a shared
// grid; the summary trim fraction is the weight-averaged p_hat.
inline SupportProfile stratified_support(const std::vector<SupportProfile>& profiles,
                                         const StratumWeights& weights) {
  require(!profiles.empty(), errc::empty_cell, "no stratum profiles");
  require(static_cast<Eigen::Index>(profiles.size()) == weights.weights.size(),
          errc::dimension_mismatch, "profiles/weights size mismatch");
  for (const auto& pr : profiles)
    require(same_grid(pr.grid, profiles.front().grid), errc::grid_mismatch,
            "stratum profiles must share one grid");

  SupportProfile out;
  out.grid = profiles.front().grid;
  out.sigma = Vec::Zero(out.grid.size());
  out.sample_mean = Vec::Zero(out.grid.dim());
  double p_avg = 0.0;
  bool clipped = false;
  out.n_total = 0;
  out.n_treated_selected = 0;
  for (std::size_t s = 0; s < profiles.size(); ++s) {
    const double w = weights.weights(static_cast<Eigen::Index>(s));
    out.sigma += w * profiles[s].sigma;
    out.sample_mean += w * profiles[s].sample_mean;
    p_avg += w * profiles[s].p.p_hat;
    clipped = clipped || profiles[s].p.clipped;
    out.n_total += profiles[s].n_total;
    out.n_treated_selected += profiles[s].n_treated_selected;
  }
  out.p = TrimFraction{p_avg, clipped};
  return out;
}

// ---------------------------------------------------------------------------
// Stratified-aware profile builder used by estimation and by the bootstrap.
// ---------------------------------------------------------------------------

// Weights w_x = P_hat(X = x | S=1, D=0) over the strata present in the input.
inline StratumWeights control_selected_weights(const AnalysisInput& input,
                                               const std::vector<int>& stratum_ids) {
  Vec w = Vec::Zero(static_cast<Eigen::Index>(stratum_ids.size()));
  std::map<int, Eigen::Index> pos;
  for (std::size_t s = 0; s < stratum_ids.size(); ++s)
    pos[stratum_ids[s]] = static_cast<Eigen::Index>(s);
  int total = 0;
  for (int i = 0; i < input.data.n(); ++i)
    if (!input.data.treated[i] && input.data.selected[i]) {
      w(pos.at(input.stratum[static_cast<std::size_t>(i)])) += 1.0;
      ++total;
    }
  require(total > 0, errc::empty_cell, "no control-selected units for stratum weights");
  w /= static_cast<double>(total);
  std::vector<std::string> labels;
  labels.reserve(stratum_ids.size());
  for (int id : stratum_ids) labels.push_back(std::to_string(id));
  return StratumWeights{std::move(labels), std::move(w)};
}

// Single-stratum or covariate-stratified support profile with per-stratum
// trimming fractions. This is the object the bootstrap recomputes.
inline SupportProfile build_profile(const AnalysisInput& input, const DirectionGrid& grid,
                                    TrimMode mode = TrimMode::fractional) {
  if (!input.stratified()) {
    return support_profile(input.data, grid, estimate_p(input.data), mode);
  }
  std::vector<int> ids;
  for (int s : input.stratum)
    if (std::find(ids.begin(), ids.end(), s) == ids.end()) ids.push_back(s);
  std::sort(ids.begin(), ids.end());

  std::vector<SupportProfile> parts;
  parts.reserve(ids.size());
  for (int id : ids) {
    std::vector<int> idx;
    for (int i = 0; i < input.data.n(); ++i)
      if (input.stratum[static_cast<std::size_t>(i)] == id) idx.push_back(i);
    EmbeddedDataset sub = input.data.subset(idx);
    parts.push_back(support_profile(sub, grid, estimate_p(sub), mode));
  }
  SupportProfile combined = stratified_support(parts, control_selected_weights(input, ids));
  combined.n_total = input.data.n();
  if (input.data.n_control_selected() > 0) combined.control_mean = estimate_mu0(input.data);
  return combined;
}

}  // namespace lee
