#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <thread>
#include <vector>

#include "leebounds/region.hpp"
#include "leebounds/rng.hpp"
#include "leebounds/selection.hpp"

namespace lee {

// Index-parallel loop whose result does not depend on the thread count: task i
// writes only slot i and draws randomness from a counter stream keyed by i.
template <class F>
void parallel_for(int n, int threads, F&& body) {
  threads = std::max(1, threads);
  if (threads == 1 || n <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

enum class VarianceMode { bootstrap, analytic };

struct BootstrapConfig {
  int B = 500;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  VarianceMode variance_mode = VarianceMode::bootstrap;
  int variance_B = 200;  // preliminary-round size for the bootstrap variance
  int threads = 1;
  TrimMode trim = TrimMode::fractional;
  bool recompute_p = true;                 // re-estimate p_hat on each resample
  std::optional<TrimFraction> fixed_p;     // overrides estimation (contamination mode)
  bool joint = true;                       // also build the joint region with mu0
  int max_redraws = 100;
};

namespace detail {

constexpr std::uint64_t kBootStream = 0x626f6f7473747261ULL;
constexpr std::uint64_t kVarStream = 0x76617269616e6365ULL;

inline bool is_degenerate_cell_error(const Error& e) {
  return e.code() == errc::empty_arm || e.code() == errc::zero_selection ||
         e.code() == errc::empty_cell;
}

inline SupportProfile resample_profile(const AnalysisInput& input, const DirectionGrid& grid,
                                       const BootstrapConfig& cfg, std::uint64_t stream,
                                       int replicate) {
  const int n = input.data.n();
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (int attempt = 0; attempt < cfg.max_redraws; ++attempt) {
    auto rng = CounterRng::keyed(cfg.seed, {stream, static_cast<std::uint64_t>(replicate),
                                            static_cast<std::uint64_t>(attempt)});
    for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] =
        static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
    AnalysisInput resample = input.subset(idx);
    try {
      if (cfg.fixed_p) return support_profile(resample.data, grid, *cfg.fixed_p, cfg.trim);
      if (!cfg.recompute_p) {
        TrimFraction p = estimate_p(input.data);  // original-sample p_hat
        SupportProfile pr = support_profile(resample.data, grid, p, cfg.trim);
        return pr;
      }
      return build_profile(resample, grid, cfg.trim);
    } catch (const Error& e) {
      if (!is_degenerate_cell_error(e)) throw;
      // a required (D,S) cell emptied; redraw this replicate
    }
  }
  fail(errc::degenerate_resample,
       "replicate " + std::to_string(replicate) + " emptied a required cell " +
           std::to_string(cfg.max_redraws) + " times");
}

}  // namespace detail

// B resampled support profiles. Replicate b is a pure function of
// (seed, stream_tag, b), independent of evaluation order and thread count.
inline std::vector<SupportProfile> bootstrap_profiles(const AnalysisInput& input,
                                                      const DirectionGrid& grid,
                                                      const BootstrapConfig& cfg, int B,
                                                      std::uint64_t stream_tag) {
  std::vector<SupportProfile> out(static_cast<std::size_t>(std::max(B, 0)));
  parallel_for(std::max(B, 0), cfg.threads, [&](int b) {
    out[static_cast<std::size_t>(b)] = detail::resample_profile(input, grid, cfg, stream_tag, b);
  });
  return out;
}

// Per-direction variance of the support estimator, scaled so V(u)/n is the
// variance of sigma_hat(u). Default: n times the sample variance across a
// preliminary bootstrap round on an independent stream. The analytic mode is
// the delta-method plug-in: trimmed-observation influence plus the p_hat
// ratio term.
inline Vec variance_profile(const AnalysisInput& input, const DirectionGrid& grid,
                            const BootstrapConfig& cfg) {
  const int n = input.data.n();
  require(input.data.n_treated_selected() >= 2, errc::degenerate_variance,
          "variance needs at least two treated-selected units");
  Vec v(grid.size());
  if (cfg.variance_mode == VarianceMode::bootstrap) {
    auto boots = bootstrap_profiles(input, grid, cfg, cfg.variance_B, detail::kVarStream);
    require(static_cast<int>(boots.size()) >= 2, errc::degenerate_variance,
            "bootstrap variance needs at least two replicates");
    for (int i = 0; i < grid.size(); ++i) {
      std::vector<double> s;
      s.reserve(boots.size());
      for (const auto& pr : boots) s.push_back(pr.sigma(i));
      v(i) = static_cast<double>(n) * variance_of(s);
    }
  } else {
    const TrimFraction p = cfg.fixed_p ? *cfg.fixed_p : estimate_p(input.data);
    const Mat ts = treated_selected_outcomes(input.data);
    const auto n11 = static_cast<double>(ts.cols());
    int n1 = input.data.n_treated(), n0 = input.data.n_control();
    double s1 = input.data.n_treated_selected() / std::max(1.0, static_cast<double>(n1));
    double s0 = input.data.n_control_selected() / std::max(1.0, static_cast<double>(n0));
    double var_p = 0.0;
    if (!cfg.fixed_p && n0 > 0 && n1 > 0 && s0 > 0.0 && s1 > 0.0)
      var_p = p.p_hat * p.p_hat * ((1.0 - s0) / (s0 * n0) + (1.0 - s1) / (s1 * n1));
    const Mat z = grid.directions * ts;
    for (int i = 0; i < grid.size(); ++i) {
      std::vector<double> zi(static_cast<std::size_t>(ts.cols()));
      for (Eigen::Index j = 0; j < ts.cols(); ++j) zi[static_cast<std::size_t>(j)] = z(i, j);
      std::vector<double> sorted = zi;
      std::sort(sorted.begin(), sorted.end());
      const double q = sorted_quantile(sorted, 1.0 - p.p_hat);
      const double sigma = detail::upper_trimmed_mean(zi, p.p_hat, cfg.trim);
      std::vector<double> w(zi.size());
      for (std::size_t j = 0; j < zi.size(); ++j) w[j] = std::max(zi[j] - q, 0.0);
      const double v_w = variance_of(w) / (p.p_hat * p.p_hat * n11);
      const double ratio = (q - sigma) / p.p_hat;
      v(i) = static_cast<double>(n) * (v_w + ratio * ratio * var_p);
    }
  }
  if (v.minCoeff() < 1e-12)
    fail(errc::degenerate_variance, "some direction has vanishing support-function variance");
  return v;
}

// T(b) = max_u (sigma_b(u) - sigma_hat(u)) / sqrt(V(u)/n).
inline std::vector<double> sup_t_statistics(const SupportProfile& original,
                                            const std::vector<SupportProfile>& boots,
                                            const Vec& variance, int n) {
  require(variance.size() == original.sigma.size(), errc::dimension_mismatch,
          "variance length differs from profile");
  std::vector<double> t;
  t.reserve(boots.size());
  for (const auto& b : boots) {
    require(same_grid(b.grid, original.grid), errc::grid_mismatch,
            "bootstrap profile grid differs from original");
    double sup = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < original.sigma.size(); ++i)
      sup = std::max(sup, (b.sigma(i) - original.sigma(i)) / std::sqrt(variance(i) / n));
    t.push_back(sup);
  }
  return t;
}

// ceil(B(1-alpha))-th order statistic of the bootstrap statistics.
inline double critical_value(std::vector<double> t_stats, double alpha) {
  require(!t_stats.empty(), errc::empty_sample, "critical value of empty statistics");
  require(alpha > 0.0 && alpha < 1.0, errc::config_error, "alpha must lie in (0,1)");
  std::sort(t_stats.begin(), t_stats.end());
  const auto B = static_cast<double>(t_stats.size());
  auto idx = static_cast<long long>(std::ceil(B * (1.0 - alpha) - 1e-9));
  idx = std::clamp(idx, 1LL, static_cast<long long>(t_stats.size()));
  return t_stats[static_cast<std::size_t>(idx - 1)];
}

// Offsets sigma_hat(u) + cv * sqrt(V(u)/n); contains the estimated set
// whenever cv >= 0.
inline HalfspaceRegion confidence_region(const SupportProfile& profile, const Vec& variance,
                                         double cv, int n) {
  require(std::isfinite(cv), errc::config_error, "critical value must be finite");
  require(variance.size() == profile.sigma.size(), errc::dimension_mismatch,
          "variance length differs from profile");
  HalfspaceRegion region;
  region.directions = profile.grid.directions;
  region.offsets = profile.sigma + cv * (variance / static_cast<double>(n)).cwiseSqrt();
  region.witness = profile.sample_mean;
  return region;
}

struct JointResult {
  Vec xi_hat;       // embedded control-selected mean
  Vec v0;           // per-coordinate variance of xi_hat (times n)
  Vec halfwidth;    // box halfwidths jcv * sqrt(V0(j)/n)
  double joint_cv = 0.0;
  std::vector<double> t_joint;
  HalfspaceRegion region;  // enlarged region with the joint critical value
};

struct InferenceResult {
  SupportProfile profile;
  Vec variance;
  std::vector<double> t_stats;
  double critical_value = 0.0;
  HalfspaceRegion s1_region;
  HalfspaceRegion r1_region;
  std::optional<JointResult> joint;
};

// Full bootstrap run: profile, variance, sup-T statistics, critical value,
// confidence region, and (optionally) the joint region with the control mean.
// A pure function of (input, grid, config).
inline InferenceResult run_inference(const AnalysisInput& input, const DirectionGrid& grid,
                                     const BootstrapConfig& cfg) {
  InferenceResult res;
  if (cfg.fixed_p) {
    res.profile = support_profile(input.data, grid, *cfg.fixed_p, cfg.trim);
  } else {
    res.profile = build_profile(input, grid, cfg.trim);
  }
  const int n = input.data.n();
  res.variance = variance_profile(input, grid, cfg);
  auto boots = bootstrap_profiles(input, grid, cfg, cfg.B, detail::kBootStream);
  res.t_stats = sup_t_statistics(res.profile, boots, res.variance, n);
  res.critical_value = critical_value(res.t_stats, cfg.alpha);
  res.s1_region = build_region(res.profile);
  res.r1_region = confidence_region(res.profile, res.variance, res.critical_value, n);

  if (cfg.joint) {
    JointResult joint;
    joint.xi_hat = estimate_mu0(input.data);
    const int d = input.data.dim;
    joint.v0.resize(d);
    if (cfg.variance_mode == VarianceMode::bootstrap) {
      auto var_boots = bootstrap_profiles(input, grid, cfg, cfg.variance_B, detail::kVarStream);
      for (int j = 0; j < d; ++j) {
        std::vector<double> xi;
        xi.reserve(var_boots.size());
        for (const auto& pr : var_boots) {
          require(pr.control_mean.size() == d, errc::empty_cell,
                  "bootstrap replicate lacks control-selected units");
          xi.push_back(pr.control_mean(j));
        }
        joint.v0(j) = static_cast<double>(n) * variance_of(xi);
      }
    } else {
      const int n01 = input.data.n_control_selected();
      require(n01 >= 2, errc::degenerate_variance, "joint region needs >= 2 control-selected");
      for (int j = 0; j < d; ++j) {
        std::vector<double> xj;
        xj.reserve(static_cast<std::size_t>(n01));
        for (int i = 0; i < input.data.n(); ++i)
          if (!input.data.treated[i] && input.data.selected[i])
            xj.push_back(input.data.outcomes(j, i));
        joint.v0(j) = static_cast<double>(n) * variance_of(xj) / static_cast<double>(n01);
      }
    }
    if (joint.v0.minCoeff() < 1e-12)
      fail(errc::degenerate_variance, "control mean has vanishing variance in some coordinate");

    joint.t_joint.reserve(boots.size());
    for (std::size_t b = 0; b < boots.size(); ++b) {
      double tmax = res.t_stats[b];
      const Vec& xi_b = boots[b].control_mean;
      require(xi_b.size() == d, errc::empty_cell, "bootstrap replicate lacks control mean");
      for (int j = 0; j < d; ++j)
        tmax = std::max(tmax, std::abs(xi_b(j) - joint.xi_hat(j)) / std::sqrt(joint.v0(j) / n));
      joint.t_joint.push_back(tmax);
    }
    joint.joint_cv = critical_value(joint.t_joint, cfg.alpha);
    joint.halfwidth = joint.joint_cv * (joint.v0 / static_cast<double>(n)).cwiseSqrt();
    joint.region = confidence_region(res.profile, res.variance, joint.joint_cv, n);
    res.joint = std::move(joint);
  }
  return res;
}

}  // namespace lee
