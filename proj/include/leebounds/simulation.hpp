#pragma once

#include <cmath>
#include <cstdint>

#include "leebounds/designs.hpp"
#include "leebounds/frames.hpp"
#include "leebounds/inference.hpp"

namespace lee {

// Monte Carlo harness for the repeated-sampling properties of the estimated
// set and its confidence region on a synthetic design.
struct CoverageConfig {
  int replications = 200;
  BootstrapConfig boot;
  int grid_size = 64;
  std::uint64_t seed = 1;
  Vec eval_grid;  // distribution designs
};

struct CoverageResult {
  int replications = 0;
  bool truth_available = false;
  double cover_truth_in_r1 = 0.0;  // fraction with sigma_true <= R1 offsets everywhere
  double cover_mu0_in_s1 = 0.0;    // fraction with embedded mu0_hat inside S1_hat
  double cover_mu0_in_r1 = 0.0;
  Vec mean_width_s1;  // mean axis-projection widths
  Vec mean_width_r1;
};

inline CoverageResult coverage_simulation(const DesignSpec& design, const CoverageConfig& cfg) {
  CoverageResult out;
  out.replications = cfg.replications;

  EmbedOptions opt;
  opt.eval_grid = cfg.eval_grid;

  // The frame and grid are fixed across replications.
  RawDataset probe = generate_design(design, mix64(cfg.seed));
  EmbeddedInput probe_emb = embed_dataset(probe, opt);
  const int d = probe_emb.frame.dim;
  DirectionGrid grid = direction_grid(d, default_scheme(d), cfg.grid_size, cfg.seed);

  Vec sigma_true;
  if (design.kind == DesignSpec::Kind::atus_like) {
    sigma_true = atus_true_sigma(design, grid);
    out.truth_available = true;
  }

  out.mean_width_s1 = Vec::Zero(d);
  out.mean_width_r1 = Vec::Zero(d);
  int hit_truth = 0, hit_s1 = 0, hit_r1 = 0;
  for (int m = 0; m < cfg.replications; ++m) {
    const std::uint64_t rep_seed = mix64(cfg.seed + 0x9e3779b97f4a7c15ULL * (m + 1));
    RawDataset raw = generate_design(design, rep_seed);
    EmbeddedInput emb = embed_dataset(raw, opt);
    BootstrapConfig boot = cfg.boot;
    boot.seed = rep_seed;
    InferenceResult inf = run_inference(emb.input, grid, boot);

    const Vec mu0 = estimate_mu0(emb.input.data);
    if (contains(inf.s1_region, mu0)) ++hit_s1;
    if (contains(inf.r1_region, mu0)) ++hit_r1;
    if (out.truth_available &&
        ((inf.r1_region.offsets - sigma_true).minCoeff() >= -1e-12)) ++hit_truth;
    for (int j = 0; j < d; ++j) {
      auto [lo_s, hi_s] = project_interval(inf.s1_region, j);
      auto [lo_r, hi_r] = project_interval(inf.r1_region, j);
      out.mean_width_s1(j) += (hi_s - lo_s) / cfg.replications;
      out.mean_width_r1(j) += (hi_r - lo_r) / cfg.replications;
    }
  }
  out.cover_truth_in_r1 = static_cast<double>(hit_truth) / cfg.replications;
  out.cover_mu0_in_s1 = static_cast<double>(hit_s1) / cfg.replications;
  out.cover_mu0_in_r1 = static_cast<double>(hit_r1) / cfg.replications;
  return out;
}

}  // namespace lee
