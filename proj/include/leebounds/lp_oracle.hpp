#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "leebounds/selection.hpp"

namespace lee {

// Independent check of the trimmed support estimator: solve
//   max (1/(n p)) sum_i z_i f_i   s.t.  0 <= f_i <= 1,  sum_i f_i = n p
// by constructing the optimal weight vector explicitly (greedy with one
// fractional weight, which is LP-optimal for a box-and-one-sum program).
// Also returns the attained mean (1/(n p)) sum_i f_i x_i, a feasible point of
// the sample-level sharp set.
struct LpSupportSolution {
  double value = 0.0;
  Vec weights;        // f in [0,1]^n, sum = n p
  Vec attained_mean;  // (1/(n p)) X f
};

inline LpSupportSolution lp_support_solve(const Mat& outcomes, const Vec& u, double p) {
  const auto n = static_cast<std::size_t>(outcomes.cols());
  require(n > 0, errc::empty_cell, "LP oracle needs at least one observation");
  require(p > 0.0 && p <= 1.0, errc::config_error, "trim mass must lie in (0,1]");
  require(u.size() == outcomes.rows(), errc::dimension_mismatch, "direction dimension mismatch");

  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = u.dot(outcomes.col(static_cast<Eigen::Index>(i)));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return z[a] > z[b]; });

  const double total = p * static_cast<double>(n);
  auto k = static_cast<std::size_t>(std::floor(total + 1e-9));
  double frac = total - static_cast<double>(k);
  if (frac < 1e-9) frac = 0.0;
  if (k >= n) {
    k = n;
    frac = 0.0;
  }

  LpSupportSolution sol;
  sol.weights = Vec::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < k; ++r) sol.weights(static_cast<Eigen::Index>(order[r])) = 1.0;
  if (frac > 0.0) sol.weights(static_cast<Eigen::Index>(order[k])) = frac;

  sol.attained_mean = (outcomes * sol.weights) / total;
  sol.value = 0.0;
  for (std::size_t i = 0; i < n; ++i) sol.value += z[i] * sol.weights(static_cast<Eigen::Index>(i));
  sol.value /= total;
  return sol;
}

inline double lp_support_oracle(const EmbeddedDataset& data, const Vec& u, const TrimFraction& p) {
  return lp_support_solve(treated_selected_outcomes(data), u, p.p_hat).value;
}

}  // namespace lee
