#pragma once

#include <string>
#include <vector>

#include "leebounds/common.hpp"

namespace lee {

enum class Space {
  compositional,        // strictly positive shares, Aitchison map
  compositional_zeros,  // shares with zeros allowed, sphere log map
  distribution,         // per-unit draws, quantile evaluation points
  interval,             // [lower, upper]
  network,              // graph Laplacian, m x m
  spd,                  // symmetric positive (semi)definite, m x m
  scalar,
};

inline const char* space_name(Space s) {
  switch (s) {
    case Space::compositional: return "compositional";
    case Space::compositional_zeros: return "compositional-zeros";
    case Space::distribution: return "distribution";
    case Space::interval: return "interval";
    case Space::network: return "network";
    case Space::spd: return "spd";
    case Space::scalar: return "scalar";
  }
  return "?";
}

inline Space space_from_name(const std::string& name) {
  for (Space s : {Space::compositional, Space::compositional_zeros, Space::distribution,
                  Space::interval, Space::network, Space::spd, Space::scalar})
    if (name == space_name(s)) return s;
  fail(errc::config_error, "unknown space '" + name + "'");
}

// One raw observation before the isometric embedding is applied. `values`
// holds the space payload (shares, bounds, flattened matrix, scalar, or the
// list of draws for distributional units) and is empty when not selected.
struct RawUnit {
  std::string id;
  bool treated = false;
  bool selected = false;
  std::string covariate;  // optional discrete stratum label
  std::vector<double> values;
};

struct RawDataset {
  Space space = Space::scalar;
  int k = 0;  // parts (compositional), matrix side m (network/spd), else unused
  bool has_covariate = false;
  std::vector<RawUnit> units;

  int n() const { return static_cast<int>(units.size()); }
};

}  // namespace lee
