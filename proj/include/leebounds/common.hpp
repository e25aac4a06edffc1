#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace lee {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Error taxonomy shared across the library. Each condition that callers can
// meaningfully react to gets its own code; the CLI maps codes to exit codes.
enum class errc {
  zero_component,
  not_in_image,
  antipodal_point,
  not_tangent,
  empty_sample,
  inverted_interval,
  not_symmetric,
  not_positive_definite,
  dimension_mismatch,
  empty_arm,
  zero_selection,
  empty_cell,
  grid_mismatch,
  bad_lambda,
  bad_dimension,
  empty_region,
  missing_axis_direction,
  degenerate_resample,
  degenerate_variance,
  schema_error,
  config_error,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::zero_component: return "ZeroComponent";
    case errc::not_in_image: return "NotInImage";
    case errc::antipodal_point: return "AntipodalPoint";
    case errc::not_tangent: return "NotTangent";
    case errc::empty_sample: return "EmptySample";
    case errc::inverted_interval: return "InvertedInterval";
    case errc::not_symmetric: return "NotSymmetric";
    case errc::not_positive_definite: return "NotPositiveDefinite";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::empty_arm: return "EmptyArm";
    case errc::zero_selection: return "ZeroSelection";
    case errc::empty_cell: return "EmptyCell";
    case errc::grid_mismatch: return "GridMismatch";
    case errc::bad_lambda: return "BadLambda";
    case errc::bad_dimension: return "BadDimension";
    case errc::empty_region: return "EmptyRegion";
    case errc::missing_axis_direction: return "MissingAxisDirection";
    case errc::degenerate_resample: return "DegenerateResample";
    case errc::degenerate_variance: return "DegenerateVariance";
    case errc::schema_error: return "SchemaError";
    case errc::config_error: return "ConfigError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, errc code, const std::string& what) {
  if (!cond) fail(code, what);
}

inline void require_same_dim(const Vec& a, const Vec& b) {
  require(a.size() == b.size(), errc::dimension_mismatch,
          "vectors of size " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
}

}  // namespace lee
