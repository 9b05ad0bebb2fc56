#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wasn/estimation.hpp"

namespace wasn {

struct SeriesLabel {
  std::string algorithm;
  std::string pruning;
  double c_target = 1.0;
  int environment_id = 0;
  std::uint64_t seed = 0;
};

/// MSE_W^i for i = 0..iterations; entry 0 is the random initial state.
struct ConvergenceSeries {
  std::vector<double> values;
  SeriesLabel label;
};

struct AggregateSeries {
  std::vector<double> values;
  int n_environments = 0;
};

/// (1/K) sum_q ||W_q - W_hat_q||_F^2.
double mse_w(const FilterSet& filters, const FilterSet& centralized);

struct GeometricMeanOptions {
  /// When set, values <= 0 are replaced by this floor instead of failing.
  std::optional<double> clamp_floor;
};

/// Per-iteration geometric mean over environments, computed in the log
/// domain.
AggregateSeries geometric_mean(const std::vector<ConvergenceSeries>& series,
                               GeometricMeanOptions options = {});

/// Smallest i with values[i] <= ratio * values[0].
std::optional<int> iterations_to_threshold(const std::vector<double>& values, double ratio);

}  // namespace wasn
