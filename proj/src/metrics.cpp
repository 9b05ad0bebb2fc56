#include "wasn/metrics.hpp"

#include <cmath>

#include "wasn/error.hpp"

namespace wasn {

double mse_w(const FilterSet& filters, const FilterSet& centralized) {
  if (filters.W.size() != centralized.W.size() || filters.W.empty()) {
    throw Error(ErrorKind::ShapeMismatch, "mse_w: filter sets differ in node count");
  }
  double sum = 0.0;
  for (std::size_t q = 0; q < filters.W.size(); ++q) {
    const CMatrix& a = filters.W[q];
    const CMatrix& b = centralized.W[q];
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
      throw Error(ErrorKind::ShapeMismatch, "mse_w: filter shapes differ at node " + std::to_string(q));
    }
    sum += (a - b).squaredNorm();
  }
  return sum / static_cast<double>(filters.W.size());
}

AggregateSeries geometric_mean(const std::vector<ConvergenceSeries>& series,
                               GeometricMeanOptions options) {
  if (series.empty()) throw Error(ErrorKind::InvalidArgument, "geometric_mean: no series");
  const std::size_t n = series.front().values.size();
  for (const auto& s : series) {
    if (s.values.size() != n) {
      throw Error(ErrorKind::ShapeMismatch, "geometric_mean: series lengths differ");
    }
  }
  AggregateSeries out;
  out.n_environments = static_cast<int>(series.size());
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double log_sum = 0.0;
    for (const auto& s : series) {
      double v = s.values[i];
      if (!(v > 0.0)) {
        if (!options.clamp_floor) {
          throw Error(ErrorKind::NonPositive,
                      "geometric_mean: non-positive value at iteration " + std::to_string(i));
        }
        v = *options.clamp_floor;
      }
      log_sum += std::log(v);
    }
    out.values[i] = std::exp(log_sum / static_cast<double>(series.size()));
  }
  return out;
}

std::optional<int> iterations_to_threshold(const std::vector<double>& values, double ratio) {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "iterations_to_threshold: ratio must lie in (0, 1)");
  }
  if (values.empty()) return std::nullopt;
  const double limit = ratio * values.front();
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] <= limit) return static_cast<int>(i);
  return std::nullopt;
}

}  // namespace wasn
