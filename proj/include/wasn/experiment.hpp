#pragma once

// Monte-Carlo experiment grid over sensing environments, algorithms,
// pruning strategies and connectivity targets.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "wasn/estimation.hpp"
#include "wasn/metrics.hpp"
#include "wasn/scenario.hpp"

namespace wasn {

/// A connectivity target; `tree` stands for the value of a spanning tree,
/// which depends on K.
struct CTarget {
  bool tree = false;
  double value = 0.0;

  double resolve(int K) const { return tree ? tree_connectivity(K) : value; }
};

struct ExperimentSpec {
  ScenarioConfig scenario;
  std::vector<Algorithm> algorithms{Algorithm::DANSE, Algorithm::TIDANSE, Algorithm::TIDANSEplus};
  std::vector<Pruning> pruning{Pruning::MST, Pruning::MMUT};
  std::vector<CTarget> c_values{{true, 0.0}, {false, 0.25}, {false, 0.5}, {false, 0.75}, {false, 1.0}};
  int iterations = 200;
  int n_environments = 10;
  std::uint64_t base_seed = 0;
  std::filesystem::path output_dir = "results";

  void validate() const;
};

struct ResultRow {
  int environment_id = 0;
  std::string algorithm;
  std::string pruning;
  double c_target = 0.0;
  double c_achieved = 0.0;
  int iteration = 0;
  double mse_w = 0.0;
  long transmit_cost = 0;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

struct AggregateRow {
  std::string algorithm;
  std::string pruning;
  double c_target = 0.0;
  int iteration = 0;
  double mse_w_geomean = 0.0;
  int n_environments = 0;

  friend bool operator==(const AggregateRow&, const AggregateRow&) = default;
};

struct FailureRow {
  int environment_id = 0;
  std::string algorithm;
  std::string pruning;
  double c_target = 0.0;
  std::string message;
};

struct ResultTable {
  std::vector<ResultRow> rows;
  std::vector<AggregateRow> aggregates;
  std::vector<FailureRow> failures;
};

/// Seed-splitting rule: splitmix64 applied to base ^ (stream, index) words.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index = 0);

inline constexpr std::uint64_t kInitStream = 1;
inline constexpr std::uint64_t kAdjustStream = 2;

/// Scenario seed of environment m.
std::uint64_t environment_seed(const ExperimentSpec& spec, int m);

/// Runs `iterations` sequential updates and returns MSE_W^0..MSE_W^iterations.
std::vector<double> run_series(AlgState state, const EstimationProblem& problem,
                               const NetworkTopology& topology, const FilterSet& centralized,
                               int iterations);

/// Environments are distributed over `jobs` worker threads; the output does
/// not depend on the job count.
ResultTable run_experiment(const ExperimentSpec& spec, int jobs = 1);

/// Geometric means grouped by (algorithm, pruning, c_target), in first-seen
/// order of the rows.
std::vector<AggregateRow> aggregate_rows(const std::vector<ResultRow>& rows);

}  // namespace wasn
