#include "wasn/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <thread>
#include <tuple>

#include "wasn/error.hpp"

namespace wasn {

namespace {

constexpr const char* kNoPruning = "none";

struct EnvironmentResult {
  std::vector<ResultRow> rows;
  std::vector<FailureRow> failures;
};

struct AdjustedNetwork {
  double c_target = 0.0;
  std::optional<Adjacency> adjacency;
  double c_achieved = std::numeric_limits<double>::quiet_NaN();
  std::string error;
};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double connectivity_or_nan(const Adjacency& adj) {
  return adj.size() >= 4 ? connectivity(adj) : std::numeric_limits<double>::quiet_NaN();
}

void append_series(std::vector<ResultRow>& rows, int env_id, Algorithm alg, const std::string& pruning,
                   double c_target, double c_achieved, const std::vector<double>& series,
                   long cost) {
  for (std::size_t i = 0; i < series.size(); ++i) {
    rows.push_back({env_id, to_string(alg), pruning, c_target, c_achieved, static_cast<int>(i),
                    series[i], cost});
  }
}

EnvironmentResult run_environment(const ExperimentSpec& spec, int m) {
  EnvironmentResult out;
  ScenarioConfig cfg = spec.scenario;
  cfg.seed = environment_seed(spec, m);
  const int K = cfg.K;

  std::optional<Scene> scene;
  try {
    scene = generate_environment(cfg);
  } catch (const Error& e) {
    out.failures.push_back({m, "*", "*", 0.0, e.what()});
    return out;
  }
  const EstimationProblem problem{scene->env.layout, build_centralized_scms(scene->env, cfg),
                                  scene->selection};
  FilterSet centralized;
  try {
    centralized = centralized_filters(problem);
  } catch (const Error& e) {
    out.failures.push_back({m, "*", "*", 0.0, e.what()});
    return out;
  }
  const std::uint64_t init_seed = derive_seed(cfg.seed, kInitStream);
  const auto& positions = scene->env.node_positions;

  std::vector<AdjustedNetwork> networks;
  for (std::size_t c = 0; c < spec.c_values.size(); ++c) {
    AdjustedNetwork net;
    net.c_target = spec.c_values[c].resolve(K);
    try {
      std::mt19937_64 rng(derive_seed(cfg.seed, kAdjustStream, c));
      net.adjacency = adjust_connectivity(scene->env.adjacency, net.c_target, rng);
      net.c_achieved = connectivity(*net.adjacency);
    } catch (const Error& e) {
      net.error = e.what();
    }
    networks.push_back(std::move(net));
  }

  for (Algorithm alg : spec.algorithms) {
    const long cost = transmit_cost(alg, K, cfg.Q).per_sample;
    auto record_failure = [&](const std::string& pruning, double c, const std::string& what) {
      out.failures.push_back({m, to_string(alg), pruning, c, what});
    };

    if (alg == Algorithm::DANSE) {
      const NetworkTopology fc{Adjacency::fully_connected(K), positions, Pruning::MMUT};
      const double c_fc = connectivity_or_nan(fc.adjacency);
      try {
        auto series = run_series(init_state(problem.layout, alg, init_seed), problem, fc,
                                 centralized, spec.iterations);
        append_series(out.rows, m, alg, kNoPruning, 1.0, c_fc, series, cost);
      } catch (const Error& e) {
        record_failure(kNoPruning, 1.0, e.what());
      }
    } else if (alg == Algorithm::TIDANSE) {
      // The global sum does not depend on the topology, so one run serves
      // every connectivity target.
      const NetworkTopology any{scene->env.adjacency, positions, Pruning::MMUT};
      std::optional<std::vector<double>> series;
      std::string error;
      try {
        series = run_series(init_state(problem.layout, alg, init_seed), problem, any, centralized,
                            spec.iterations);
      } catch (const Error& e) {
        error = e.what();
      }
      for (const auto& net : networks) {
        if (series && net.adjacency) {
          append_series(out.rows, m, alg, kNoPruning, net.c_target, net.c_achieved, *series, cost);
        } else {
          record_failure(kNoPruning, net.c_target, series ? net.error : error);
        }
      }
    } else if (alg == Algorithm::TIDANSEplus) {
      for (const auto& net : networks) {
        for (Pruning p : spec.pruning) {
          if (!net.adjacency) {
            record_failure(to_string(p), net.c_target, net.error);
            continue;
          }
          try {
            const NetworkTopology topo{*net.adjacency, positions, p};
            auto series = run_series(init_state(problem.layout, alg, init_seed), problem, topo,
                                     centralized, spec.iterations);
            append_series(out.rows, m, alg, to_string(p), net.c_target, net.c_achieved, series,
                          cost);
          } catch (const Error& e) {
            record_failure(to_string(p), net.c_target, e.what());
          }
        }
      }
    } else {
      record_failure(kNoPruning, 1.0, "centralized MWF is the reference, not a grid algorithm");
    }
  }
  return out;
}

}  // namespace

void ExperimentSpec::validate() const {
  scenario.validate();
  auto fail = [](const std::string& what) { throw Error(ErrorKind::InvalidArgument, what); };
  if (iterations < 0) fail("iterations must be >= 0");
  if (n_environments < 1) fail("n_environments must be >= 1");
  if (algorithms.empty()) fail("algorithms must not be empty");
  for (Algorithm a : algorithms)
    if (a == Algorithm::Centralized) fail("algorithms: Centralized is the reference, not a grid entry");
  const bool needs_c = std::count(algorithms.begin(), algorithms.end(), Algorithm::TIDANSE) > 0 ||
                       std::count(algorithms.begin(), algorithms.end(), Algorithm::TIDANSEplus) > 0;
  if (needs_c) {
    if (c_values.empty()) fail("c_values must not be empty");
    if (scenario.K < 4) fail("c_values need K >= 4 (connectivity metric undefined)");
    const double half = 0.5 * connectivity_step(scenario.K);
    for (const CTarget& c : c_values) {
      const double v = c.resolve(scenario.K);
      if (v < tree_connectivity(scenario.K) - half || v > 1.0 + half)
        fail("c_values: " + std::to_string(v) + " outside the achievable range");
    }
  }
  if (std::count(algorithms.begin(), algorithms.end(), Algorithm::TIDANSEplus) > 0 && pruning.empty())
    fail("pruning must not be empty when TIDANSEplus is requested");
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index) {
  return splitmix64(splitmix64(base ^ splitmix64(stream)) ^ index);
}

std::uint64_t environment_seed(const ExperimentSpec& spec, int m) {
  return spec.base_seed + static_cast<std::uint64_t>(m);
}

std::vector<double> run_series(AlgState state, const EstimationProblem& problem,
                               const NetworkTopology& topology, const FilterSet& centralized,
                               int iterations) {
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(iterations) + 1);
  values.push_back(mse_w(network_wide_filters(state, problem.layout), centralized));
  for (int i = 0; i < iterations; ++i) {
    iterate(state, problem, topology);
    values.push_back(mse_w(network_wide_filters(state, problem.layout), centralized));
  }
  return values;
}

std::vector<AggregateRow> aggregate_rows(const std::vector<ResultRow>& rows) {
  using Key = std::tuple<std::string, std::string, double>;
  std::vector<Key> order;
  std::map<Key, std::map<int, std::vector<double>>> grouped;  // key -> env -> series
  for (const ResultRow& r : rows) {
    Key key{r.algorithm, r.pruning, r.c_target};
    if (!grouped.contains(key)) order.push_back(key);
    auto& series = grouped[key][r.environment_id];
    if (static_cast<int>(series.size()) <= r.iteration) series.resize(r.iteration + 1, 0.0);
    series[r.iteration] = r.mse_w;
  }
  std::vector<AggregateRow> out;
  for (const Key& key : order) {
    std::vector<ConvergenceSeries> members;
    for (auto& [env, values] : grouped[key]) {
      ConvergenceSeries s;
      s.values = values;
      s.label.environment_id = env;
      members.push_back(std::move(s));
    }
    AggregateSeries agg;
    try {
      agg = geometric_mean(members);
    } catch (const Error&) {
      continue;
    }
    for (std::size_t i = 0; i < agg.values.size(); ++i) {
      out.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), static_cast<int>(i),
                     agg.values[i], agg.n_environments});
    }
  }
  return out;
}

ResultTable run_experiment(const ExperimentSpec& spec, int jobs) {
  spec.validate();
  const int n = spec.n_environments;
  std::vector<EnvironmentResult> per_env(n);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int m = next.fetch_add(1); m < n; m = next.fetch_add(1)) per_env[m] = run_environment(spec, m);
  };
  const int threads = std::clamp(jobs, 1, n);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  ResultTable table;
  for (auto& r : per_env) {
    table.rows.insert(table.rows.end(), r.rows.begin(), r.rows.end());
    table.failures.insert(table.failures.end(), r.failures.begin(), r.failures.end());
  }
  table.aggregates = aggregate_rows(table.rows);
  return table;
}

}  // namespace wasn
