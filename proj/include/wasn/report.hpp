#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "wasn/experiment.hpp"

namespace wasn {

inline constexpr const char* kResultsHeader =
    "environment_id,algorithm,pruning,c_target,c_achieved,iteration,mse_w,transmit_cost";
inline constexpr const char* kAggregateHeader =
    "algorithm,pruning,c_target,iteration,mse_w_geomean,n_environments";
inline constexpr const char* kFailuresHeader = "environment_id,algorithm,pruning,c_target,error";

std::string results_csv(const std::vector<ResultRow>& rows);
std::string aggregate_csv(const std::vector<AggregateRow>& rows);
std::string failures_csv(const std::vector<FailureRow>& rows);

std::vector<ResultRow> parse_results_csv(const std::string& text);
std::vector<AggregateRow> parse_aggregate_csv(const std::string& text);

/// Writes results.csv, aggregate.csv and failures.csv into dir.
void emit_csv(const ResultTable& table, const std::filesystem::path& dir);

/// Reads either a results or an aggregate CSV; results are aggregated.
std::vector<AggregateRow> load_aggregates(const std::filesystem::path& path);

/// SVG document: one panel per pruning strategy, log-scale MSE_W against
/// iteration, one curve per (algorithm, C).
std::string convergence_plot_svg(const std::vector<AggregateRow>& aggregates);
void emit_convergence_plot(const std::vector<AggregateRow>& aggregates,
                           const std::filesystem::path& path);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace wasn
