// Command-line driver: run the experiment grid, plot its results, or check
// the library invariants on a small random instance.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "wasn/config.hpp"
#include "wasn/error.hpp"
#include "wasn/experiment.hpp"
#include "wasn/report.hpp"
#include "wasn/validate.hpp"

namespace {

std::string environments_json(const wasn::ExperimentSpec& spec) {
  using nlohmann::json;
  json envs = json::array();
  for (int m = 0; m < spec.n_environments; ++m) {
    wasn::ScenarioConfig cfg = spec.scenario;
    cfg.seed = wasn::environment_seed(spec, m);
    json e;
    e["environment_id"] = m;
    e["seed"] = cfg.seed;
    try {
      const wasn::Scene scene = wasn::generate_environment(cfg);
      auto points = [](const std::vector<wasn::Vec3>& v) {
        json a = json::array();
        for (const auto& p : v) a.push_back({p.x(), p.y(), p.z()});
        return a;
      };
      e["node_positions"] = points(scene.env.node_positions);
      json sensors = json::array();
      for (const auto& s : scene.env.sensor_positions) sensors.push_back(points(s));
      e["sensor_positions"] = sensors;
      e["desired_source_positions"] = points(scene.env.desired_source_positions);
      e["noise_source_positions"] = points(scene.env.noise_source_positions);
      e["comm_radius"] = scene.env.comm_radius;
      json edges = json::array();
      for (const auto& edge : scene.env.adjacency.edges()) edges.push_back({edge.a, edge.b});
      e["edges"] = edges;
    } catch (const wasn::Error& err) {
      e["error"] = err.what();
    }
    envs.push_back(e);
  }
  return envs.dump(1) + "\n";
}

int run(const std::string& config, const std::string& out_dir, const std::int64_t* seed, int jobs) {
  wasn::ExperimentSpec spec = config.empty() ? wasn::ExperimentSpec{} : wasn::load_spec(config);
  if (seed) spec.base_seed = static_cast<std::uint64_t>(*seed);
  if (!out_dir.empty()) spec.output_dir = out_dir;
  const wasn::ResultTable table = wasn::run_experiment(spec, jobs);
  wasn::emit_csv(table, spec.output_dir);
  wasn::write_text(spec.output_dir / "spec.json", wasn::spec_to_json(spec));
  wasn::write_text(spec.output_dir / "environments.json", environments_json(spec));
  if (!table.aggregates.empty())
    wasn::emit_convergence_plot(table.aggregates, spec.output_dir / "convergence.svg");
  std::cout << "wrote " << table.rows.size() << " rows, " << table.aggregates.size()
            << " aggregate rows, " << table.failures.size() << " failures to "
            << spec.output_dir.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed node-specific signal estimation simulator"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir;
  std::int64_t seed = 0;
  int jobs = 1;
  auto* run_cmd = app.add_subcommand("run", "Run the experiment grid and write CSV/SVG results");
  run_cmd->add_option("--config", config, "JSON experiment config");
  run_cmd->add_option("--out", out_dir, "Output directory (overrides output_dir)");
  auto* seed_opt = run_cmd->add_option("--seed", seed, "Override base_seed");
  run_cmd->add_option("--jobs", jobs, "Parallel environments")->check(CLI::PositiveNumber);

  std::string plot_in;
  std::string plot_out;
  auto* plot_cmd = app.add_subcommand("plot", "Render a convergence figure from a CSV");
  plot_cmd->add_option("--in", plot_in, "results.csv or aggregate.csv")->required();
  plot_cmd->add_option("--out", plot_out, "SVG output path")->required();

  std::int64_t validate_seed = 7;
  auto* validate_cmd = app.add_subcommand("validate", "Check library invariants on a small instance");
  validate_cmd->add_option("--seed", validate_seed, "Instance seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return run(config, out_dir, *seed_opt ? &seed : nullptr, jobs);
    if (*plot_cmd) {
      wasn::emit_convergence_plot(wasn::load_aggregates(plot_in), plot_out);
      std::cout << "wrote " << plot_out << "\n";
      return 0;
    }
    if (*validate_cmd) {
      bool all = true;
      for (const auto& c : wasn::run_invariant_suite(static_cast<std::uint64_t>(validate_seed))) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << " (" << c.detail << ")\n";
        all = all && c.passed;
      }
      return all ? 0 : 1;
    }
  } catch (const wasn::Error& e) {
    std::cerr << "error [" << wasn::to_string(e.kind()) << "]: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
