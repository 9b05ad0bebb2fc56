#include "wasn/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "wasn/error.hpp"

namespace wasn {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& key, const std::string& what) {
  throw Error(ErrorKind::Config, "config key '" + key + "': " + what);
}

void reject_unknown(const json& obj, const std::string& prefix, const std::set<std::string>& known) {
  for (const auto& [key, value] : obj.items()) {
    if (!known.contains(key)) config_error(prefix + key, "unknown key");
  }
}

template <typename T>
void read_int(const json& obj, const std::string& prefix, const char* key, T& out) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) config_error(prefix + key, "expected integer");
  if constexpr (std::is_unsigned_v<T>) {
    if (v.is_number_unsigned()) {
      out = v.get<T>();
      return;
    }
    if (v.get<long long>() < 0) config_error(prefix + key, "expected non-negative integer");
  }
  out = static_cast<T>(v.get<long long>());
}

void read_real(const json& obj, const std::string& prefix, const char* key, double& out) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (!v.is_number()) config_error(prefix + key, "expected number");
  out = v.get<double>();
}

void read_reals(const json& obj, const std::string& prefix, const char* key,
                std::vector<double>& out) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (!v.is_array()) config_error(prefix + key, "expected array of numbers");
  out.clear();
  for (const json& e : v) {
    if (!e.is_number()) config_error(prefix + key, "expected array of numbers");
    out.push_back(e.get<double>());
  }
}

std::vector<std::string> read_strings(const json& v, const std::string& key) {
  if (!v.is_array()) config_error(key, "expected array of strings");
  std::vector<std::string> out;
  for (const json& e : v) {
    if (!e.is_string()) config_error(key, "expected array of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

ScenarioConfig parse_scenario(const json& obj) {
  const std::string p = "scenario.";
  if (!obj.is_object()) config_error("scenario", "expected object");
  reject_unknown(obj, p,
                 {"K", "M_q", "Q", "N_noise", "room_edge", "min_src_node_dist",
                  "sensor_disc_radius", "comm_radius_init", "comm_radius_step", "frequency",
                  "speed_of_sound", "latent_desired_powers", "latent_noise_powers",
                  "self_noise_power", "seed"});
  ScenarioConfig cfg;
  read_int(obj, p, "K", cfg.K);
  read_int(obj, p, "M_q", cfg.M_q);
  read_int(obj, p, "Q", cfg.Q);
  read_int(obj, p, "N_noise", cfg.N_noise);
  read_real(obj, p, "room_edge", cfg.room_edge);
  read_real(obj, p, "min_src_node_dist", cfg.min_src_node_dist);
  read_real(obj, p, "sensor_disc_radius", cfg.sensor_disc_radius);
  read_real(obj, p, "comm_radius_init", cfg.comm_radius_init);
  read_real(obj, p, "comm_radius_step", cfg.comm_radius_step);
  read_real(obj, p, "frequency", cfg.frequency);
  read_real(obj, p, "speed_of_sound", cfg.speed_of_sound);
  // Power lists default to unit powers sized by Q / N_noise.
  cfg.latent_desired_powers.assign(std::max(cfg.Q, 0), 1.0);
  cfg.latent_noise_powers.assign(std::max(cfg.N_noise, 0), 1.0);
  read_reals(obj, p, "latent_desired_powers", cfg.latent_desired_powers);
  read_reals(obj, p, "latent_noise_powers", cfg.latent_noise_powers);
  read_real(obj, p, "self_noise_power", cfg.self_noise_power);
  read_int(obj, p, "seed", cfg.seed);
  return cfg;
}

}  // namespace

ExperimentSpec parse_spec(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Config, std::string("malformed config: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::Config, "config root must be an object");
  reject_unknown(doc, "",
                 {"scenario", "algorithms", "pruning", "c_values", "iterations", "n_environments",
                  "base_seed", "output_dir"});

  ExperimentSpec spec;
  if (doc.contains("scenario")) spec.scenario = parse_scenario(doc.at("scenario"));
  if (doc.contains("algorithms")) {
    spec.algorithms.clear();
    for (const auto& s : read_strings(doc.at("algorithms"), "algorithms")) {
      try {
        spec.algorithms.push_back(algorithm_from_string(s));
      } catch (const Error&) {
        config_error("algorithms", "expected one of DANSE, TIDANSE, TIDANSEplus (got '" + s + "')");
      }
    }
  }
  if (doc.contains("pruning")) {
    spec.pruning.clear();
    for (const auto& s : read_strings(doc.at("pruning"), "pruning")) {
      try {
        spec.pruning.push_back(pruning_from_string(s));
      } catch (const Error&) {
        config_error("pruning", "expected one of MST, MMUT (got '" + s + "')");
      }
    }
  }
  if (doc.contains("c_values")) {
    const json& v = doc.at("c_values");
    if (!v.is_array()) config_error("c_values", "expected array of numbers or \"tree\"");
    spec.c_values.clear();
    for (const json& e : v) {
      if (e.is_number()) {
        spec.c_values.push_back({false, e.get<double>()});
      } else if (e.is_string() && e.get<std::string>() == "tree") {
        spec.c_values.push_back({true, 0.0});
      } else {
        config_error("c_values", "expected array of numbers or \"tree\"");
      }
    }
  }
  read_int(doc, "", "iterations", spec.iterations);
  read_int(doc, "", "n_environments", spec.n_environments);
  read_int(doc, "", "base_seed", spec.base_seed);
  if (doc.contains("output_dir")) {
    if (!doc.at("output_dir").is_string()) config_error("output_dir", "expected string");
    spec.output_dir = doc.at("output_dir").get<std::string>();
  }
  try {
    spec.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::Config, std::string("invalid config: ") + e.what());
  }
  return spec;
}

ExperimentSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "config not found: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str());
}

std::string spec_to_json(const ExperimentSpec& spec) {
  const ScenarioConfig& s = spec.scenario;
  json doc;
  doc["scenario"] = {
      {"K", s.K},
      {"M_q", s.M_q},
      {"Q", s.Q},
      {"N_noise", s.N_noise},
      {"room_edge", s.room_edge},
      {"min_src_node_dist", s.min_src_node_dist},
      {"sensor_disc_radius", s.sensor_disc_radius},
      {"comm_radius_init", s.comm_radius_init},
      {"comm_radius_step", s.comm_radius_step},
      {"frequency", s.frequency},
      {"speed_of_sound", s.speed_of_sound},
      {"latent_desired_powers", s.latent_desired_powers},
      {"latent_noise_powers", s.latent_noise_powers},
      {"self_noise_power", s.self_noise_power},
      {"seed", s.seed},
  };
  json algs = json::array();
  for (Algorithm a : spec.algorithms) algs.push_back(to_string(a));
  json prun = json::array();
  for (Pruning p : spec.pruning) prun.push_back(to_string(p));
  json cs = json::array();
  for (const CTarget& c : spec.c_values) {
    if (c.tree) {
      cs.push_back("tree");
    } else {
      cs.push_back(c.value);
    }
  }
  doc["algorithms"] = algs;
  doc["pruning"] = prun;
  doc["c_values"] = cs;
  doc["iterations"] = spec.iterations;
  doc["n_environments"] = spec.n_environments;
  doc["base_seed"] = spec.base_seed;
  doc["output_dir"] = spec.output_dir.string();
  return doc.dump(2) + "\n";
}

}  // namespace wasn
