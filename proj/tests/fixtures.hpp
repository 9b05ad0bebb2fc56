#pragma once

// Small builders shared by the unit and acceptance tests.

#include <cstdint>

#include "wasn/estimation.hpp"
#include "wasn/scenario.hpp"

namespace fixture {

struct Instance {
  wasn::ScenarioConfig config;
  wasn::Scene scene;
  wasn::EstimationProblem problem;
  wasn::FilterSet centralized;
};

inline Instance make_instance(wasn::ScenarioConfig cfg, std::uint64_t seed) {
  cfg.seed = seed;
  Instance in;
  in.config = cfg;
  in.scene = wasn::generate_environment(cfg);
  in.problem = {in.scene.env.layout, wasn::build_centralized_scms(in.scene.env, cfg),
                in.scene.selection};
  in.centralized = wasn::centralized_filters(in.problem);
  return in;
}

inline wasn::ScenarioConfig small_config(int K, int M_q, int Q = 1) {
  wasn::ScenarioConfig cfg;
  cfg.K = K;
  cfg.M_q = M_q;
  cfg.Q = Q;
  cfg.latent_desired_powers.assign(Q, 1.0);
  return cfg;
}

inline double rel_diff(const wasn::CMatrix& a, const wasn::CMatrix& b) {
  const double scale = std::max(a.norm(), b.norm());
  return scale == 0.0 ? 0.0 : (a - b).norm() / scale;
}

}  // namespace fixture
