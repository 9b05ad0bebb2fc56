#include "wasn/scenario.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "wasn/error.hpp"

namespace wasn {

namespace {

constexpr int kMaxPlacementAttempts = 1000;

void require(bool ok, const std::string& field, const std::string& rule) {
  if (!ok) throw Error(ErrorKind::InvalidArgument, "ScenarioConfig." + field + ": " + rule);
}

Vec3 random_plane_point(std::mt19937_64& rng, double edge) {
  std::uniform_real_distribution<double> u(0.0, edge);
  const double x = u(rng);
  const double y = u(rng);
  return {x, y, 0.5 * edge};
}

Vec3 random_disc_offset(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = radius * std::sqrt(u(rng));
  const double theta = 2.0 * std::numbers::pi * u(rng);
  return {r * std::cos(theta), r * std::sin(theta), 0.0};
}

CMatrix steering(const std::vector<std::vector<Vec3>>& sensors, const std::vector<Vec3>& sources,
                 const ScenarioConfig& cfg) {
  CMatrix psi(cfg.M(), static_cast<Eigen::Index>(sources.size()));
  int row = 0;
  for (const auto& node : sensors) {
    for (const Vec3& s : node) {
      for (std::size_t j = 0; j < sources.size(); ++j) {
        psi(row, static_cast<Eigen::Index>(j)) =
            greens_gain(sources[j], s, cfg.frequency, cfg.speed_of_sound);
      }
      ++row;
    }
  }
  return psi;
}

CMatrix weighted_gram(const CMatrix& psi, const std::vector<double>& powers) {
  Eigen::VectorXd p = Eigen::Map<const Eigen::VectorXd>(powers.data(),
                                                       static_cast<Eigen::Index>(powers.size()));
  CMatrix r = psi * p.cast<cplx>().asDiagonal() * psi.adjoint();
  return hermitian_part_exact(r);
}

}  // namespace

void ScenarioConfig::validate() const {
  require(K >= 1, "K", "must be >= 1");
  require(M_q >= 1, "M_q", "must be >= 1");
  require(Q >= 1 && Q <= M_q, "Q", "must satisfy 1 <= Q <= M_q");
  require(N_noise >= 0, "N_noise", "must be >= 0");
  require(room_edge > 0.0, "room_edge", "must be positive");
  require(min_src_node_dist >= 0.0, "min_src_node_dist", "must be non-negative");
  require(sensor_disc_radius >= 0.0, "sensor_disc_radius", "must be non-negative");
  require(comm_radius_init >= 0.0, "comm_radius_init", "must be non-negative");
  require(comm_radius_step > 0.0, "comm_radius_step", "must be positive");
  require(frequency > 0.0, "frequency", "must be positive");
  require(speed_of_sound > 0.0, "speed_of_sound", "must be positive");
  require(static_cast<int>(latent_desired_powers.size()) == Q, "latent_desired_powers",
          "needs exactly Q entries");
  require(static_cast<int>(latent_noise_powers.size()) == N_noise, "latent_noise_powers",
          "needs exactly N_noise entries");
  for (double p : latent_desired_powers) require(p > 0.0, "latent_desired_powers", "must be > 0");
  for (double p : latent_noise_powers) require(p > 0.0, "latent_noise_powers", "must be > 0");
  require(self_noise_power > 0.0, "self_noise_power", "must be > 0");
}

cplx greens_gain(const Vec3& source_pos, const Vec3& sensor_pos, double frequency,
                 double speed_of_sound) {
  const double r = (source_pos - sensor_pos).norm();
  if (!(r > 0.0)) {
    throw Error(ErrorKind::DegenerateGeometry, "degenerate geometry: source and sensor coincide");
  }
  const double phase = -2.0 * std::numbers::pi * frequency * r / speed_of_sound;
  return std::polar(1.0 / (4.0 * std::numbers::pi * r), phase);
}

SelectionSet make_selection(const SensorLayout& layout, const CMatrix& Psi) {
  SelectionSet sel;
  for (int q = 0; q < layout.K; ++q) {
    RMatrix local = RMatrix::Zero(layout.M_q, layout.Q);
    local.topRows(layout.Q).setIdentity();
    RMatrix global = RMatrix::Zero(layout.M(), layout.Q);
    global.middleRows(layout.offset(q), layout.M_q) = local;
    sel.Psi_bar.push_back(local.cast<cplx>().transpose() *
                          Psi.middleRows(layout.offset(q), layout.M_q));
    sel.E_local.push_back(std::move(local));
    sel.E_global.push_back(std::move(global));
  }
  return sel;
}

Scene generate_environment(const ScenarioConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.seed);
  const SensorLayout layout{config.K, config.M_q, config.Q};

  for (int attempt = 0; attempt < kMaxPlacementAttempts; ++attempt) {
    Scene scene;
    Environment& env = scene.env;
    env.layout = layout;
    for (int q = 0; q < config.K; ++q)
      env.node_positions.push_back(random_plane_point(rng, config.room_edge));
    for (int j = 0; j < config.Q; ++j)
      env.desired_source_positions.push_back(random_plane_point(rng, config.room_edge));
    for (int j = 0; j < config.N_noise; ++j)
      env.noise_source_positions.push_back(random_plane_point(rng, config.room_edge));
    for (const Vec3& node : env.node_positions) {
      std::vector<Vec3> sensors;
      for (int m = 0; m < config.M_q; ++m)
        sensors.push_back(node + random_disc_offset(rng, config.sensor_disc_radius));
      env.sensor_positions.push_back(std::move(sensors));
    }

    bool far_enough = true;
    for (const Vec3& node : env.node_positions) {
      for (const auto* group : {&env.desired_source_positions, &env.noise_source_positions})
        for (const Vec3& src : *group)
          if ((node - src).norm() < config.min_src_node_dist) far_enough = false;
    }
    if (!far_enough) continue;

    try {
      env.Psi = steering(env.sensor_positions, env.desired_source_positions, config);
      env.Psi_noise = steering(env.sensor_positions, env.noise_source_positions, config);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::DegenerateGeometry) continue;
      throw;
    }

    scene.selection = make_selection(layout, env.Psi);
    bool invertible = true;
    for (const CMatrix& pb : scene.selection.Psi_bar)
      if (!(condition_number(pb) <= kConditionLimit)) invertible = false;
    if (!invertible) continue;

    auto connected = ensure_connected(env.node_positions, config.comm_radius_init,
                                      config.comm_radius_step);
    env.comm_radius = connected.radius;
    env.adjacency = std::move(connected.adjacency);
    return scene;
  }
  throw Error(ErrorKind::GeometryConstraints,
              "cannot satisfy geometry constraints after " +
                  std::to_string(kMaxPlacementAttempts) + " placement attempts");
}

SCMSet build_centralized_scms(const Environment& env, const ScenarioConfig& config) {
  SCMSet scms;
  scms.R_ss = weighted_gram(env.Psi, config.latent_desired_powers);
  scms.R_nn = weighted_gram(env.Psi_noise, config.latent_noise_powers);
  scms.R_nn.diagonal().array() += cplx(config.self_noise_power, 0.0);
  scms.R_yy = scms.R_ss + scms.R_nn;
  scms.R_ss_lat = Eigen::Map<const Eigen::VectorXd>(config.latent_desired_powers.data(),
                                                    config.Q)
                      .asDiagonal();
  return scms;
}

double sensor_snr(const SCMSet& scms, const SensorLayout& layout, int node, int sensor) {
  if (node < 0 || node >= layout.K || sensor < 0 || sensor >= layout.M_q) {
    throw Error(ErrorKind::InvalidArgument, "sensor_snr: index out of range");
  }
  const int m = layout.global_index(node, sensor);
  const double noise = scms.R_nn(m, m).real();
  if (!(noise > 0.0)) throw Error(ErrorKind::NonPositive, "sensor_snr: zero noise power");
  return 10.0 * std::log10(scms.R_ss(m, m).real() / noise);
}

}  // namespace wasn
