#pragma once

// Random sensing environments: node/sensor/source geometry, free-field
// steering matrices and the oracle spatial covariance matrices built from
// them.

#include <cstdint>
#include <vector>

#include "wasn/linalg.hpp"
#include "wasn/topology.hpp"

namespace wasn {

struct ScenarioConfig {
  int K = 10;
  int M_q = 3;
  int Q = 1;
  int N_noise = 3;
  double room_edge = 5.0;           // m, cube edge
  double min_src_node_dist = 0.5;   // m
  double sensor_disc_radius = 0.1;  // m
  double comm_radius_init = 1.5;    // m
  double comm_radius_step = 0.1;    // m
  double frequency = 1000.0;        // Hz
  double speed_of_sound = 343.0;    // m/s
  std::vector<double> latent_desired_powers{1.0};
  std::vector<double> latent_noise_powers{1.0, 1.0, 1.0};
  double self_noise_power = 1e-2;
  std::uint64_t seed = 0;

  int M() const { return K * M_q; }
  /// Throws ErrorKind::InvalidArgument naming the first violated field.
  void validate() const;
};

/// Row offsets of each node's sensors inside the stacked M-vector. Nodes
/// carry the same sensor count, so node q occupies rows [q*M_q, (q+1)*M_q).
struct SensorLayout {
  int K = 0;
  int M_q = 0;
  int Q = 0;

  int M() const { return K * M_q; }
  int offset(int node) const { return node * M_q; }
  int global_index(int node, int sensor) const { return node * M_q + sensor; }
};

struct Environment {
  SensorLayout layout;
  std::vector<Vec3> node_positions;
  std::vector<std::vector<Vec3>> sensor_positions;  // [node][sensor]
  std::vector<Vec3> desired_source_positions;
  std::vector<Vec3> noise_source_positions;
  CMatrix Psi;        // M x Q
  CMatrix Psi_noise;  // M x N_noise
  Adjacency adjacency;
  double comm_radius = 0.0;
};

struct SCMSet {
  CMatrix R_ss;
  CMatrix R_nn;
  CMatrix R_yy;
  RMatrix R_ss_lat;  // Q x Q diagonal
};

struct SelectionSet {
  std::vector<RMatrix> E_local;   // per node, M_q x Q
  std::vector<RMatrix> E_global;  // per node, M x Q
  std::vector<CMatrix> Psi_bar;   // per node, Q x Q
};

struct Scene {
  Environment env;
  SelectionSet selection;
};

/// exp(-j 2 pi f r / c) / (4 pi r) for r = |source - sensor|.
cplx greens_gain(const Vec3& source_pos, const Vec3& sensor_pos, double frequency,
                 double speed_of_sound);

/// Selection of the first Q sensors of each node.
SelectionSet make_selection(const SensorLayout& layout, const CMatrix& Psi);

Scene generate_environment(const ScenarioConfig& config);

SCMSet build_centralized_scms(const Environment& env, const ScenarioConfig& config);

/// 10 log10 of the desired-to-noise power ratio at one sensor, in dB.
double sensor_snr(const SCMSet& scms, const SensorLayout& layout, int node, int sensor);

}  // namespace wasn
