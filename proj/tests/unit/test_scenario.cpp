#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "wasn/error.hpp"
#include "wasn/scenario.hpp"

using namespace wasn;

namespace {

double max_abs(const CMatrix& a) { return a.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(GreensGain, FullCyclePhase) {
  const cplx g = greens_gain({0, 0, 0}, {1, 0, 0}, 343.0, 343.0);
  EXPECT_NEAR(g.real(), 1.0 / (4.0 * std::numbers::pi), 1e-15);
  EXPECT_NEAR(g.imag(), 0.0, 1e-15);
  EXPECT_NEAR(g.real(), 0.0795775, 1e-7);
}

TEST(GreensGain, QuarterCyclePhase) {
  const double f = 500.0, c = 343.0, r = c / (4.0 * f);
  const cplx g = greens_gain({0, 0, 0}, {0, r, 0}, f, c);
  EXPECT_NEAR(g.real(), 0.0, 1e-15);
  EXPECT_NEAR(g.imag(), -1.0 / (4.0 * std::numbers::pi * r), 1e-14);
}

TEST(GreensGain, MatchesHighPrecisionEvaluation) {
  // exp(-j 2 pi 1000 * 2.37 / 343) / (4 pi 2.37), evaluated at 30 digits.
  const cplx g = greens_gain({0, 0, 0}, {0, 0, 2.37}, 1000.0, 343.0);
  EXPECT_NEAR(g.real(), 0.0283070673110102257, 1e-15);
  EXPECT_NEAR(g.imag(), 0.0180589132107675511, 1e-15);
  EXPECT_NEAR(std::abs(g), 1.0 / (4.0 * std::numbers::pi * 2.37), 1e-15);
}

TEST(GreensGain, CoincidentPointsAreDegenerate) {
  try {
    greens_gain({1, 2, 3}, {1, 2, 3}, 1000.0, 343.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateGeometry);
    EXPECT_NE(std::string(e.what()).find("degenerate geometry"), std::string::npos);
  }
}

TEST(Scenario, DefaultShapes) {
  ScenarioConfig cfg;
  cfg.seed = 11;
  const Scene s = generate_environment(cfg);
  EXPECT_EQ(s.env.layout.M(), 30);
  EXPECT_EQ(s.env.Psi.rows(), 30);
  EXPECT_EQ(s.env.Psi.cols(), 1);
  EXPECT_EQ(s.env.Psi_noise.cols(), 3);
  EXPECT_EQ(s.selection.E_local.size(), 10u);
  EXPECT_EQ(s.selection.Psi_bar[3].rows(), 1);
}

TEST(Scenario, Deterministic) {
  ScenarioConfig cfg;
  cfg.seed = 99;
  const Scene a = generate_environment(cfg);
  const Scene b = generate_environment(cfg);
  EXPECT_EQ(a.env.node_positions, b.env.node_positions);
  EXPECT_EQ(a.env.sensor_positions, b.env.sensor_positions);
  EXPECT_TRUE(a.env.Psi == b.env.Psi);
  EXPECT_TRUE(a.env.Psi_noise == b.env.Psi_noise);
  EXPECT_EQ(a.env.adjacency, b.env.adjacency);
  EXPECT_EQ(a.env.comm_radius, b.env.comm_radius);
  cfg.seed = 100;
  EXPECT_NE(generate_environment(cfg).env.node_positions, a.env.node_positions);
}

TEST(Scenario, GeometryInvariantsOverSeeds) {
  ScenarioConfig cfg;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    cfg.seed = seed;
    const Scene s = generate_environment(cfg);
    const Environment& env = s.env;
    double closest = 1e9;
    for (const Vec3& n : env.node_positions) {
      for (const Vec3& src : env.desired_source_positions) closest = std::min(closest, (n - src).norm());
      for (const Vec3& src : env.noise_source_positions) closest = std::min(closest, (n - src).norm());
    }
    EXPECT_GE(closest, 0.5);
    for (int q = 0; q < cfg.K; ++q) {
      EXPECT_DOUBLE_EQ(env.node_positions[q].z(), cfg.room_edge / 2);
      for (const Vec3& sp : env.sensor_positions[q])
        EXPECT_LE((sp - env.node_positions[q]).norm(), cfg.sensor_disc_radius + 1e-15);
    }
    EXPECT_TRUE(env.adjacency.is_connected());
    // Steering entries follow the free-field magnitude law.
    int row = 0;
    for (const auto& node : env.sensor_positions) {
      for (const Vec3& sp : node) {
        const double r = (sp - env.desired_source_positions[0]).norm();
        EXPECT_NEAR(std::abs(env.Psi(row, 0)) * 4 * std::numbers::pi * r, 1.0, 1e-12);
        ++row;
      }
    }
  }
}

TEST(Scenario, UnsatisfiableGeometryFails) {
  ScenarioConfig cfg;
  cfg.room_edge = 1.0;
  cfg.min_src_node_dist = 5.0;
  try {
    generate_environment(cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::GeometryConstraints);
  }
}

TEST(Scenario, InvalidConfigRejected) {
  ScenarioConfig cfg;
  cfg.Q = 4;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.comm_radius_step = 0.0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.latent_noise_powers = {1.0};
  EXPECT_THROW(cfg.validate(), Error);
}

TEST(Scms, InvariantsHold) {
  ScenarioConfig cfg;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    cfg.seed = seed;
    const Scene s = generate_environment(cfg);
    const SCMSet scms = build_centralized_scms(s.env, cfg);
    EXPECT_LE(hermitian_defect(scms.R_ss), 1e-12);
    EXPECT_LE(hermitian_defect(scms.R_nn), 1e-12);
    EXPECT_LE(hermitian_defect(scms.R_yy), 1e-12);
    EXPECT_TRUE(scms.R_yy == CMatrix(scms.R_ss + scms.R_nn));
    Eigen::SelfAdjointEigenSolver<CMatrix> ess(scms.R_ss);
    const double trace = scms.R_ss.trace().real();
    EXPECT_EQ((ess.eigenvalues().array() > 1e-10 * trace).count(), cfg.Q);
    Eigen::SelfAdjointEigenSolver<CMatrix> eyy(scms.R_yy);
    EXPECT_GE(eyy.eigenvalues().minCoeff(), cfg.self_noise_power - 1e-12);
    EXPECT_EQ(scms.R_ss_lat.rows(), cfg.Q);
  }
}

TEST(Scms, ZeroDesiredPowerGivesZeroRss) {
  ScenarioConfig cfg;
  const Scene s = generate_environment(cfg);
  cfg.latent_desired_powers = {0.0};
  const SCMSet scms = build_centralized_scms(s.env, cfg);
  EXPECT_EQ(max_abs(scms.R_ss), 0.0);
  EXPECT_TRUE(scms.R_yy == scms.R_nn);
}

TEST(Scms, EigenStructureWithoutNoiseSources) {
  // 6 sensors, one desired source, only self-noise: eigenvalues are
  // sigma^2 + p ||psi||^2 once and sigma^2 five times.
  ScenarioConfig cfg;
  cfg.K = 2;
  cfg.M_q = 3;
  cfg.N_noise = 0;
  cfg.latent_noise_powers = {};
  cfg.latent_desired_powers = {2.5};
  cfg.self_noise_power = 0.03;
  cfg.seed = 4;
  const Scene s = generate_environment(cfg);
  const SCMSet scms = build_centralized_scms(s.env, cfg);
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(scms.R_yy);
  const Eigen::VectorXd ev = eig.eigenvalues();
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(ev(i), 0.03, 1e-14);
  EXPECT_NEAR(ev(5), 0.03 + 2.5 * s.env.Psi.squaredNorm(), 1e-13);
}

TEST(SensorSnr, RatioInDecibels) {
  SCMSet scms;
  scms.R_ss = CMatrix::Identity(4, 4);
  scms.R_nn = CMatrix::Identity(4, 4);
  scms.R_ss(3, 3) = 10.0;
  const SensorLayout layout{2, 2, 1};
  EXPECT_NEAR(sensor_snr(scms, layout, 0, 0), 0.0, 1e-15);
  EXPECT_NEAR(sensor_snr(scms, layout, 1, 1), 10.0, 1e-12);
  EXPECT_THROW(sensor_snr(scms, layout, 2, 0), Error);
  scms.R_nn(0, 0) = 0.0;
  EXPECT_THROW(sensor_snr(scms, layout, 0, 0), Error);
}

TEST(SensorSnr, DefaultConfigPlausibleBand) {
  ScenarioConfig cfg;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    cfg.seed = seed;
    const Scene s = generate_environment(cfg);
    const SCMSet scms = build_centralized_scms(s.env, cfg);
    for (int q = 0; q < cfg.K; ++q) {
      const double snr = sensor_snr(scms, s.env.layout, q, 0);
      EXPECT_GE(snr, -30.0);
      EXPECT_LE(snr, 15.0);
    }
  }
}
