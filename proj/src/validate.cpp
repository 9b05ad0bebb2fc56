#include "wasn/validate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "wasn/error.hpp"
#include "wasn/estimation.hpp"
#include "wasn/metrics.hpp"
#include "wasn/scenario.hpp"
#include "wasn/topology.hpp"

namespace wasn {

namespace {

std::string sci(double v) {
  std::ostringstream ss;
  ss.precision(3);
  ss << std::scientific << v;
  return ss.str();
}

double rel_diff(const CMatrix& a, const CMatrix& b) {
  const double scale = std::max(a.norm(), b.norm());
  return scale == 0.0 ? 0.0 : (a - b).norm() / scale;
}

bool is_spanning_tree(const Tree& t, const Adjacency& adj) {
  if (static_cast<int>(t.edges.size()) != adj.size() - 1) return false;
  for (const Edge& e : t.edges)
    if (!adj.linked(e.a, e.b)) return false;
  return Adjacency::from_edges(adj.size(), t.edges).is_connected();
}

double brute_force_mst_length(const Adjacency& adj, const std::vector<Vec3>& pos) {
  const auto edges = adj.edges();
  const int k = adj.size();
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> pick(edges.size(), 0);
  std::fill(pick.begin(), pick.begin() + (k - 1), 1);
  std::sort(pick.begin(), pick.end());
  do {
    std::vector<Edge> subset;
    for (std::size_t i = 0; i < edges.size(); ++i)
      if (pick[i]) subset.push_back(edges[i]);
    if (Adjacency::from_edges(k, subset).is_connected()) best = std::min(best, total_length(subset, pos));
  } while (std::next_permutation(pick.begin(), pick.end()));
  return best;
}

}  // namespace

std::vector<CheckResult> run_invariant_suite(std::uint64_t seed) {
  std::vector<CheckResult> out;
  auto check = [&](const std::string& name, const std::function<std::string(bool&)>& body) {
    CheckResult r{name, false, ""};
    try {
      r.detail = body(r.passed);
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    out.push_back(std::move(r));
  };

  ScenarioConfig cfg;
  cfg.K = 5;
  cfg.M_q = 2;
  cfg.seed = seed;
  const Scene scene = generate_environment(cfg);
  const Environment& env = scene.env;
  const EstimationProblem problem{env.layout, build_centralized_scms(env, cfg), scene.selection};
  const FilterSet central = centralized_filters(problem);
  const int K = cfg.K;

  check("SCMs Hermitian, additive, positive definite", [&](bool& ok) {
    const auto& s = problem.scms;
    const double herm = std::max({hermitian_defect(s.R_ss), hermitian_defect(s.R_nn),
                                  hermitian_defect(s.R_yy)});
    const bool additive = s.R_yy == CMatrix(s.R_ss + s.R_nn);
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(s.R_yy);
    const double lmin = eig.eigenvalues().minCoeff();
    ok = herm <= 1e-12 && additive && lmin >= cfg.self_noise_power - 1e-12;
    return "hermitian defect " + sci(herm) + ", min eigenvalue " + sci(lmin);
  });

  check("steering magnitude 1/(4 pi r)", [&](bool& ok) {
    double worst = 0.0;
    int row = 0;
    for (const auto& node : env.sensor_positions) {
      for (const Vec3& s : node) {
        const double r = (s - env.desired_source_positions[0]).norm();
        worst = std::max(worst, std::abs(std::abs(env.Psi(row, 0)) * 4.0 * M_PI * r - 1.0));
        ++row;
      }
    }
    ok = worst <= 1e-12;
    return "max relative deviation " + sci(worst);
  });

  check("centralized filters related by node transforms", [&](bool& ok) {
    double worst = 0.0;
    for (int q = 0; q < K; ++q)
      for (int p = 0; p < K; ++p) {
        const CMatrix t = node_transform(problem.selection.Psi_bar[q], problem.selection.Psi_bar[p]);
        worst = std::max(worst, (central.W[q] - central.W[p] * t).norm() / central.W[p].norm());
      }
    ok = worst <= 1e-9;
    return "max relative error " + sci(worst);
  });

  check("Kruskal MST matches brute-force enumeration", [&](bool& ok) {
    const Adjacency fc = Adjacency::fully_connected(K);
    const double mst = total_length(prune_mst(fc, env.node_positions, 0).edges, env.node_positions);
    const double brute = brute_force_mst_length(fc, env.node_positions);
    ok = mst == brute;
    return "MST " + sci(mst) + " vs enumeration " + sci(brute);
  });

  check("MMUT keeps every root link and yields a spanning tree", [&](bool& ok) {
    ok = true;
    for (int root = 0; root < K; ++root) {
      const Tree t = prune_mmut(env.adjacency, env.node_positions, root);
      const int deg = static_cast<int>(t.upstream[root].size());
      ok = ok && is_spanning_tree(t, env.adjacency) && deg == env.adjacency.degree(root);
    }
    return std::string(ok ? "all roots" : "violation found");
  });

  check("tree analysis: branch sets partition non-root nodes", [&](bool& ok) {
    ok = true;
    for (int root = 0; root < K; ++root) {
      const Tree t = prune_mst(env.adjacency, env.node_positions, root);
      std::size_t upstream_total = 0;
      for (const auto& u : t.upstream) upstream_total += u.size();
      std::vector<int> count(K, 0);
      for (int l : t.upstream[root]) {
        ++count[l];
        for (int q : t.upstream_closure[l]) ++count[q];
      }
      for (int q = 0; q < K; ++q) ok = ok && count[q] == (q == root ? 0 : 1);
      ok = ok && upstream_total == static_cast<std::size_t>(K - 1);
    }
    return std::string(ok ? "all roots" : "violation found");
  });

  check("each added link raises C by 2/(K(K-3))", [&](bool& ok) {
    Adjacency a(K);
    double worst = 0.0;
    double prev = connectivity(a);
    for (int q = 0; q < K; ++q)
      for (int l = q + 1; l < K; ++l) {
        a.set(q, l, true);
        const double c = connectivity(a);
        worst = std::max(worst, std::abs(c - prev - connectivity_step(K)));
        prev = c;
      }
    ok = worst <= 1e-15 && prev == 1.0;
    return "max deviation " + sci(worst) + ", C(FC) = " + sci(prev);
  });

  check("TI-DANSE+ root filter equals fusion-matrix stack", [&](bool& ok) {
    AlgState st = init_state(env.layout, Algorithm::TIDANSEplus, seed + 1);
    const NetworkTopology topo{env.adjacency, env.node_positions, Pruning::MMUT};
    double worst = 0.0;
    for (int i = 0; i < 4 * K; ++i) {
      const int k = tidansep_iteration(st, topo, problem).node;
      const FilterSet w = network_wide_filters(st, env.layout);
      CMatrix stack(env.layout.M(), env.layout.Q);
      for (int q = 0; q < K; ++q) stack.middleRows(env.layout.offset(q), env.layout.M_q) = st.nodes[q].P;
      worst = std::max(worst, rel_diff(w.W[k], stack));
      for (int q = 0; q < K; ++q)
        worst = std::max(worst, rel_diff(w.W[q], w.W[k] * st.nodes[q].T.inverse()));
    }
    ok = worst <= 1e-12;
    return "max relative error " + sci(worst);
  });

  check("centralized filters are a fixed point of every algorithm", [&](bool& ok) {
    const NetworkTopology topo{env.adjacency, env.node_positions, Pruning::MMUT};
    double worst = 0.0;
    for (Algorithm a : {Algorithm::DANSE, Algorithm::TIDANSE, Algorithm::TIDANSEplus}) {
      AlgState st = state_at_centralized(problem, a, central);
      for (int i = 0; i < 2 * K; ++i) {
        iterate(st, problem, topo);
        worst = std::max(worst, mse_w(network_wide_filters(st, env.layout), central));
      }
    }
    ok = worst <= 1e-10;
    return "max MSE_W " + sci(worst);
  });

  check("fully connected MMUT local solves match DANSE", [&](bool& ok) {
    const NetworkTopology fc{Adjacency::fully_connected(K), env.node_positions, Pruning::MMUT};
    AlgState plus = init_state(env.layout, Algorithm::TIDANSEplus, seed + 2);
    AlgState danse = init_state(env.layout, Algorithm::DANSE, seed + 2);
    double worst = 0.0;
    for (int i = 0; i < 3 * K; ++i) {
      const int k = plus.updating_node;
      tidansep_iteration(plus, fc, problem);
      danse_iteration(danse, problem);
      worst = std::max(worst, rel_diff(plus.nodes[k].W_local, danse.nodes[k].W_local));
    }
    ok = worst <= 1e-8;
    return "max relative W_kk difference " + sci(worst);
  });

  return out;
}

}  // namespace wasn
