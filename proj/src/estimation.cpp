#include "wasn/estimation.hpp"

#include <random>
#include <sstream>

#include "wasn/error.hpp"

namespace wasn {

namespace {

CMatrix self_block(const SensorLayout& layout, int k) {
  CMatrix c = CMatrix::Zero(layout.M(), layout.M_q);
  c.middleRows(layout.offset(k), layout.M_q).setIdentity();
  return c;
}

ObservationMap assemble(const SensorLayout& layout, int k, const std::vector<CMatrix>& blocks,
                        std::vector<int> heads) {
  ObservationMap map;
  map.self_rows = layout.M_q;
  map.dim = layout.M_q + layout.Q * static_cast<int>(blocks.size());
  map.C.resize(layout.M(), map.dim);
  map.C.leftCols(layout.M_q) = self_block(layout, k);
  int col = layout.M_q;
  for (const CMatrix& b : blocks) {
    map.C.middleCols(col, layout.Q) = b;
    col += layout.Q;
  }
  map.block_heads = std::move(heads);
  return map;
}

void require_node(const SensorLayout& layout, int k) {
  if (k < 0 || k >= layout.K) throw Error(ErrorKind::InvalidArgument, "node index out of range");
}

CMatrix q_block(const CMatrix& w_tilde, const SensorLayout& layout, int j) {
  return w_tilde.middleRows(layout.M_q + j * layout.Q, layout.Q);
}

void advance(AlgState& state, int k, int K) {
  ++state.iteration;
  state.updating_node = (k + 1) % K;
}

CMatrix random_gaussian(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  CMatrix m(rows, cols);
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) {
      const double re = n(rng);
      const double im = n(rng);
      m(r, c) = cplx(re, im);
    }
  }
  return m;
}

}  // namespace

const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Centralized: return "Centralized";
    case Algorithm::DANSE: return "DANSE";
    case Algorithm::TIDANSE: return "TIDANSE";
    case Algorithm::TIDANSEplus: return "TIDANSEplus";
  }
  return "?";
}

Algorithm algorithm_from_string(const std::string& s) {
  if (s == "Centralized") return Algorithm::Centralized;
  if (s == "DANSE") return Algorithm::DANSE;
  if (s == "TIDANSE") return Algorithm::TIDANSE;
  if (s == "TIDANSEplus") return Algorithm::TIDANSEplus;
  throw Error(ErrorKind::InvalidArgument, "unknown algorithm '" + s + "'");
}

CMatrix centralized_mwf(const SCMSet& scms, const RMatrix& E_global) {
  if (E_global.rows() != scms.R_yy.rows()) {
    throw Error(ErrorKind::ShapeMismatch, "centralized_mwf: selection rows must equal M");
  }
  return solve_hpd(scms.R_yy, scms.R_ss * E_global.cast<cplx>());
}

FilterSet centralized_filters(const EstimationProblem& problem) {
  FilterSet out;
  for (const RMatrix& e : problem.selection.E_global)
    out.W.push_back(centralized_mwf(problem.scms, e));
  return out;
}

CMatrix node_transform(const CMatrix& psi_bar_q, const CMatrix& psi_bar_qp) {
  return guarded_inverse(psi_bar_qp.adjoint(), "Psi_bar") * psi_bar_q.adjoint();
}

AlgState init_state(const SensorLayout& layout, Algorithm algorithm, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  AlgState state;
  state.algorithm = algorithm;
  const CMatrix eye = CMatrix::Identity(layout.Q, layout.Q);
  for (int q = 0; q < layout.K; ++q) {
    NodeState node;
    node.W_local = random_gaussian(rng, layout.M_q, layout.Q);
    node.P = node.W_local;
    node.T = eye;
    node.G_danse.assign(layout.K, eye);
    node.G_tidanse = eye;
    state.nodes.push_back(std::move(node));
  }
  return state;
}

AlgState state_at_centralized(const EstimationProblem& problem, Algorithm algorithm,
                              const FilterSet& centralized, int reference_node) {
  const SensorLayout& layout = problem.layout;
  require_node(layout, reference_node);
  AlgState state = init_state(layout, algorithm, 0);
  const auto& psi_bar = problem.selection.Psi_bar;
  auto block = [&](int filter_node, int row_node) {
    return CMatrix(centralized.W[filter_node].middleRows(layout.offset(row_node), layout.M_q));
  };
  for (int q = 0; q < layout.K; ++q) {
    NodeState& node = state.nodes[q];
    node.W_local = block(q, q);
    switch (algorithm) {
      case Algorithm::DANSE:
        node.P = node.W_local;
        for (int m = 0; m < layout.K; ++m)
          if (m != q) node.G_danse[m] = node_transform(psi_bar[q], psi_bar[m]);
        break;
      case Algorithm::TIDANSE:
        node.G_tidanse = node_transform(psi_bar[q], psi_bar[reference_node]);
        node.P = block(reference_node, q);
        break;
      case Algorithm::TIDANSEplus:
        node.T = guarded_inverse(node_transform(psi_bar[q], psi_bar[reference_node]), "T");
        node.P = block(reference_node, q);
        break;
      case Algorithm::Centralized:
        throw Error(ErrorKind::InvalidArgument, "no distributed state for the centralized MWF");
    }
  }
  return state;
}

ObservationMap observation_map_tidansep(const AlgState& state, const SensorLayout& layout,
                                        const Tree& tree, int k) {
  require_node(layout, k);
  if (tree.root != k) {
    throw Error(ErrorKind::InvalidArgument, "observation_map_tidansep: tree root " +
                                                std::to_string(tree.root) + " != updating node " +
                                                std::to_string(k));
  }
  std::vector<CMatrix> blocks;
  std::vector<int> heads;
  for (int l : tree.upstream[k]) {
    CMatrix b = CMatrix::Zero(layout.M(), layout.Q);
    b.middleRows(layout.offset(l), layout.M_q) = state.nodes[l].P;
    for (int q : tree.upstream_closure[l]) b.middleRows(layout.offset(q), layout.M_q) = state.nodes[q].P;
    blocks.push_back(std::move(b));
    heads.push_back(l);
  }
  return assemble(layout, k, blocks, std::move(heads));
}

ObservationMap observation_map_danse(const AlgState& state, const SensorLayout& layout, int k) {
  require_node(layout, k);
  std::vector<CMatrix> blocks;
  std::vector<int> heads;
  for (int m = 0; m < layout.K; ++m) {
    if (m == k) continue;
    CMatrix b = CMatrix::Zero(layout.M(), layout.Q);
    b.middleRows(layout.offset(m), layout.M_q) = state.nodes[m].P;
    blocks.push_back(std::move(b));
    heads.push_back(m);
  }
  return assemble(layout, k, blocks, std::move(heads));
}

ObservationMap observation_map_tidanse(const AlgState& state, const SensorLayout& layout, int k) {
  require_node(layout, k);
  if (layout.K == 1) return assemble(layout, k, {}, {});
  CMatrix b = CMatrix::Zero(layout.M(), layout.Q);
  for (int m = 0; m < layout.K; ++m)
    if (m != k) b.middleRows(layout.offset(m), layout.M_q) = state.nodes[m].P;
  return assemble(layout, k, {b}, {-1});
}

RMatrix local_selection(const ObservationMap& map, const RMatrix& E_local) {
  RMatrix e = RMatrix::Zero(map.dim, E_local.cols());
  e.topRows(map.self_rows) = E_local;
  return e;
}

CMatrix local_mwf(const ObservationMap& map, const SCMSet& scms, const RMatrix& E_tilde) {
  if (E_tilde.rows() != map.dim || map.C.rows() != scms.R_yy.rows()) {
    throw Error(ErrorKind::ShapeMismatch, "local_mwf: map, SCM and selection shapes disagree");
  }
  const CMatrix ryy = hermitian_part_exact(map.C.adjoint() * scms.R_yy * map.C);
  const CMatrix rss = map.C.adjoint() * scms.R_ss * map.C;
  return solve_hpd(ryy, rss * E_tilde.cast<cplx>());
}

UpdateRecord tidansep_iteration(AlgState& state, const NetworkTopology& topology,
                                const EstimationProblem& problem) {
  const SensorLayout& layout = problem.layout;
  const int k = state.updating_node;
  const Tree tree = prune(topology.adjacency, topology.node_positions, k, topology.pruning);

  UpdateRecord rec;
  rec.node = k;
  rec.map = observation_map_tidansep(state, layout, tree, k);
  rec.W_tilde = local_mwf(rec.map, problem.scms,
                          local_selection(rec.map, problem.selection.E_local[k]));

  std::vector<CMatrix> branch_g(layout.K);
  for (std::size_t j = 0; j < rec.map.block_heads.size(); ++j)
    branch_g[rec.map.block_heads[j]] = q_block(rec.W_tilde, layout, static_cast<int>(j));

  for (int q = 0; q < layout.K; ++q) {
    NodeState& node = state.nodes[q];
    if (q == k) {
      node.W_local = rec.W_tilde.topRows(layout.M_q);
      node.T = CMatrix::Identity(layout.Q, layout.Q);
      node.P = node.W_local;
    } else {
      node.T = node.T * branch_g[tree.branch_of[q]];
      node.P = node.W_local * node.T;
    }
  }
  advance(state, k, layout.K);
  return rec;
}

UpdateRecord danse_iteration(AlgState& state, const EstimationProblem& problem) {
  const SensorLayout& layout = problem.layout;
  const int k = state.updating_node;
  UpdateRecord rec;
  rec.node = k;
  rec.map = observation_map_danse(state, layout, k);
  rec.W_tilde = local_mwf(rec.map, problem.scms,
                          local_selection(rec.map, problem.selection.E_local[k]));
  NodeState& node = state.nodes[k];
  node.W_local = rec.W_tilde.topRows(layout.M_q);
  for (std::size_t j = 0; j < rec.map.block_heads.size(); ++j)
    node.G_danse[rec.map.block_heads[j]] = q_block(rec.W_tilde, layout, static_cast<int>(j));
  node.P = node.W_local;
  advance(state, k, layout.K);
  return rec;
}

UpdateRecord tidanse_iteration(AlgState& state, const EstimationProblem& problem) {
  const SensorLayout& layout = problem.layout;
  const int k = state.updating_node;
  UpdateRecord rec;
  rec.node = k;
  rec.map = observation_map_tidanse(state, layout, k);
  rec.W_tilde = local_mwf(rec.map, problem.scms,
                          local_selection(rec.map, problem.selection.E_local[k]));
  NodeState& node = state.nodes[k];
  node.W_local = rec.W_tilde.topRows(layout.M_q);
  if (rec.map.block_heads.empty()) {
    node.P = node.W_local;
  } else {
    node.G_tidanse = q_block(rec.W_tilde, layout, 0);
    try {
      node.P = node.W_local * guarded_inverse(node.G_tidanse, "G_k");
    } catch (const Error& e) {
      std::ostringstream msg;
      msg << "TI-DANSE fusion singular at iteration " << state.iteration << ", node " << k << ": "
          << e.what();
      throw Error(ErrorKind::Singular, msg.str());
    }
  }
  advance(state, k, layout.K);
  return rec;
}

UpdateRecord iterate(AlgState& state, const EstimationProblem& problem,
                     const NetworkTopology& topology) {
  switch (state.algorithm) {
    case Algorithm::DANSE: return danse_iteration(state, problem);
    case Algorithm::TIDANSE: return tidanse_iteration(state, problem);
    case Algorithm::TIDANSEplus: return tidansep_iteration(state, topology, problem);
    case Algorithm::Centralized: break;
  }
  throw Error(ErrorKind::InvalidArgument, "the centralized MWF has no iterations");
}

FilterSet network_wide_filters(const AlgState& state, const SensorLayout& layout) {
  FilterSet out;
  for (int q = 0; q < layout.K; ++q) {
    const NodeState& node = state.nodes[q];
    CMatrix t_inv;
    if (state.algorithm == Algorithm::TIDANSEplus) {
      t_inv = guarded_inverse(node.T, "T_" + std::to_string(q));
    }
    CMatrix w(layout.M(), layout.Q);
    for (int m = 0; m < layout.K; ++m) {
      auto rows = w.middleRows(layout.offset(m), layout.M_q);
      if (m == q) {
        rows = node.W_local;
        continue;
      }
      switch (state.algorithm) {
        case Algorithm::DANSE: rows = state.nodes[m].P * node.G_danse[m]; break;
        case Algorithm::TIDANSE: rows = state.nodes[m].P * node.G_tidanse; break;
        case Algorithm::TIDANSEplus: rows = state.nodes[m].P * t_inv; break;
        case Algorithm::Centralized:
          throw Error(ErrorKind::InvalidArgument, "no distributed state for the centralized MWF");
      }
    }
    out.W.push_back(std::move(w));
  }
  return out;
}

TransmitCost transmit_cost(Algorithm algorithm, int K, int Q) {
  const long k = K;
  const long q = Q;
  switch (algorithm) {
    case Algorithm::DANSE: return {k * (k - 1) * q, 0};
    case Algorithm::TIDANSE: return {2 * (k - 1) * q, 0};
    case Algorithm::TIDANSEplus: return {2 * (k - 1) * q, q * q * (k - 1)};
    case Algorithm::Centralized: break;
  }
  throw Error(ErrorKind::InvalidArgument, "transmit_cost: not defined for the centralized MWF");
}

}  // namespace wasn
