#pragma once

// Node-specific signal estimation in the spatial-covariance domain:
// the centralized MWF and the sequential DANSE, TI-DANSE and TI-DANSE+
// updates. Fused signals and in-network sums never exist as waveforms; each
// update instead builds the linear map C_k from the centralized sensor
// vector to the updating node's observation vector and works on C^H R C.

#include <cstdint>
#include <string>
#include <vector>

#include "wasn/linalg.hpp"
#include "wasn/scenario.hpp"
#include "wasn/topology.hpp"

namespace wasn {

enum class Algorithm { Centralized, DANSE, TIDANSE, TIDANSEplus };

const char* to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& s);

struct NodeState {
  CMatrix P;        // M_q x Q fusion matrix
  CMatrix W_local;  // M_q x Q, W_qq
  CMatrix T;        // Q x Q, TI-DANSE+ only
  std::vector<CMatrix> G_danse;  // per other node, Q x Q (entry q unused)
  CMatrix G_tidanse;             // Q x Q
};

struct AlgState {
  Algorithm algorithm = Algorithm::DANSE;
  std::vector<NodeState> nodes;
  long iteration = 0;
  int updating_node = 0;
};

/// Everything an update needs that does not change between iterations.
struct EstimationProblem {
  SensorLayout layout;
  SCMSet scms;
  SelectionSet selection;
};

/// The WASN as seen by TI-DANSE+: it is re-pruned with the updating node as
/// root before every update.
struct NetworkTopology {
  Adjacency adjacency;
  std::vector<Vec3> node_positions;
  Pruning pruning = Pruning::MMUT;
};

struct ObservationMap {
  CMatrix C;  // M x dim
  int dim = 0;
  int self_rows = 0;  // M_k, the leading identity block
  /// Node heading each Q-wide block after the self block: the branch root for
  /// TI-DANSE+, the source node for DANSE, -1 for the TI-DANSE global sum.
  std::vector<int> block_heads;
};

struct FilterSet {
  std::vector<CMatrix> W;  // per node, M x Q
};

/// What a single update computed, for inspection by tests and diagnostics.
struct UpdateRecord {
  int node = 0;
  ObservationMap map;
  CMatrix W_tilde;
};

/// W_q = R_yy^{-1} R_ss E_q.
CMatrix centralized_mwf(const SCMSet& scms, const RMatrix& E_global);
FilterSet centralized_filters(const EstimationProblem& problem);

/// Psi_{q,q'} = (Psi_bar_{q'}^H)^{-1} Psi_bar_q^H, so that W_q = W_q' Psi_{q,q'}.
CMatrix node_transform(const CMatrix& psi_bar_q, const CMatrix& psi_bar_qp);

/// Random W_qq^0 with i.i.d. complex Gaussian entries (unit-variance real and
/// imaginary parts); P_q^0 = W_qq^0, T_q^0 = I and every G^0 = I, so all
/// algorithms start from the same network-wide filters.
AlgState init_state(const SensorLayout& layout, Algorithm algorithm, std::uint64_t seed);

/// State whose network-wide filters equal the given centralized filters.
AlgState state_at_centralized(const EstimationProblem& problem, Algorithm algorithm,
                              const FilterSet& centralized, int reference_node = 0);

ObservationMap observation_map_tidansep(const AlgState& state, const SensorLayout& layout,
                                        const Tree& tree, int k);
ObservationMap observation_map_danse(const AlgState& state, const SensorLayout& layout, int k);
ObservationMap observation_map_tidanse(const AlgState& state, const SensorLayout& layout, int k);

/// [E_kk; 0] for the map's dimension.
RMatrix local_selection(const ObservationMap& map, const RMatrix& E_local);

/// W~ = (C^H R_yy C)^{-1} (C^H R_ss C) E~.
CMatrix local_mwf(const ObservationMap& map, const SCMSet& scms, const RMatrix& E_tilde);

UpdateRecord tidansep_iteration(AlgState& state, const NetworkTopology& topology,
                                const EstimationProblem& problem);
UpdateRecord danse_iteration(AlgState& state, const EstimationProblem& problem);
UpdateRecord tidanse_iteration(AlgState& state, const EstimationProblem& problem);

/// Dispatches on state.algorithm; `topology` is only read by TI-DANSE+.
UpdateRecord iterate(AlgState& state, const EstimationProblem& problem,
                     const NetworkTopology& topology);

FilterSet network_wide_filters(const AlgState& state, const SensorLayout& layout);

struct TransmitCost {
  long per_sample = 0;     // complex scalars exchanged per sample per iteration
  long per_iteration = 0;  // side data (G matrices) per iteration
};

TransmitCost transmit_cost(Algorithm algorithm, int K, int Q);

}  // namespace wasn
