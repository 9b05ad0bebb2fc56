#pragma once

// WASN graphs: adjacency, the connectivity metric, random link
// addition/removal, and pruning to a spanning tree rooted at the updating
// node (minimum spanning tree, or MMUT which keeps every link of the root).

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "wasn/linalg.hpp"

namespace wasn {

struct Edge {
  int a = 0;  // a < b
  int b = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

class Adjacency {
 public:
  Adjacency() = default;
  explicit Adjacency(int k) : k_(k), links_(static_cast<std::size_t>(k) * k, 0) {}

  static Adjacency fully_connected(int k);
  static Adjacency from_edges(int k, const std::vector<Edge>& edges);

  int size() const { return k_; }
  bool linked(int q, int l) const { return links_[index(q, l)] != 0; }
  void set(int q, int l, bool on);

  int degree(int q) const;
  /// Number of undirected links; 1^T Lambda 1 equals twice this.
  int edge_count() const;
  std::vector<Edge> edges() const;
  bool is_connected() const;

  friend bool operator==(const Adjacency&, const Adjacency&) = default;

 private:
  std::size_t index(int q, int l) const { return static_cast<std::size_t>(q) * k_ + l; }

  int k_ = 0;
  std::vector<std::uint8_t> links_;
};

/// Rooted spanning tree. "Upstream" points away from the root, so data sums
/// flow from the leaves toward it.
struct Tree {
  int root = 0;
  std::vector<int> parent;                         // -1 at the root
  std::vector<std::vector<int>> upstream;          // U_q: children, ascending
  std::vector<std::vector<int>> upstream_closure;  // all descendants, ascending
  std::vector<int> branch_of;                      // root child heading q's branch; -1 at root
  std::vector<Edge> edges;                         // K-1 edges, sorted

  int size() const { return static_cast<int>(parent.size()); }
};

enum class Pruning { MST, MMUT };

const char* to_string(Pruning p);
Pruning pruning_from_string(const std::string& s);

Adjacency build_adjacency(const std::vector<Vec3>& node_positions, double comm_radius);

struct ConnectedAdjacency {
  double radius = 0.0;
  Adjacency adjacency;
};

/// Grows the radius from radius_init in radius_step increments until the
/// graph is connected.
ConnectedAdjacency ensure_connected(const std::vector<Vec3>& node_positions, double radius_init,
                                   double radius_step);

/// C = (1^T Lambda 1 - 2K) / (K (K - 3)); requires K >= 4.
double connectivity(const Adjacency& adj);

/// Change of C caused by one added link: 2 / (K (K - 3)).
double connectivity_step(int k);

/// C of any spanning tree on k nodes.
double tree_connectivity(int k);

/// Randomly adds absent links or removes non-bridge links until C is within
/// half a link step of target_c. The result stays connected.
Adjacency adjust_connectivity(const Adjacency& adj, double target_c, std::mt19937_64& rng);

/// Re-roots an undirected spanning tree at `root` and fills the upstream sets.
Tree make_tree(int k, std::vector<Edge> edges, int root);

struct TreeAnalysis {
  std::vector<std::vector<int>> upstream;
  std::vector<std::vector<int>> upstream_closure;
  std::vector<int> branch_of;
};

/// Upstream sets, their closures and branch heads from the parent pointers.
TreeAnalysis tree_analysis(int root, const std::vector<int>& parent);

/// Kruskal over Euclidean link length, ties broken by (min node, max node).
Tree prune_mst(const Adjacency& adj, const std::vector<Vec3>& node_positions, int root);

/// Keeps every link incident to root, then completes the tree with Kruskal
/// over the remaining links.
Tree prune_mmut(const Adjacency& adj, const std::vector<Vec3>& node_positions, int root);

Tree prune(const Adjacency& adj, const std::vector<Vec3>& node_positions, int root,
           Pruning strategy);

double total_length(const std::vector<Edge>& edges, const std::vector<Vec3>& node_positions);

}  // namespace wasn
