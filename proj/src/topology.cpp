#include "wasn/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <sstream>
#include <tuple>

#include "wasn/error.hpp"

namespace wasn {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<int> parent_;
};

Edge make_edge(int q, int l) { return q < l ? Edge{q, l} : Edge{l, q}; }

struct WeightedEdge {
  double length;
  Edge edge;
};

std::vector<WeightedEdge> sorted_by_length(const Adjacency& adj,
                                           const std::vector<Vec3>& node_positions) {
  std::vector<WeightedEdge> out;
  for (const Edge& e : adj.edges()) {
    out.push_back({(node_positions[e.a] - node_positions[e.b]).norm(), e});
  }
  std::sort(out.begin(), out.end(), [](const WeightedEdge& x, const WeightedEdge& y) {
    return std::tie(x.length, x.edge) < std::tie(y.length, y.edge);
  });
  return out;
}

void require_prunable(const Adjacency& adj, const std::vector<Vec3>& node_positions, int root) {
  if (static_cast<int>(node_positions.size()) != adj.size()) {
    throw Error(ErrorKind::ShapeMismatch, "node position count does not match adjacency size");
  }
  if (root < 0 || root >= adj.size()) {
    throw Error(ErrorKind::InvalidArgument, "tree root out of range");
  }
  if (!adj.is_connected()) {
    throw Error(ErrorKind::Disconnected, "cannot prune a disconnected graph to a spanning tree");
  }
}

}  // namespace

const char* to_string(Pruning p) { return p == Pruning::MST ? "MST" : "MMUT"; }

Pruning pruning_from_string(const std::string& s) {
  if (s == "MST") return Pruning::MST;
  if (s == "MMUT") return Pruning::MMUT;
  throw Error(ErrorKind::InvalidArgument, "unknown pruning strategy '" + s + "'");
}

Adjacency Adjacency::fully_connected(int k) {
  Adjacency adj(k);
  for (int q = 0; q < k; ++q)
    for (int l = q + 1; l < k; ++l) adj.set(q, l, true);
  return adj;
}

Adjacency Adjacency::from_edges(int k, const std::vector<Edge>& edges) {
  Adjacency adj(k);
  for (const Edge& e : edges) adj.set(e.a, e.b, true);
  return adj;
}

void Adjacency::set(int q, int l, bool on) {
  if (q == l) throw Error(ErrorKind::InvalidArgument, "self-links are not allowed");
  links_[index(q, l)] = on ? 1 : 0;
  links_[index(l, q)] = on ? 1 : 0;
}

int Adjacency::degree(int q) const {
  int d = 0;
  for (int l = 0; l < k_; ++l) d += linked(q, l) ? 1 : 0;
  return d;
}

int Adjacency::edge_count() const {
  return static_cast<int>(std::count(links_.begin(), links_.end(), std::uint8_t{1})) / 2;
}

std::vector<Edge> Adjacency::edges() const {
  std::vector<Edge> out;
  for (int q = 0; q < k_; ++q)
    for (int l = q + 1; l < k_; ++l)
      if (linked(q, l)) out.push_back({q, l});
  return out;
}

bool Adjacency::is_connected() const {
  if (k_ <= 1) return true;
  std::vector<bool> seen(k_, false);
  std::vector<int> stack{0};
  seen[0] = true;
  int reached = 1;
  while (!stack.empty()) {
    const int q = stack.back();
    stack.pop_back();
    for (int l = 0; l < k_; ++l) {
      if (linked(q, l) && !seen[l]) {
        seen[l] = true;
        ++reached;
        stack.push_back(l);
      }
    }
  }
  return reached == k_;
}

Adjacency build_adjacency(const std::vector<Vec3>& node_positions, double comm_radius) {
  const int k = static_cast<int>(node_positions.size());
  Adjacency adj(k);
  for (int q = 0; q < k; ++q) {
    for (int l = q + 1; l < k; ++l) {
      const double d = (node_positions[q] - node_positions[l]).norm();
      if (d > 0.0 && d <= comm_radius) adj.set(q, l, true);
    }
  }
  return adj;
}

ConnectedAdjacency ensure_connected(const std::vector<Vec3>& node_positions, double radius_init,
                                   double radius_step) {
  if (!(radius_step > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "comm_radius_step must be positive");
  }
  // Radii are recomputed from the step count so no rounding drift accumulates.
  for (long n = 0;; ++n) {
    const double radius = radius_init + static_cast<double>(n) * radius_step;
    Adjacency adj = build_adjacency(node_positions, radius);
    if (adj.is_connected()) return {radius, std::move(adj)};
  }
}

double connectivity(const Adjacency& adj) {
  const int k = adj.size();
  if (k <= 3) {
    throw Error(ErrorKind::ConnectivityUndefined,
                "connectivity metric undefined for K <= 3 (got K=" + std::to_string(k) + ")");
  }
  const double ones_lambda_ones = 2.0 * adj.edge_count();
  return (ones_lambda_ones - 2.0 * k) / (static_cast<double>(k) * (k - 3));
}

double connectivity_step(int k) { return 2.0 / (static_cast<double>(k) * (k - 3)); }

double tree_connectivity(int k) { return (2.0 * (k - 1) - 2.0 * k) / (static_cast<double>(k) * (k - 3)); }

Adjacency adjust_connectivity(const Adjacency& adj, double target_c, std::mt19937_64& rng) {
  const int k = adj.size();
  if (k <= 3) {
    throw Error(ErrorKind::ConnectivityUndefined, "connectivity metric undefined for K <= 3");
  }
  if (!adj.is_connected()) {
    throw Error(ErrorKind::Disconnected, "adjust_connectivity needs a connected input");
  }
  const double half_step = 0.5 * connectivity_step(k);
  if (target_c < tree_connectivity(k) - half_step || target_c > 1.0 + half_step) {
    std::ostringstream msg;
    msg << "target C=" << target_c << " outside [" << tree_connectivity(k) << ", 1] for K=" << k;
    throw Error(ErrorKind::ConnectivityUnreachable, msg.str());
  }
  const int max_edges = k * (k - 1) / 2;
  const int target_edges = std::clamp(
      static_cast<int>(std::lround((target_c * k * (k - 3) + 2.0 * k) / 2.0)), k - 1, max_edges);

  Adjacency out = adj;
  while (out.edge_count() < target_edges) {
    std::vector<Edge> absent;
    for (int q = 0; q < k; ++q)
      for (int l = q + 1; l < k; ++l)
        if (!out.linked(q, l)) absent.push_back({q, l});
    std::uniform_int_distribution<std::size_t> pick(0, absent.size() - 1);
    const Edge e = absent[pick(rng)];
    out.set(e.a, e.b, true);
  }
  while (out.edge_count() > target_edges) {
    std::vector<Edge> removable;
    for (const Edge& e : out.edges()) {
      out.set(e.a, e.b, false);
      if (out.is_connected()) removable.push_back(e);
      out.set(e.a, e.b, true);
    }
    // A connected graph with more than K-1 links always has a cycle, hence a
    // non-bridge link.
    std::uniform_int_distribution<std::size_t> pick(0, removable.size() - 1);
    const Edge e = removable[pick(rng)];
    out.set(e.a, e.b, false);
  }
  return out;
}

TreeAnalysis tree_analysis(int root, const std::vector<int>& parent) {
  const int k = static_cast<int>(parent.size());
  TreeAnalysis out;
  out.upstream.assign(k, {});
  out.upstream_closure.assign(k, {});
  out.branch_of.assign(k, -1);
  for (int q = 0; q < k; ++q) {
    if (q != root) out.upstream[parent[q]].push_back(q);
  }
  for (int q = 0; q < k; ++q) {
    if (q == root) continue;
    // Walk toward the root: every ancestor gains q as a descendant, and the
    // last node before the root heads q's branch.
    int node = q;
    while (parent[node] != root) {
      node = parent[node];
      out.upstream_closure[node].push_back(q);
    }
    out.upstream_closure[root].push_back(q);
    out.branch_of[q] = node;
  }
  for (auto& s : out.upstream_closure) std::sort(s.begin(), s.end());
  return out;
}

Tree make_tree(int k, std::vector<Edge> edges, int root) {
  if (root < 0 || root >= k) throw Error(ErrorKind::InvalidArgument, "tree root out of range");
  if (static_cast<int>(edges.size()) != k - 1) {
    throw Error(ErrorKind::InvalidArgument, "a spanning tree on K nodes needs K-1 edges");
  }
  std::vector<std::vector<int>> nbrs(k);
  for (Edge& e : edges) {
    e = make_edge(e.a, e.b);
    nbrs[e.a].push_back(e.b);
    nbrs[e.b].push_back(e.a);
  }
  std::sort(edges.begin(), edges.end());

  Tree tree;
  tree.root = root;
  tree.parent.assign(k, -2);
  tree.parent[root] = -1;
  std::queue<int> frontier;
  frontier.push(root);
  int reached = 1;
  while (!frontier.empty()) {
    const int q = frontier.front();
    frontier.pop();
    for (int l : nbrs[q]) {
      if (tree.parent[l] == -2) {
        tree.parent[l] = q;
        ++reached;
        frontier.push(l);
      }
    }
  }
  if (reached != k) throw Error(ErrorKind::Disconnected, "edge set does not span all nodes");

  TreeAnalysis analysis = tree_analysis(root, tree.parent);
  tree.upstream = std::move(analysis.upstream);
  tree.upstream_closure = std::move(analysis.upstream_closure);
  tree.branch_of = std::move(analysis.branch_of);
  tree.edges = std::move(edges);
  return tree;
}

Tree prune_mst(const Adjacency& adj, const std::vector<Vec3>& node_positions, int root) {
  require_prunable(adj, node_positions, root);
  const int k = adj.size();
  DisjointSets sets(k);
  std::vector<Edge> chosen;
  for (const auto& we : sorted_by_length(adj, node_positions)) {
    if (sets.unite(we.edge.a, we.edge.b)) chosen.push_back(we.edge);
  }
  return make_tree(k, std::move(chosen), root);
}

Tree prune_mmut(const Adjacency& adj, const std::vector<Vec3>& node_positions, int root) {
  require_prunable(adj, node_positions, root);
  const int k = adj.size();
  DisjointSets sets(k);
  std::vector<Edge> chosen;
  for (int l = 0; l < k; ++l) {
    if (l != root && adj.linked(root, l)) {
      sets.unite(root, l);
      chosen.push_back(make_edge(root, l));
    }
  }
  for (const auto& we : sorted_by_length(adj, node_positions)) {
    if (sets.unite(we.edge.a, we.edge.b)) chosen.push_back(we.edge);
  }
  return make_tree(k, std::move(chosen), root);
}

Tree prune(const Adjacency& adj, const std::vector<Vec3>& node_positions, int root,
           Pruning strategy) {
  return strategy == Pruning::MST ? prune_mst(adj, node_positions, root)
                                  : prune_mmut(adj, node_positions, root);
}

double total_length(const std::vector<Edge>& edges, const std::vector<Vec3>& node_positions) {
  double sum = 0.0;
  for (const Edge& e : edges) sum += (node_positions[e.a] - node_positions[e.b]).norm();
  return sum;
}

}  // namespace wasn
