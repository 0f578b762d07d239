#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "evq/error.hpp"

namespace evq {

/// labels[i] in [0, k): machine or color of node i.
using Assignment = std::vector<int>;

enum class GraphOrigin { sc1, sc2, synthetic };

inline std::string_view to_string(GraphOrigin o) {
  switch (o) {
    case GraphOrigin::sc1: return "sc1";
    case GraphOrigin::sc2: return "sc2";
    case GraphOrigin::synthetic: return "synthetic";
  }
  return "synthetic";
}

inline GraphOrigin parse_origin(std::string_view s) {
  if (s == "sc1") return GraphOrigin::sc1;
  if (s == "sc2") return GraphOrigin::sc2;
  if (s == "synthetic") return GraphOrigin::synthetic;
  throw ParseError("unknown graph origin '" + std::string(s) + "'");
}

/// Dense symmetric graph with nonnegative edge weights and zero diagonal.
/// A weight of zero means "no edge".
class WeightedGraph {
 public:
  WeightedGraph() = default;

  explicit WeightedGraph(int n, GraphOrigin origin = GraphOrigin::synthetic)
      : n_(n), origin_(origin), w_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0) {
    if (n < 0) throw DomainError("graph size must be nonnegative");
  }

  int size() const noexcept { return n_; }
  GraphOrigin origin() const noexcept { return origin_; }
  void set_origin(GraphOrigin o) noexcept { origin_ = o; }

  double weight(int u, int v) const { return w_[index(u, v)]; }

  void set_weight(int u, int v, double w) {
    if (u == v) throw DomainError("self loops are not allowed");
    if (!(w >= 0.0) || !std::isfinite(w)) throw DomainError("edge weights must be finite and nonnegative");
    w_[index(u, v)] = w;
    w_[index(v, u)] = w;
  }

  std::span<const double> row(int u) const {
    return {w_.data() + static_cast<std::size_t>(u) * static_cast<std::size_t>(n_),
            static_cast<std::size_t>(n_)};
  }

  double total_weight() const {
    double s = 0.0;
    for (int u = 0; u < n_; ++u)
      for (int v = u + 1; v < n_; ++v) s += weight(u, v);
    return s;
  }

  double max_weight() const {
    double m = 0.0;
    for (double w : w_) m = std::max(m, w);
    return m;
  }

  WeightedGraph scaled(double s) const {
    WeightedGraph g(*this);
    for (double& w : g.w_) w *= s;
    return g;
  }

  friend bool operator==(const WeightedGraph&, const WeightedGraph&) = default;

 private:
  std::size_t index(int u, int v) const {
    if (u < 0 || v < 0 || u >= n_ || v >= n_) throw DomainError("node index out of range");
    return static_cast<std::size_t>(u) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(v);
  }

  int n_ = 0;
  GraphOrigin origin_ = GraphOrigin::synthetic;
  std::vector<double> w_;
};

/// Simple undirected graph stored as a dense adjacency matrix.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n) : n_(n), adj_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0) {
    if (n < 0) throw DomainError("graph size must be nonnegative");
  }

  int size() const noexcept { return n_; }

  bool has_edge(int u, int v) const { return adj_[index(u, v)] != 0; }

  void add_edge(int u, int v) {
    if (u == v) throw DomainError("self loops are not allowed");
    adj_[index(u, v)] = 1;
    adj_[index(v, u)] = 1;
  }

  int degree(int u) const {
    int d = 0;
    for (int v = 0; v < n_; ++v) d += has_edge(u, v) ? 1 : 0;
    return d;
  }

  int max_degree() const {
    int d = 0;
    for (int u = 0; u < n_; ++u) d = std::max(d, degree(u));
    return d;
  }

  /// Edges (u, v) with u < v in lexicographic order.
  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> e;
    for (int u = 0; u < n_; ++u)
      for (int v = u + 1; v < n_; ++v)
        if (has_edge(u, v)) e.emplace_back(u, v);
    return e;
  }

  std::size_t edge_count() const { return edges().size(); }

  /// Neighbourhood as a bit mask; requires size() <= 64.
  std::uint64_t neighbor_mask(int u) const {
    if (n_ > 64) throw CapError("neighbor_mask requires at most 64 nodes");
    std::uint64_t m = 0;
    for (int v = 0; v < n_; ++v)
      if (has_edge(u, v)) m |= std::uint64_t{1} << v;
    return m;
  }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::size_t index(int u, int v) const {
    if (u < 0 || v < 0 || u >= n_ || v >= n_) throw DomainError("node index out of range");
    return static_cast<std::size_t>(u) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(v);
  }

  int n_ = 0;
  std::vector<std::uint8_t> adj_;
};

/// Unit-weight view of an unweighted graph.
inline WeightedGraph to_weighted(const Graph& g, GraphOrigin origin = GraphOrigin::synthetic) {
  WeightedGraph w(g.size(), origin);
  for (auto [u, v] : g.edges()) w.set_weight(u, v, 1.0);
  return w;
}

inline Graph complete_graph(int n) {
  Graph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
  return g;
}

inline Graph cycle_graph(int n) {
  Graph g(n);
  for (int u = 0; u < n; ++u) g.add_edge(u, (u + 1) % n);
  return g;
}

/// Total weight of edges whose endpoints carry different labels.
inline double cut_value(const WeightedGraph& g, std::span<const int> labels) {
  if (static_cast<int>(labels.size()) != g.size()) throw DomainError("assignment length does not match graph size");
  double s = 0.0;
  for (int u = 0; u < g.size(); ++u)
    for (int v = u + 1; v < g.size(); ++v)
      if (labels[u] != labels[v]) s += g.weight(u, v);
  return s;
}

}  // namespace evq
