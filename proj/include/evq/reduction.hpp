#pragma once

#include <algorithm>
#include <cstdint>
#include <numbers>
#include <vector>

#include "evq/error.hpp"
#include "evq/graph.hpp"
#include "evq/instances.hpp"

namespace evq {

/// Integer edge weight between two jobs: min(w_u t_v, w_v t_u), the penalty
/// paid when both share a machine (the later job in Smith order waits for the
/// earlier one).
inline std::int64_t job_pair_weight(const Job& a, const Job& b) {
  return std::min(a.weight * b.duration, b.weight * a.duration);
}

/// Integer weight matrix of the scheduling graph, row-major n*n.
inline std::vector<std::int64_t> sc1_integer_weights(const SC1Instance& inst) {
  const std::size_t n = inst.jobs.size();
  std::vector<std::int64_t> w(n * n, 0);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) w[u * n + v] = w[v * n + u] = job_pair_weight(inst.jobs[u], inst.jobs[v]);
  return w;
}

inline WeightedGraph sc1_to_graph(const SC1Instance& inst) {
  const int n = static_cast<int>(inst.jobs.size());
  WeightedGraph g(n, GraphOrigin::sc1);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      g.set_weight(u, v, static_cast<double>(job_pair_weight(inst.jobs[u], inst.jobs[v])));
  return g;
}

/// Open-interval overlap: touching endpoints do not conflict.
inline bool intervals_overlap(const Interval& a, const Interval& b) { return a.start < b.end && b.start < a.end; }

inline Graph sc2_to_graph(const SC2Instance& inst) {
  const int n = static_cast<int>(inst.intervals.size());
  Graph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      const auto& a = inst.intervals[u];
      const auto& b = inst.intervals[v];
      if (a.group == b.group || intervals_overlap(a, b)) g.add_edge(u, v);
    }
  return g;
}

struct Normalized {
  WeightedGraph graph;
  double scale = 1.0;  // multiply original weights by this; divide reported costs by it
};

/// Upper bound on the best cut: every weight at w_max on a complete graph.
inline double cut_upper_bound(const WeightedGraph& g) {
  const double n = g.size();
  return g.max_weight() * n * n / 4.0;
}

/// Rescales weights so that the cut upper bound maps to a phase of 2*pi.
inline Normalized normalize(const WeightedGraph& g) {
  const double bound = cut_upper_bound(g);
  if (!(bound > 0.0)) throw DomainError("cannot normalize a graph without positive weights");
  const double s = 2.0 * std::numbers::pi / bound;
  return {g.scaled(s), s};
}

}  // namespace evq
