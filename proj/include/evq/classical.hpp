#pragma once

// Classical baselines and exact oracles for both problem families.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evq/error.hpp"
#include "evq/graph.hpp"
#include "evq/instances.hpp"
#include "evq/rng.hpp"

namespace evq {

/// Job indices sorted by w/t non-increasing, ties by ascending index.
inline std::vector<std::size_t> smith_order(std::span<const Job> jobs) {
  for (const auto& j : jobs)
    if (j.duration <= 0) throw DomainError("job duration must be positive");
  std::vector<std::size_t> order(jobs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // w_a / t_a > w_b / t_b  <=>  w_a t_b > w_b t_a for positive durations.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return jobs[a].weight * jobs[b].duration > jobs[b].weight * jobs[a].duration;
  });
  return order;
}

struct MachineSchedule {
  std::vector<std::size_t> jobs;          // execution order
  std::vector<std::int64_t> completion;   // C_j, aligned with jobs
};

struct ScheduleCostReport {
  std::int64_t total = 0;  // sum of w_j C_j
  std::vector<MachineSchedule> per_machine;
};

inline void check_assignment(std::span<const int> labels, std::size_t n, int k) {
  if (labels.size() != n) throw DomainError("assignment length does not match instance size");
  for (int l : labels)
    if (l < 0 || l >= k) throw DomainError("label " + std::to_string(l) + " outside [0, " + std::to_string(k) + ")");
}

inline ScheduleCostReport schedule_cost(const SC1Instance& inst, std::span<const int> labels) {
  check_assignment(labels, inst.jobs.size(), inst.k);
  ScheduleCostReport rep;
  rep.per_machine.resize(static_cast<std::size_t>(inst.k));
  for (std::size_t j : smith_order(inst.jobs)) rep.per_machine[static_cast<std::size_t>(labels[j])].jobs.push_back(j);
  for (auto& m : rep.per_machine) {
    std::int64_t t = 0;
    for (std::size_t j : m.jobs) {
      t += inst.jobs[j].duration;
      m.completion.push_back(t);
      rep.total += inst.jobs[j].weight * t;
    }
  }
  return rep;
}

struct DpLimits {
  std::size_t max_states = 4'000'000;  // live canonical load vectors per stage
};

/// Exact minimum of sum w_j C_j on k identical machines.
///
/// Jobs are inserted in global Smith order; each machine then runs its jobs in
/// Smith order, so appending job j to a machine with load L costs w_j (L + t_j).
/// Machines are interchangeable, so states are sorted load vectors.
inline std::int64_t dp_optimum(const SC1Instance& inst, const DpLimits& limits = {}) {
  if (inst.k < 1) throw DomainError("machine count k must be at least 1");
  if (inst.jobs.empty()) return 0;
  const auto k = static_cast<std::size_t>(std::min<std::size_t>(static_cast<std::size_t>(inst.k), inst.jobs.size()));

  using Loads = std::vector<std::int64_t>;
  std::map<Loads, std::int64_t> current{{Loads(k, 0), 0}};
  for (std::size_t j : smith_order(inst.jobs)) {
    const auto& job = inst.jobs[j];
    std::map<Loads, std::int64_t> next;
    for (const auto& [loads, cost] : current) {
      for (std::size_t m = 0; m < k; ++m) {
        if (m > 0 && loads[m] == loads[m - 1]) continue;  // identical machine, same successor
        Loads nl = loads;
        nl[m] += job.duration;
        const std::int64_t c = cost + job.weight * nl[m];
        std::sort(nl.begin(), nl.end());
        auto [it, inserted] = next.emplace(std::move(nl), c);
        if (!inserted && c < it->second) it->second = c;
      }
      if (next.size() > limits.max_states)
        throw ResourceError("dp_optimum state count exceeds max_states = " + std::to_string(limits.max_states));
    }
    current = std::move(next);
  }
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (const auto& [loads, cost] : current) best = std::min(best, cost);
  return best;
}

struct EnumerationLimits {
  int max_nodes = 16;
  std::uint64_t max_labelings = std::uint64_t{1} << 20;  // k^N
};

inline void check_enumeration(int n, int k, const EnumerationLimits& limits) {
  if (k < 1) throw DomainError("k must be at least 1");
  if (n > limits.max_nodes)
    throw CapError("brute force limited to " + std::to_string(limits.max_nodes) + " nodes, got " + std::to_string(n));
  double count = std::pow(static_cast<double>(k), n);
  if (count > static_cast<double>(limits.max_labelings))
    throw CapError("brute force would enumerate " + std::to_string(k) + "^" + std::to_string(n) +
                   " labelings, above max_labelings = " + std::to_string(limits.max_labelings));
}

struct CutResult {
  double value = 0.0;
  Assignment labels;
};

/// Exact weighted Max-k-Cut. Only canonical labelings (colors introduced in
/// order of first use) are visited; the lexicographically smallest optimum
/// is always canonical, so ties resolve to it.
inline CutResult brute_maxkcut(const WeightedGraph& g, int k, const EnumerationLimits& limits = {}) {
  const int n = g.size();
  check_enumeration(n, k, limits);
  CutResult best;
  best.value = -1.0;
  if (n == 0) return {0.0, {}};

  Assignment labels(static_cast<std::size_t>(n), 0);
  // Recursive descent; depth n is small by construction of the caps.
  auto recurse = [&](auto&& self, int node, int used, double value) -> void {
    if (node == n) {
      if (value > best.value) best = {value, labels};
      return;
    }
    const int colors = std::min(k, used + 1);
    for (int c = 0; c < colors; ++c) {
      double gain = 0.0;
      for (int j = 0; j < node; ++j)
        if (labels[j] != c) gain += g.weight(node, j);
      labels[node] = c;
      self(self, node + 1, std::max(used, c + 1), value + gain);
    }
  };
  recurse(recurse, 0, 0, 0.0);
  return best;
}

struct MisResult {
  int size = 0;
  std::vector<int> vertices;
};

/// Exact maximum independent set by include/exclude branching on bit masks
/// with a cardinality bound.
inline MisResult brute_mis(const Graph& g, int max_nodes = 24) {
  const int n = g.size();
  if (n > max_nodes)
    throw CapError("brute_mis limited to " + std::to_string(max_nodes) + " nodes, got " + std::to_string(n));
  if (n > 64) throw CapError("brute_mis supports at most 64 nodes");
  std::vector<std::uint64_t> nbr(static_cast<std::size_t>(n));
  for (int u = 0; u < n; ++u) nbr[u] = g.neighbor_mask(u);

  std::uint64_t best_set = 0;
  int best_size = -1;
  auto recurse = [&](auto&& self, std::uint64_t cand, std::uint64_t chosen, int size) -> void {
    if (cand == 0) {
      if (size > best_size) {
        best_size = size;
        best_set = chosen;
      }
      return;
    }
    if (size + std::popcount(cand) <= best_size) return;
    const int v = std::countr_zero(cand);
    const std::uint64_t bit = std::uint64_t{1} << v;
    self(self, cand & ~bit & ~nbr[v], chosen | bit, size + 1);
    self(self, cand & ~bit, chosen, size);
  };
  const std::uint64_t all = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  recurse(recurse, all, 0, 0);

  MisResult r;
  r.size = std::max(best_size, 0);
  for (int v = 0; v < n; ++v)
    if (best_set >> v & 1U) r.vertices.push_back(v);
  return r;
}

inline bool is_independent_set(const Graph& g, std::span<const int> vertices) {
  for (std::size_t a = 0; a < vertices.size(); ++a)
    for (std::size_t b = a + 1; b < vertices.size(); ++b)
      if (vertices[a] == vertices[b] || g.has_edge(vertices[a], vertices[b])) return false;
  return true;
}

struct RandomBaseline {
  double mean_cut = 0.0;
  double stddev_cut = 0.0;
  std::optional<double> mean_ratio;  // mean_cut / optimum
  std::vector<double> samples;
};

/// Uniform random k-labelings. Trial t draws from its own generator derived
/// from (seed, t), so results do not depend on how trials are scheduled.
inline RandomBaseline random_baseline(const WeightedGraph& g, int k, std::size_t trials, std::uint64_t seed,
                                      std::optional<double> optimum = std::nullopt) {
  if (trials < 1) throw DomainError("trials must be at least 1");
  if (k < 1) throw DomainError("k must be at least 1");
  RandomBaseline out;
  out.samples.reserve(trials);
  Assignment labels(static_cast<std::size_t>(g.size()));
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = make_rng(seed, {0xba5e, t});
    for (auto& l : labels) l = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(k)));
    out.samples.push_back(cut_value(g, labels));
  }
  double sum = 0.0;
  for (double s : out.samples) sum += s;
  out.mean_cut = sum / static_cast<double>(trials);
  double ss = 0.0;
  for (double s : out.samples) ss += (s - out.mean_cut) * (s - out.mean_cut);
  out.stddev_cut = trials > 1 ? std::sqrt(ss / static_cast<double>(trials - 1)) : 0.0;
  if (optimum && *optimum > 0.0) out.mean_ratio = out.mean_cut / *optimum;
  return out;
}

struct ScheduleBaseline {
  double mean_cost = 0.0;
  std::optional<double> mean_ratio;  // mean of optimum / cost per trial
};

/// Random machine assignment followed by Smith ordering on each machine.
inline ScheduleBaseline random_schedule_baseline(const SC1Instance& inst, std::size_t trials, std::uint64_t seed,
                                                 std::optional<std::int64_t> optimum = std::nullopt) {
  if (trials < 1) throw DomainError("trials must be at least 1");
  ScheduleBaseline out;
  Assignment labels(inst.jobs.size());
  double sum = 0.0;
  double ratio_sum = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = make_rng(seed, {0x5c7e, t});
    for (auto& l : labels) l = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(inst.k)));
    const auto cost = schedule_cost(inst, labels).total;
    sum += static_cast<double>(cost);
    if (optimum && cost > 0) ratio_sum += static_cast<double>(*optimum) / static_cast<double>(cost);
  }
  out.mean_cost = sum / static_cast<double>(trials);
  if (optimum) out.mean_ratio = ratio_sum / static_cast<double>(trials);
  return out;
}

/// Ratios cut(S) / floor(N^2/4) of all 2^N vertex subsets of the unweighted
/// complete graph K_N, sorted ascending.
inline std::vector<double> cut_ratio_spectrum(int n) {
  if (n < 1) throw DomainError("spectrum needs at least one node");
  if (n > 20) throw CapError("cut_ratio_spectrum limited to N <= 20");
  const double best = std::floor(static_cast<double>(n) * n / 4.0);
  const std::uint64_t count = std::uint64_t{1} << n;
  std::vector<double> out;
  out.reserve(count);
  for (std::uint64_t s = 0; s < count; ++s) {
    const int a = std::popcount(s);
    out.push_back(best > 0 ? static_cast<double>(a) * (n - a) / best : 0.0);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Value at normalized position q in [0, 1] of a sorted spectrum, using the
/// entry at index floor(q * (size - 1)).
inline double spectrum_at(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw DomainError("empty spectrum");
  if (q < 0.0 || q > 1.0) throw DomainError("normalized index must lie in [0, 1]");
  const auto idx = static_cast<std::size_t>(std::floor(q * static_cast<double>(sorted.size() - 1)));
  return sorted[idx];
}

/// Mean ratio of a uniformly random cut of K_N:
/// sum_a C(N,a) a (N-a) / (2^N floor(N^2/4)).
inline double random_cut_expected_ratio(int n) {
  const double best = std::floor(static_cast<double>(n) * n / 4.0);
  double sum = 0.0;
  double binom = 1.0;
  for (int a = 0; a <= n; ++a) {
    sum += binom * a * (n - a);
    binom = binom * (n - a) / (a + 1);
  }
  return sum / (std::pow(2.0, n) * best);
}

}  // namespace evq
