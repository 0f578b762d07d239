#pragma once

// Two-layer parity encoding of Max-4-Cut.
//
// Each color bit b in {0,1} forms its own layer. In layer b the physical spin
// for the logical pair (i,j) represents z^b_i z^b_j. Per logical edge the
// cost carries local fields on both layer spins and a pair term between them,
// and every layer has K-N+1 parity constraints that make the physical state
// consistent with some logical coloring.
//
// Spin convention: bit 0 <-> spin +1, bit 1 <-> spin -1.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evq/error.hpp"
#include "evq/graph.hpp"
#include "evq/statevector.hpp"

namespace evq {

struct ParityQubit {
  int layer = 0;
  int i = 0;
  int j = 0;
  int x = 0;  // grid column, i + j
  int y = 0;  // grid row, j - i
};

struct ParityLayout {
  int logical_nodes = 0;
  std::vector<ParityQubit> physical_qubits;
  /// Qubit index tuples; plaquettes have 4 entries, boundary triangles 3.
  std::vector<std::vector<int>> constraints;
  std::vector<std::pair<int, int>> interlayer_pairs;

  int per_layer() const { return logical_nodes * (logical_nodes - 1) / 2; }

  /// Physical index of pair (i, j), i != j, in the given layer.
  int qubit_index(int layer, int i, int j) const {
    if (i > j) std::swap(i, j);
    if (i < 0 || j >= logical_nodes || i == j || layer < 0 || layer > 1)
      throw DomainError("invalid parity qubit reference");
    // Lexicographic rank of (i, j) among pairs with i < j.
    const int n = logical_nodes;
    const int rank = i * n - i * (i + 1) / 2 + (j - i - 1);
    return layer * per_layer() + rank;
  }
};

inline ParityLayout parity_layout(int n) {
  if (n < 3) throw DomainError("parity layout needs N >= 3, got " + std::to_string(n));
  ParityLayout lay;
  lay.logical_nodes = n;
  for (int layer = 0; layer < 2; ++layer)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) lay.physical_qubits.push_back({layer, i, j, i + j, j - i});

  for (int layer = 0; layer < 2; ++layer) {
    for (int i = 0; i + 2 < n; ++i)
      lay.constraints.push_back(
          {lay.qubit_index(layer, i, i + 1), lay.qubit_index(layer, i, i + 2), lay.qubit_index(layer, i + 1, i + 2)});
    for (int j = 2; j + 1 < n; ++j)
      for (int i = 0; i + 1 < j; ++i)
        lay.constraints.push_back({lay.qubit_index(layer, i, j), lay.qubit_index(layer, i + 1, j),
                                   lay.qubit_index(layer, i, j + 1), lay.qubit_index(layer, i + 1, j + 1)});
  }

  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) lay.interlayer_pairs.emplace_back(lay.qubit_index(0, i, j), lay.qubit_index(1, i, j));
  return lay;
}

enum class ParityTermKind { local, pair, constraint };

/// weight * prod_{q in qubits} spin_q
struct ParityTerm {
  ParityTermKind kind = ParityTermKind::local;
  std::vector<int> qubits;
  double weight = 0.0;
};

struct ParityCost {
  ParityLayout layout;
  std::vector<ParityTerm> terms;
  double constraint_strength = 0.0;
};

inline double default_constraint_strength(const WeightedGraph& g) {
  return 2.0 * g.max_weight() * static_cast<double>(g.size());
}

/// Edge terms w(z0 + z1 + z0 z1) per logical edge, then -C4 * prod(spins)
/// per constraint. On a consistent state the edge part equals
/// 4 * (-cut) + 3 * W_total, and each constraint term takes its minimum -C4.
inline ParityCost parity_cost(const WeightedGraph& g, std::optional<double> constraint_strength = std::nullopt) {
  ParityCost pc;
  pc.layout = parity_layout(g.size());
  pc.constraint_strength = constraint_strength.value_or(default_constraint_strength(g));
  if (!(pc.constraint_strength >= 0.0)) throw DomainError("constraint strength must be nonnegative");
  const int n = g.size();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double w = g.weight(i, j);
      if (w == 0.0) continue;
      const int q0 = pc.layout.qubit_index(0, i, j);
      const int q1 = pc.layout.qubit_index(1, i, j);
      pc.terms.push_back({ParityTermKind::local, {q0}, w});
      pc.terms.push_back({ParityTermKind::local, {q1}, w});
      pc.terms.push_back({ParityTermKind::pair, {q0, q1}, w});
    }
  }
  for (const auto& c : pc.layout.constraints)
    pc.terms.push_back({ParityTermKind::constraint, c, -pc.constraint_strength});
  return pc;
}

/// Physical bit string (bit q = physical qubit q) encoding a logical 4-coloring.
inline std::uint64_t parity_image(const ParityLayout& lay, std::span<const int> colors) {
  if (static_cast<int>(colors.size()) != lay.logical_nodes) throw DomainError("coloring length does not match layout");
  if (lay.physical_qubits.size() > 64) throw CapError("parity image needs at most 64 physical qubits");
  std::uint64_t z = 0;
  for (std::size_t q = 0; q < lay.physical_qubits.size(); ++q) {
    const auto& pq = lay.physical_qubits[q];
    if (colors[pq.i] < 0 || colors[pq.i] > 3 || colors[pq.j] < 0 || colors[pq.j] > 3)
      throw DomainError("colors must lie in [0, 4)");
    const int b = ((colors[pq.i] >> pq.layer) ^ (colors[pq.j] >> pq.layer)) & 1;
    if (b) z |= std::uint64_t{1} << q;
  }
  return z;
}

inline double term_value(const ParityTerm& t, std::uint64_t z) {
  int parity = 0;
  for (int q : t.qubits) parity ^= static_cast<int>((z >> q) & 1U);
  return parity ? -t.weight : t.weight;
}

inline double parity_energy(const ParityCost& pc, std::uint64_t z) {
  double e = 0.0;
  for (const auto& t : pc.terms) e += term_value(t, z);
  return e;
}

/// Energy restricted to one kind of term.
inline double parity_energy(const ParityCost& pc, std::uint64_t z, ParityTermKind kind) {
  double e = 0.0;
  for (const auto& t : pc.terms)
    if (t.kind == kind) e += term_value(t, z);
  return e;
}

inline bool parity_consistent(const ParityLayout& lay, std::uint64_t z) {
  for (const auto& c : lay.constraints) {
    int parity = 0;
    for (int q : c) parity ^= static_cast<int>((z >> q) & 1U);
    if (parity) return false;
  }
  return true;
}

/// Full physical cost table. Simulation is only offered while the two layers
/// fit in the simulator.
inline DiagonalCost parity_cost_diagonal(const ParityCost& pc, const SimulatorLimits& limits = {}) {
  const int qubits = static_cast<int>(pc.layout.physical_qubits.size());
  check_qubits(qubits, limits);
  DiagonalCost cost;
  cost.qubits = qubits;
  cost.values.resize(std::size_t{1} << qubits);
  for (std::size_t z = 0; z < cost.values.size(); ++z) cost.values[z] = parity_energy(pc, z);
  return cost;
}

struct ParityResources {
  int logical_nodes = 0;
  long long qubits_per_layer = 0;
  long long qubits_total = 0;
  long long cnot_count = 0;
  long long constraint_count = 0;
  std::string depth_class = "constant";
  std::vector<std::string> notes;
};

inline ParityResources parity_resources(int n) {
  if (n < 3) throw DomainError("parity resources need N >= 3, got " + std::to_string(n));
  const long long nn = n;
  ParityResources r;
  r.logical_nodes = n;
  r.qubits_per_layer = nn * (nn - 1) / 2;
  r.qubits_total = nn * (nn - 1);
  r.cnot_count = 9 * nn * nn - 41 * nn + 48;
  r.constraint_count = 2 * (r.qubits_per_layer - nn + 1);
  r.notes.push_back("qubits_total counts both layers; a single layer holds N(N-1)/2 = " +
                    std::to_string(r.qubits_per_layer) + " qubits, the figure sometimes quoted as the total");
  return r;
}

}  // namespace evq
