#pragma once

// Max-k-Cut QAOA with binary color encoding (k = 2^l, l qubits per node).
//
// Node u owns qubits u*l .. u*l+l-1; qubit u*l+b holds bit b of its color.
// The cost operator is the minimization form C(z) = -cut(z); reported values
// are always positive cut weights.

#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "evq/circuit.hpp"
#include "evq/error.hpp"
#include "evq/graph.hpp"
#include "evq/params.hpp"
#include "evq/statevector.hpp"

namespace evq {

/// Qubits per node for k colors; k must be a power of two >= 2.
inline int bits_per_color(int k) {
  if (k < 2 || !std::has_single_bit(static_cast<unsigned>(k)))
    throw DomainError("binary encoding needs k to be a power of two >= 2, got " + std::to_string(k));
  return std::countr_zero(static_cast<unsigned>(k));
}

inline int decode_color(std::uint64_t z, int node, int bits) {
  return static_cast<int>((z >> (node * bits)) & ((std::uint64_t{1} << bits) - 1));
}

inline Assignment decode_coloring(std::uint64_t z, int nodes, int k) {
  const int bits = bits_per_color(k);
  Assignment a(static_cast<std::size_t>(nodes));
  for (int u = 0; u < nodes; ++u) a[u] = decode_color(z, u, bits);
  return a;
}

inline std::uint64_t encode_coloring(std::span<const int> labels, int k) {
  const int bits = bits_per_color(k);
  std::uint64_t z = 0;
  for (std::size_t u = 0; u < labels.size(); ++u) z |= static_cast<std::uint64_t>(labels[u]) << (u * bits);
  return z;
}

/// C(z) = -sum_{u<v} w_uv [color_u != color_v].
inline DiagonalCost cost_diagonal(const WeightedGraph& g, int k, const SimulatorLimits& limits = {}) {
  const int bits = bits_per_color(k);
  const int n = g.size();
  const int qubits = n * bits;
  check_qubits(qubits, limits);
  DiagonalCost cost;
  cost.qubits = qubits;
  cost.values.resize(std::size_t{1} << qubits);
  std::vector<int> color(static_cast<std::size_t>(n));
  for (std::size_t z = 0; z < cost.values.size(); ++z) {
    for (int u = 0; u < n; ++u) color[u] = decode_color(z, u, bits);
    double c = 0.0;
    for (int u = 0; u < n; ++u) {
      auto row = g.row(u);
      for (int v = u + 1; v < n; ++v)
        if (color[u] != color[v]) c -= row[v];
    }
    cost.values[z] = c;
  }
  return cost;
}

/// Uniform superposition followed by p alternating phase / mixer layers.
inline StateVector prepare_state(const DiagonalCost& cost, const QaoaParams& params,
                                 const SimulatorLimits& limits = {}) {
  params.validate();
  StateVector s = init_uniform(cost.qubits, limits);
  for (int l = 0; l < params.depth(); ++l) {
    apply_phase(s, cost, params.gammas[l]);
    apply_mixer(s, params.betas[l]);
  }
  return s;
}

/// Expected cut weight of the depth-p state.
inline double qaoa_expectation(const WeightedGraph& g, int k, const QaoaParams& params,
                               const SimulatorLimits& limits = {}) {
  const auto cost = cost_diagonal(g, k, limits);
  return -expectation(prepare_state(cost, params, limits), cost);
}

namespace detail {

// Closed-form depth-1 expectation written for phase exp(-i gamma * cut); see
// analytic_p1 for the sign mapping onto this simulator's convention.
inline double closed_form_p1_cut_phase(const WeightedGraph& g, double gamma, double beta) {
  const int n = g.size();
  const double s4b = std::sin(4.0 * beta);
  const double s2b = std::sin(2.0 * beta);
  const double s2b_sq = s2b * s2b;
  double total = 0.0;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      const double w = g.weight(u, v);
      if (w == 0.0) continue;
      double pu = 1.0, pv = 1.0, pdiff = 1.0, psum = 1.0;
      for (int x = 0; x < n; ++x) {
        if (x == u || x == v) continue;
        const double wu = g.weight(u, x);
        const double wv = g.weight(v, x);
        pu *= std::cos(gamma * wu);
        pv *= std::cos(gamma * wv);
        pdiff *= std::cos(gamma * (wu - wv));
        psum *= std::cos(gamma * (wu + wv));
      }
      total += 0.5 * w * (1.0 + 0.5 * s4b * std::sin(gamma * w) * (pu + pv) - 0.5 * s2b_sq * (pdiff - psum));
    }
  }
  return total;
}

}  // namespace detail

/// Depth-1 expected cut in closed form, O(N^3).
///
/// The textbook expression assumes the phase exp(-i gamma * cut). This
/// library applies exp(-i gamma C) with C = -cut, so the expression is
/// evaluated at -gamma; the result then equals qaoa_expectation at (gamma, beta).
inline double analytic_p1(const WeightedGraph& g, double gamma, double beta) {
  return detail::closed_form_p1_cut_phase(g, -gamma, beta);
}

/// Gates for one phase layer exp(-i gamma C) up to a global phase.
///
/// k = 2: per edge, CNOT-RZ(w gamma)-CNOT on the node qubits.
/// k = 4: C_uv = -3w/4 + (w/4)(Z0Z0' + Z1Z1' + Z0Z1Z0'Z1'); each two-body term
/// is CNOT-RZ(w gamma / 2)-CNOT and the four-body term is a CNOT ladder
/// u0->u1->v0->v1 around one RZ(w gamma / 2): 10 CNOTs and 3 RZ per edge.
inline GateList synthesize_circuit(const WeightedGraph& g, int k, double gamma) {
  if (k != 2 && k != 4) throw DomainError("circuit synthesis supports k = 2 or k = 4, got " + std::to_string(k));
  const int bits = bits_per_color(k);
  GateList c;
  c.qubits = g.size() * bits;
  for (int u = 0; u < g.size(); ++u) {
    for (int v = u + 1; v < g.size(); ++v) {
      const double w = g.weight(u, v);
      if (w == 0.0) continue;
      if (k == 2) {
        c.push(Gate::cnot(u, v));
        c.push(Gate::rz(v, w * gamma));
        c.push(Gate::cnot(u, v));
        continue;
      }
      const int u0 = 2 * u, u1 = 2 * u + 1, v0 = 2 * v, v1 = 2 * v + 1;
      const double angle = w * gamma / 2.0;
      c.push(Gate::cnot(u0, v0));
      c.push(Gate::rz(v0, angle));
      c.push(Gate::cnot(u0, v0));
      c.push(Gate::cnot(u1, v1));
      c.push(Gate::rz(v1, angle));
      c.push(Gate::cnot(u1, v1));
      c.push(Gate::cnot(u0, u1));
      c.push(Gate::cnot(u1, v0));
      c.push(Gate::cnot(v0, v1));
      c.push(Gate::rz(v1, angle));
      c.push(Gate::cnot(v0, v1));
      c.push(Gate::cnot(u1, v0));
      c.push(Gate::cnot(u0, u1));
    }
  }
  return c;
}

/// Full depth-p circuit: Hadamards, then per layer the phase gates and
/// RX(2 beta) on every qubit.
inline GateList synthesize_qaoa_circuit(const WeightedGraph& g, int k, const QaoaParams& params) {
  params.validate();
  GateList c;
  c.qubits = g.size() * bits_per_color(k);
  for (int q = 0; q < c.qubits; ++q) c.push(Gate::h(q));
  for (int l = 0; l < params.depth(); ++l) {
    c.append(synthesize_circuit(g, k, params.gammas[l]));
    for (int q = 0; q < c.qubits; ++q) c.push(Gate::rx(q, 2.0 * params.betas[l]));
  }
  return c;
}

}  // namespace evq
