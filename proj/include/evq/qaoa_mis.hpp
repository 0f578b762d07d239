#pragma once

// Unit-disk MIS: penalty cost for digital QAOA, the ideal-blockade ansatz on
// the independent-set subspace, and a dense analog evolution under the
// Rydberg Hamiltonian
//   H = sum_i (Omega/2) X_i - sum_i (delta/2) Z_i + sum_{i<j} C6/|r_i-r_j|^6 n_i n_j
// with n = |1><1| and Z = 2n - 1 (units of hbar = 1).

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "evq/error.hpp"
#include "evq/graph.hpp"
#include "evq/params.hpp"
#include "evq/statevector.hpp"

namespace evq {

using Point = std::array<double, 2>;

inline double distance(const Point& a, const Point& b) { return std::hypot(a[0] - b[0], a[1] - b[1]); }

inline double squared_distance(const Point& a, const Point& b) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  return dx * dx + dy * dy;
}

/// Shared absolute slack on squared distances for the closed unit-disk test.
inline constexpr double kUnitDiskSlack = 1e-9;

struct MisCostSpec {
  Graph graph;
  double U = 1.5;

  void validate() const {
    if (!(U > 1.0)) throw DomainError("MIS penalty U must exceed 1");
  }
};

/// Small enough to keep the phase landscape smooth, large enough that every
/// minimiser is a maximum independent set.
inline constexpr double kDefaultMisPenalty = 1.5;

inline MisCostSpec make_mis_spec(Graph g, std::optional<double> U = std::nullopt) {
  MisCostSpec spec{std::move(g), 0.0};
  spec.U = U.value_or(kDefaultMisPenalty);
  spec.validate();
  return spec;
}

/// C(z) = -sum_i z_i + U sum_{(i,j) in E} z_i z_j
inline DiagonalCost mis_cost_diagonal(const MisCostSpec& spec, const SimulatorLimits& limits = {}) {
  spec.validate();
  const int n = spec.graph.size();
  check_qubits(n, limits);
  const auto edges = spec.graph.edges();
  DiagonalCost cost;
  cost.qubits = n;
  cost.values.resize(std::size_t{1} << n);
  for (std::size_t z = 0; z < cost.values.size(); ++z) {
    int violated = 0;
    for (auto [u, v] : edges) violated += static_cast<int>((z >> u) & (z >> v) & 1U);
    cost.values[z] = -static_cast<double>(std::popcount(static_cast<std::uint64_t>(z))) + spec.U * violated;
  }
  return cost;
}

/// Greedy repair: for each edge (u<v) in lexicographic order with both ends
/// selected, drop the endpoint of higher degree (ties drop the higher index).
inline std::uint64_t repair_independent_set(const Graph& g, std::uint64_t z) {
  for (auto [u, v] : g.edges()) {
    if (((z >> u) & 1U) && ((z >> v) & 1U)) {
      const int du = g.degree(u);
      const int dv = g.degree(v);
      const int drop = du > dv ? u : v;
      z &= ~(std::uint64_t{1} << drop);
    }
  }
  return z;
}

/// Size of the repaired independent set for every basis state.
inline std::vector<double> repaired_size_diagonal(const Graph& g, const SimulatorLimits& limits = {}) {
  check_qubits(g.size(), limits);
  std::vector<double> out(std::size_t{1} << g.size());
  for (std::size_t z = 0; z < out.size(); ++z)
    out[z] = std::popcount(repair_independent_set(g, static_cast<std::uint64_t>(z)));
  return out;
}

/// Ideal blockade: the reachable states are the independent sets of the graph,
/// the drive is sum_i X_i projected onto them, and the phase is exp(i gamma |z|).
/// Evolution starts from the empty set.
struct BlockadeSubspace {
  int qubits = 0;
  std::vector<std::uint64_t> states;  // ascending, states[0] == 0
  std::vector<double> sizes;
  Eigen::MatrixXd eigenvectors;
  Eigen::VectorXd eigenvalues;

  std::size_t dimension() const noexcept { return states.size(); }
};

inline BlockadeSubspace blockade_subspace(const Graph& g, const SimulatorLimits& limits = {}) {
  const int n = g.size();
  check_qubits(n, limits);
  std::vector<std::uint64_t> nbr(static_cast<std::size_t>(n), 0);
  for (auto [u, v] : g.edges()) {
    nbr[u] |= std::uint64_t{1} << v;
    nbr[v] |= std::uint64_t{1} << u;
  }
  BlockadeSubspace b;
  b.qubits = n;
  for (std::uint64_t z = 0; z < (std::uint64_t{1} << n); ++z) {
    bool independent = true;
    for (int u = 0; u < n && independent; ++u)
      if ((z >> u) & 1U) independent = (z & nbr[u]) == 0;
    if (independent) b.states.push_back(z);
  }
  const auto dim = static_cast<Eigen::Index>(b.states.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index a = 0; a < dim; ++a) {
    const std::uint64_t z = b.states[static_cast<std::size_t>(a)];
    b.sizes.push_back(std::popcount(z));
    for (int q = 0; q < n; ++q) {
      const std::uint64_t y = z ^ (std::uint64_t{1} << q);
      const auto it = std::lower_bound(b.states.begin(), b.states.end(), y);
      if (it != b.states.end() && *it == y) h(a, it - b.states.begin()) = 1.0;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  if (es.info() != Eigen::Success) throw Error("eigendecomposition failed");
  b.eigenvectors = es.eigenvectors();
  b.eigenvalues = es.eigenvalues();
  return b;
}

/// Amplitudes over b.states after the layers exp(-i beta_l H_X) exp(i gamma_l |z|).
inline Eigen::VectorXcd blockade_evolve(const BlockadeSubspace& b, const QaoaParams& params) {
  params.validate();
  const auto dim = static_cast<Eigen::Index>(b.dimension());
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
  psi(0) = 1.0;
  const Eigen::MatrixXcd v = b.eigenvectors.cast<Complex>();
  for (int l = 0; l < params.depth(); ++l) {
    for (Eigen::Index a = 0; a < dim; ++a) psi(a) *= std::polar(1.0, params.gammas[l] * b.sizes[static_cast<std::size_t>(a)]);
    Eigen::VectorXcd c = v.adjoint() * psi;
    for (Eigen::Index m = 0; m < dim; ++m) c(m) *= std::polar(1.0, -params.betas[l] * b.eigenvalues(m));
    psi = v * c;
  }
  return psi;
}

inline double blockade_expected_size(const BlockadeSubspace& b, const Eigen::VectorXcd& psi) {
  double e = 0.0;
  for (Eigen::Index a = 0; a < psi.size(); ++a) e += std::norm(psi(a)) * b.sizes[static_cast<std::size_t>(a)];
  return e;
}

/// Full-register state with the subspace amplitudes in place.
inline StateVector blockade_to_state(const BlockadeSubspace& b, const Eigen::VectorXcd& psi) {
  std::vector<Complex> amps(std::size_t{1} << b.qubits);
  for (std::size_t a = 0; a < b.dimension(); ++a) amps[b.states[a]] = psi(static_cast<Eigen::Index>(a));
  return StateVector(b.qubits, std::move(amps));
}

inline double blockade_radius(double c6, double omega) {
  if (!(omega > 0.0)) throw DomainError("blockade radius needs omega > 0");
  if (!(c6 > 0.0)) throw DomainError("blockade radius needs c6 > 0");
  return std::pow(c6 / omega, 1.0 / 6.0);
}

/// Edge iff distance <= r (closed threshold).
inline Graph positions_to_udgraph(std::span<const Point> pos, double r) {
  const int n = static_cast<int>(pos.size());
  Graph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (squared_distance(pos[i], pos[j]) <= r * r + kUnitDiskSlack) g.add_edge(i, j);
  return g;
}

/// C6/hbar for the 70S Rubidium state, rad um^6 / s.
inline constexpr double kDefaultC6 = 5.42015853e12;

struct RydbergParams {
  double omega = kDefaultC6 / (15.0 * 15.0 * 15.0 * 15.0 * 15.0 * 15.0);  // r_b = 15 um
  double delta = 0.0;
  double c6 = kDefaultC6;
  std::vector<Point> positions;

  void validate() const {
    if (!(omega >= 0.0)) throw DomainError("omega must be nonnegative");
    if (!(c6 >= 0.0)) throw DomainError("c6 must be nonnegative");
    for (std::size_t i = 0; i < positions.size(); ++i)
      for (std::size_t j = i + 1; j < positions.size(); ++j)
        if (positions[i] == positions[j]) throw DomainError("atom positions must be pairwise distinct");
  }
};

struct PulseSegment {
  double omega = 0.0;
  double delta = 0.0;
  double duration = 0.0;
};

inline constexpr int kAnalogMaxAtoms = 12;

inline Eigen::MatrixXd rydberg_hamiltonian(const RydbergParams& params, double omega, double delta) {
  params.validate();
  const int n = static_cast<int>(params.positions.size());
  if (n < 1) throw DomainError("at least one atom is required");
  if (n > kAnalogMaxAtoms)
    throw CapError(std::to_string(n) + " atoms exceed the dense evolution cap of " + std::to_string(kAnalogMaxAtoms));
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  std::vector<double> vij;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) vij.push_back(params.c6 / std::pow(squared_distance(params.positions[i], params.positions[j]), 3));
  for (Eigen::Index z = 0; z < dim; ++z) {
    double d = 0.0;
    for (int i = 0; i < n; ++i) {
      const int ni = static_cast<int>((z >> i) & 1);
      d -= 0.5 * delta * (2.0 * ni - 1.0);
      h(z ^ (Eigen::Index{1} << i), z) += 0.5 * omega;
    }
    std::size_t k = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j, ++k)
        if (((z >> i) & 1) && ((z >> j) & 1)) d += vij[k];
    h(z, z) = d;
  }
  return h;
}

/// Piecewise-constant evolution, exact per segment via eigendecomposition.
/// Segment omega/delta override those in params; positions and c6 are shared.
inline StateVector analog_evolve(const StateVector& state, const RydbergParams& params,
                                 std::span<const PulseSegment> schedule) {
  const int n = static_cast<int>(params.positions.size());
  if (state.qubits() != n) throw DomainError("state width does not match atom count");
  StateVector out = state;
  const Eigen::Index dim = static_cast<Eigen::Index>(out.dimension());
  for (const auto& seg : schedule) {
    if (!(seg.duration >= 0.0)) throw DomainError("segment duration must be nonnegative");
    if (!(seg.omega >= 0.0)) throw DomainError("segment omega must be nonnegative");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rydberg_hamiltonian(params, seg.omega, seg.delta));
    if (es.info() != Eigen::Success) throw Error("eigendecomposition failed");
    const auto& v = es.eigenvectors();
    const auto& lam = es.eigenvalues();
    Eigen::VectorXcd psi(dim);
    for (Eigen::Index z = 0; z < dim; ++z) psi(z) = out[static_cast<std::size_t>(z)];
    Eigen::VectorXcd c = v.transpose().cast<Complex>() * psi;
    for (Eigen::Index m = 0; m < dim; ++m) c(m) *= std::polar(1.0, -lam(m) * seg.duration);
    psi = v.cast<Complex>() * c;
    for (Eigen::Index z = 0; z < dim; ++z) out[static_cast<std::size_t>(z)] = psi(z);
  }
  return out;
}

}  // namespace evq
