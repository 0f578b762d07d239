#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "evq/classical.hpp"
#include "evq/qaoa_driver.hpp"
#include "evq/qaoa_mis.hpp"
#include "test_support.hpp"

using namespace evq;

TEST(MisCost, DiagonalCountsSizeAndViolations) {
  Graph g(3);
  g.add_edge(0, 1);
  const auto spec = make_mis_spec(g, 10.0);
  const auto d = mis_cost_diagonal(spec);
  EXPECT_DOUBLE_EQ(d.values[0b000], 0.0);
  EXPECT_DOUBLE_EQ(d.values[0b101], -2.0);
  EXPECT_DOUBLE_EQ(d.values[0b011], -2.0 + 10.0);
  EXPECT_DOUBLE_EQ(d.values[0b111], -3.0 + 10.0);
  EXPECT_THROW(make_mis_spec(g, 1.0), DomainError);
}

TEST(MisCost, DefaultPenaltyKeepsGroundSetExact) {
  const auto spec = make_mis_spec(cycle_graph(5));
  EXPECT_DOUBLE_EQ(spec.U, kDefaultMisPenalty);
  const auto d = mis_cost_diagonal(spec);
  EXPECT_DOUBLE_EQ(*std::min_element(d.values.begin(), d.values.end()), -2.0);
}

TEST(MisCost, MinimumIsTheMaximumIndependentSet) {
  for (std::uint64_t s = 1; s <= 8; ++s) {
    const auto g = fixtures::random_graph(10, 0.35, s);
    const auto d = mis_cost_diagonal(make_mis_spec(g));
    EXPECT_DOUBLE_EQ(d.min(), -static_cast<double>(brute_mis(g).size));
  }
}

TEST(Repair, AlwaysYieldsAnIndependentSubset) {
  const auto g = fixtures::random_graph(9, 0.4, 5);
  for (std::uint64_t z = 0; z < 512; ++z) {
    const auto r = repair_independent_set(g, z);
    EXPECT_EQ(r & ~z, 0U);
    for (auto [u, v] : g.edges()) EXPECT_FALSE(((r >> u) & 1U) && ((r >> v) & 1U));
  }
}

TEST(Repair, DropsHigherDegreeThenHigherIndex) {
  Graph path(3);  // 0 - 1 - 2, node 1 has degree 2
  path.add_edge(0, 1);
  path.add_edge(1, 2);
  EXPECT_EQ(repair_independent_set(path, 0b111), 0b101U);
  Graph edge(2);
  edge.add_edge(0, 1);
  EXPECT_EQ(repair_independent_set(edge, 0b11), 0b01U);
}

TEST(UnitDisk, BlockadeRadiusAndClosedThreshold) {
  EXPECT_NEAR(blockade_radius(kDefaultC6, RydbergParams{}.omega), 15.0, 1e-9);
  const std::vector<Point> pos{{0, 0}, {15, 0}, {30.0001, 0}, {0, 15.0001}};
  const auto g = positions_to_udgraph(pos, 15.0);
  EXPECT_TRUE(g.has_edge(0, 1));
  EXPECT_TRUE(g.has_edge(1, 2) == false);
  EXPECT_FALSE(g.has_edge(0, 3));
}

TEST(Analog, SingleAtomRabiOscillation) {
  RydbergParams p;
  p.positions = {{0, 0}};
  const double t = std::numbers::pi / p.omega;
  const std::vector<PulseSegment> seg{{p.omega, 0.0, t}};
  const auto s = analog_evolve(basis_state(1, 0), p, seg);
  EXPECT_NEAR(s.probability(1), 1.0, 1e-9);
  const std::vector<PulseSegment> half{{p.omega, 0.0, t / 2}};
  EXPECT_NEAR(analog_evolve(basis_state(1, 0), p, half).probability(1), 0.5, 1e-9);
}

TEST(Analog, DistantAtomsOscillateIndependently) {
  RydbergParams p;
  p.positions = {{0, 0}, {200, 0}};
  const std::vector<PulseSegment> seg{{p.omega, 0.0, std::numbers::pi / p.omega}};
  EXPECT_NEAR(analog_evolve(basis_state(2, 0), p, seg).probability(0b11), 1.0, 1e-6);
}

TEST(Analog, BlockadeSuppressesDoubleExcitation) {
  RydbergParams p;
  p.positions = {{0, 0}, {5, 0}};
  // Collective Rabi frequency sqrt(2) Omega drives |00> fully into the W state.
  const std::vector<PulseSegment> seg{{p.omega, 0.0, std::numbers::pi / (std::sqrt(2.0) * p.omega)}};
  const auto s = analog_evolve(basis_state(2, 0), p, seg);
  EXPECT_LT(s.probability(0b11), 1e-4);
  EXPECT_NEAR(s.probability(0b01) + s.probability(0b10), 1.0, 1e-4);
  EXPECT_NEAR(s.norm_squared(), 1.0, 1e-12);
}

TEST(Analog, HamiltonianIsSymmetricAndCapped) {
  RydbergParams p;
  p.positions = {{0, 0}, {7, 0}, {0, 9}};
  const auto h = rydberg_hamiltonian(p, 1.0, 2.0);
  EXPECT_LT((h - h.transpose()).norm(), 1e-12);
  // Diagonal of |000>: -delta/2 * (-1) * 3.
  EXPECT_DOUBLE_EQ(h(0, 0), 3.0);
  p.positions.clear();
  for (int i = 0; i < 13; ++i) p.positions.push_back({20.0 * i, 0});
  EXPECT_THROW(rydberg_hamiltonian(p, 1.0, 0.0), CapError);
}

TEST(MisQaoa, RatioBoundedAndImprovesOverUniform) {
  const auto g = fixtures::random_graph(8, 0.35, 3);
  const int mis = brute_mis(g).size;
  QaoaRunOptions opts;
  opts.p_max = 2;
  const auto res = run_qaoa_mis(make_mis_spec(g), opts, 4, mis);
  const auto rep = repaired_size_diagonal(g);
  double uniform_mean = 0.0;
  for (double v : rep) uniform_mean += v;
  uniform_mean /= static_cast<double>(rep.size());
  ASSERT_TRUE(res.ratio.has_value());
  EXPECT_LE(*res.ratio, 1.0 + 1e-9);
  EXPECT_GT(res.expectation, uniform_mean);
  EXPECT_EQ(res.per_layer_trace.size(), 2U);
  EXPECT_LE(res.best_sampled_value, mis);
}

TEST(Blockade, SubspaceListsIndependentSets) {
  Graph path(3);
  path.add_edge(0, 1);
  path.add_edge(1, 2);
  EXPECT_EQ(blockade_subspace(path).states, (std::vector<std::uint64_t>{0b000, 0b001, 0b010, 0b100, 0b101}));
  EXPECT_EQ(blockade_subspace(cycle_graph(5)).dimension(), 11U);
}

TEST(Blockade, IsolatedAtomFlipsAtHalfPi) {
  const auto b = blockade_subspace(Graph(1));
  const auto psi = blockade_evolve(b, QaoaParams{{0.3}, {std::numbers::pi / 2}});
  EXPECT_NEAR(std::norm(psi(1)), 1.0, 1e-12);
  EXPECT_NEAR(blockade_expected_size(b, psi), 1.0, 1e-12);
}

TEST(Blockade, MatchesProjectedDriveOnFullRegister) {
  const auto g = fixtures::random_graph(6, 0.4, 21);
  const int n = g.size();
  const Eigen::Index dim = Eigen::Index{1} << n;
  auto independent = [&](Eigen::Index z) {
    for (auto [u, v] : g.edges())
      if (((z >> u) & 1) && ((z >> v) & 1)) return false;
    return true;
  };
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index z = 0; z < dim; ++z)
    for (int q = 0; q < n; ++q)
      if (independent(z) && independent(z ^ (Eigen::Index{1} << q))) h(z ^ (Eigen::Index{1} << q), z) = 1.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  const QaoaParams p{{0.7, 2.1}, {1.3, 0.4}};
  Eigen::VectorXcd full = Eigen::VectorXcd::Zero(dim);
  full(0) = 1.0;
  for (int l = 0; l < p.depth(); ++l) {
    for (Eigen::Index z = 0; z < dim; ++z) full(z) *= std::polar(1.0, p.gammas[l] * std::popcount(static_cast<std::uint64_t>(z)));
    Eigen::VectorXcd c = es.eigenvectors().cast<Complex>().adjoint() * full;
    for (Eigen::Index m = 0; m < dim; ++m) c(m) *= std::polar(1.0, -p.betas[l] * es.eigenvalues()(m));
    full = es.eigenvectors().cast<Complex>() * c;
  }
  const auto b = blockade_subspace(g);
  const auto state = blockade_to_state(b, blockade_evolve(b, p));
  for (Eigen::Index z = 0; z < dim; ++z) EXPECT_NEAR(std::abs(state[static_cast<std::size_t>(z)] - full(z)), 0.0, 1e-10);
  EXPECT_NEAR(state.norm_squared(), 1.0, 1e-12);
}

TEST(Blockade, RunSamplesOnlyIndependentSets) {
  const auto g = fixtures::random_graph(9, 0.4, 5);
  const int mis = brute_mis(g).size;
  QaoaRunOptions opts;
  opts.p_max = 3;
  opts.mis_ansatz = MisAnsatz::blockade;
  const auto res = run_qaoa_mis(make_mis_spec(g), opts, 2, mis);
  ASSERT_EQ(res.per_layer_trace.size(), 3U);
  EXPECT_LE(*res.ratio, 1.0 + 1e-9);
  EXPECT_GT(*res.ratio, 0.0);
  for (std::size_t l = 1; l < 3; ++l)
    EXPECT_GE(res.per_layer_trace[l].expectation, res.per_layer_trace[l - 1].expectation - 1e-9);
  std::uint64_t set = 0;
  for (int u = 0; u < g.size(); ++u)
    if (res.best_sampled[u]) set |= std::uint64_t{1} << u;
  EXPECT_EQ(repair_independent_set(g, set), set);
  EXPECT_EQ(std::popcount(set), static_cast<int>(res.best_sampled_value));
}
