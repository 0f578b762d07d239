#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "evq/circuit.hpp"
#include "evq/classical.hpp"
#include "evq/qaoa_maxkcut.hpp"
#include "test_support.hpp"

using namespace evq;

TEST(Encoding, ColoringRoundTrips) {
  for (int k : {2, 4, 8}) {
    EXPECT_EQ(1 << bits_per_color(k), k);
    const Assignment labels{0, k - 1, 1 % k, (k - 1) / 2};
    EXPECT_EQ(decode_coloring(encode_coloring(labels, k), 4, k), labels);
  }
  EXPECT_THROW(bits_per_color(3), DomainError);
}

TEST(Diagonal, EntriesAreNegatedCutsOfDecodedColorings) {
  const auto g = fixtures::random_sparse(4, 0.7, 3);
  for (int k : {2, 4}) {
    const auto d = cost_diagonal(g, k);
    for (std::uint64_t z = 0; z < d.dimension(); ++z)
      EXPECT_DOUBLE_EQ(d.values[z], -cut_value(g, decode_coloring(z, 4, k)));
  }
}

TEST(Qaoa, ZeroAnglesGiveTheUniformAverage) {
  const auto g = fixtures::random_complete(5, 1);
  EXPECT_NEAR(qaoa_expectation(g, 2, {{0.0}, {0.0}}), 0.5 * g.total_weight(), 1e-12);
  EXPECT_NEAR(qaoa_expectation(g, 4, {{0.0}, {0.0}}), 0.75 * g.total_weight(), 1e-12);
}

TEST(Qaoa, ClosedFormMatchesSimulatorOnRandomGraphs) {
  Rng rng = make_rng(17);
  for (int n = 3; n <= 8; ++n) {
    const auto g = fixtures::random_sparse(n, 0.8, static_cast<std::uint64_t>(n));
    for (int t = 0; t < 10; ++t) {
      const double gamma = uniform(rng, -3.0, 3.0);
      const double beta = uniform(rng, -1.6, 1.6);
      EXPECT_NEAR(analytic_p1(g, gamma, beta), qaoa_expectation(g, 2, {{gamma}, {beta}}), 1e-10);
    }
  }
}

TEST(Qaoa, ExpectationNeverExceedsOptimum) {
  const auto g = fixtures::random_complete(6, 5);
  const double opt = brute_maxkcut(g, 2).value;
  Rng rng = make_rng(3);
  for (int t = 0; t < 30; ++t) {
    QaoaParams p{{uniform(rng, 0, 1), uniform(rng, 0, 1)}, {uniform(rng, 0, 1), uniform(rng, 0, 1)}};
    EXPECT_LE(qaoa_expectation(g, 2, p), opt + 1e-9);
  }
}

TEST(Params, InterpExtendMatchesFormula) {
  EXPECT_EQ(interp_extend(std::vector<double>{1.0}), (std::vector<double>{1.0, 1.0}));
  const auto e = interp_extend(std::vector<double>{1.0, 3.0});
  ASSERT_EQ(e.size(), 3U);
  EXPECT_DOUBLE_EQ(e[0], 1.0);
  EXPECT_DOUBLE_EQ(e[1], 0.5 * 1.0 + 0.5 * 3.0);
  EXPECT_DOUBLE_EQ(e[2], 3.0);
  const QaoaParams p{{0.1, 0.2}, {0.3, 0.4}};
  EXPECT_EQ(QaoaParams::from_flat(p.flat()).gammas, p.gammas);
  EXPECT_THROW((QaoaParams{{0.1}, {}}.validate()), DomainError);
}

namespace {

double global_phase_fidelity(const StateVector& a, const StateVector& b) { return std::abs(inner_product(a, b)); }

}  // namespace

TEST(Circuit, PhaseLayerMatchesDiagonalUpToGlobalPhase) {
  const auto g = fixtures::random_sparse(3, 1.0, 8);
  for (int k : {2, 4}) {
    const auto cost = cost_diagonal(g, k);
    const int q = cost.qubits;
    auto ref = init_uniform(q);
    apply_mixer(ref, 0.37);  // non-uniform input so relative phases matter
    auto sim = ref;
    apply_phase(ref, cost, 0.81);
    simulate(synthesize_circuit(g, k, 0.81), sim);
    EXPECT_NEAR(global_phase_fidelity(ref, sim), 1.0, 1e-12) << "k=" << k;
  }
}

TEST(Circuit, FullCircuitReproducesPreparedState) {
  const auto g = fixtures::random_sparse(3, 1.0, 2);
  const QaoaParams p{{0.4, 1.3}, {0.2, 0.9}};
  for (int k : {2, 4}) {
    const auto circ = synthesize_qaoa_circuit(g, k, p);
    auto s = basis_state(circ.qubits, 0);
    simulate(circ, s);
    EXPECT_NEAR(global_phase_fidelity(s, prepare_state(cost_diagonal(g, k), p)), 1.0, 1e-12);
  }
}

TEST(Circuit, GateCountsPerEdge) {
  const auto g = to_weighted(complete_graph(4));
  const auto c2 = synthesize_circuit(g, 2, 0.5).counts();
  EXPECT_EQ(c2.cnot, 2U * 6U);
  EXPECT_EQ(c2.rz, 6U);
  const auto c4 = synthesize_circuit(g, 4, 0.5).counts();
  EXPECT_EQ(c4.cnot, 10U * 6U);
  EXPECT_EQ(c4.rz, 3U * 6U);
  EXPECT_THROW(synthesize_circuit(g, 3, 0.5), DomainError);
}

TEST(Circuit, QasmListsEveryGate) {
  const auto g = to_weighted(complete_graph(2));
  const auto text = to_qasm(synthesize_qaoa_circuit(g, 2, {{0.5}, {0.25}}));
  EXPECT_NE(text.find("OPENQASM 2.0;"), std::string::npos);
  EXPECT_NE(text.find("qreg q[2];"), std::string::npos);
  EXPECT_NE(text.find("cx q[0],q[1];"), std::string::npos);
}
