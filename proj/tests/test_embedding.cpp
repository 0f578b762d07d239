#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "evq/embedding.hpp"
#include "evq/instances.hpp"
#include "evq/reduction.hpp"
#include "test_support.hpp"

using namespace evq;

namespace {

Graph path_graph(int n) {
  Graph g(n);
  for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

Graph star_graph(int leaves) {
  Graph g(leaves + 1);
  for (int v = 1; v <= leaves; ++v) g.add_edge(0, v);
  return g;
}

}  // namespace

TEST(Verify, AcceptsAHandBuiltLayout) {
  const EmbedSpec spec{path_graph(3)};
  const Layout l{{{0, 0}, {10, 0}, {20, 0}}, spec, 20};
  EXPECT_TRUE(verify_layout(l).feasible);
  EXPECT_DOUBLE_EQ(constraint_penalty(l), 0.0);
}

TEST(Verify, ReportsEachViolationKind) {
  const EmbedSpec spec{path_graph(3)};
  auto kinds = [&](const Layout& l) {
    std::set<ViolationKind> k;
    for (const auto& v : verify_layout(l).violations) k.insert(v.kind);
    return k;
  };
  EXPECT_TRUE(kinds({{{0, 0}, {16, 0}, {32, 0}}, spec, 32}).count(ViolationKind::edge_too_far));
  EXPECT_TRUE(kinds({{{0, 0}, {4, 0}, {20, 0}}, spec, 20}).count(ViolationKind::edge_too_close));
  EXPECT_TRUE(kinds({{{0, 0}, {10, 0}, {15, 0}}, spec, 15}).count(ViolationKind::nonedge_too_close));
  EXPECT_TRUE(kinds({{{0, 0}, {10, 0}, {20, 0}}, spec, 19}).count(ViolationKind::out_of_square));
  const EmbedSpec tight{path_graph(3), 15, 5, 18};
  EXPECT_TRUE(kinds({{{0, 0}, {10, 0}, {20, 0}}, tight, 20}).count(ViolationKind::side_too_large));
  const EmbedSpec empty{Graph(2)};
  EXPECT_TRUE(kinds({{{0, 0}, {3, 0}}, empty, 3}).count(ViolationKind::pair_too_close));
  EXPECT_FALSE(verify_layout({{{0, 0}, {3, 0}}, empty, 3}).feasible);
}

TEST(Verify, NonEdgeAtExactlyRIsRejected) {
  const EmbedSpec spec{Graph(2)};
  EXPECT_FALSE(verify_layout({{{0, 0}, {15, 0}}, spec, 15}).feasible);
  EXPECT_TRUE(verify_layout({{{0, 0}, {15.001, 0}}, spec, 15.001}).feasible);
}

TEST(Verify, SpecValidation) {
  EXPECT_THROW((EmbedSpec{Graph(2), 5, 5, 100}.validate()), DomainError);
  EXPECT_THROW((EmbedSpec{Graph(2), 15, 5, 10}.validate()), DomainError);
}

TEST(Solve, EmbedsPathsCyclesAndSmallCliques) {
  for (const Graph& g : {path_graph(6), cycle_graph(6), complete_graph(4)}) {
    const auto res = solve_layout(EmbedSpec{g}, 3);
    ASSERT_TRUE(res.feasible);
    EXPECT_TRUE(verify_layout(res.layout).feasible);
    EXPECT_EQ(positions_to_udgraph(res.layout.positions, 15.0), g);
  }
}

TEST(Solve, StarWithSixLeavesIsInfeasible) {
  AnnealOptions ao;
  ao.restarts = 4;
  const auto res = solve_layout(EmbedSpec{star_graph(6)}, 1, ao);
  EXPECT_FALSE(res.feasible);
  EXPECT_GT(res.best_penalty, 0.0);
  EXPECT_FALSE(res.violation_census.empty());
  EXPECT_EQ(res.restarts_run, 4);
}

TEST(Solve, ResultDoesNotDependOnWorkerCount) {
  const auto recs = synthetic_records(300, 4);
  const auto g = sc2_to_graph(gen_sc2(recs, 3, 3, 5));
  AnnealOptions one, four;
  four.workers = 4;
  const auto a = solve_layout(EmbedSpec{g}, 9, one);
  const auto b = solve_layout(EmbedSpec{g}, 9, four);
  EXPECT_EQ(a.feasible, b.feasible);
  EXPECT_EQ(a.feasible_restart, b.feasible_restart);
  EXPECT_EQ(a.layout.positions, b.layout.positions);
}

TEST(Solve, NodeCapRaisesCapError) {
  AnnealOptions ao;
  ao.max_nodes = 5;
  EXPECT_THROW(solve_layout(EmbedSpec{path_graph(6)}, 1, ao), CapError);
}

TEST(Normalize, ShiftsToOriginAndSetsSide) {
  const auto l = normalize_layout({{3, 5}, {10, 7}}, EmbedSpec{Graph(2)});
  EXPECT_EQ(l.positions[0], (Point{0, 0}));
  EXPECT_EQ(l.positions[1], (Point{7, 2}));
  EXPECT_DOUBLE_EQ(l.side, 7);
}
