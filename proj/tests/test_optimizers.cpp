#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "evq/optimizers.hpp"
#include "evq/qaoa_driver.hpp"
#include "evq/classical.hpp"
#include "test_support.hpp"

using namespace evq;

namespace {

double rosenbrock(std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) s += 100.0 * std::pow(x[i + 1] - x[i] * x[i], 2) + std::pow(1.0 - x[i], 2);
  return s;
}

double sphere(std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - 0.3 * static_cast<double>(i)) * (x[i] - 0.3 * static_cast<double>(i));
  return s;
}

double rastrigin(std::span<const double> x) {
  double s = 10.0 * static_cast<double>(x.size());
  for (double v : x) s += v * v - 10.0 * std::cos(2.0 * std::numbers::pi * v);
  return s;
}

Box cube(std::size_t d, double lo, double hi) { return {std::vector<double>(d, lo), std::vector<double>(d, hi)}; }

void expect_consistent(const Objective& obj, const OptimizerReport& r) {
  EXPECT_NEAR(obj(r.best_x), r.best_f, 0.0);
  EXPECT_TRUE(obj.bounds().contains(r.best_x));
  for (std::size_t i = 1; i < r.trajectory.size(); ++i) {
    EXPECT_LE(r.trajectory[i].best_f, r.trajectory[i - 1].best_f);
    EXPECT_GT(r.trajectory[i].evals, r.trajectory[i - 1].evals);
  }
  EXPECT_FALSE(r.reason.empty());
}

}  // namespace

TEST(Box, ClampAndValidate) {
  const Box b{{0, -1}, {1, 1}};
  EXPECT_EQ(b.clamp(std::vector<double>{2, -3}), (std::vector<double>{1, -1}));
  EXPECT_THROW((Box{{1}, {0}}.validate()), DomainError);
  const auto f = flat_params_box(default_qaoa_layer_box(), 3);
  ASSERT_EQ(f.size(), 6U);
  EXPECT_DOUBLE_EQ(f.upper[0], 2.0 * std::numbers::pi);
  EXPECT_DOUBLE_EQ(f.upper[3], std::numbers::pi);
}

TEST(Objective, CountsEvaluations) {
  Objective obj(sphere, cube(2, -1, 1));
  obj(std::vector<double>{0, 0});
  obj(std::vector<double>{0, 1});
  EXPECT_EQ(obj.evals(), 2U);
  EXPECT_THROW(obj(std::vector<double>{0}), DomainError);
}

TEST(GridSearch, FindsBestLatticePoint) {
  Objective obj(sphere, cube(2, 0, 1));
  const auto r = grid_search(obj, 11);
  EXPECT_EQ(r.evals, 121U);
  EXPECT_NEAR(r.best_x[0], 0.0, 1e-12);
  EXPECT_NEAR(r.best_x[1], 0.3, 1e-12);
  Objective big(sphere, cube(4, 0, 1));
  EXPECT_THROW(grid_search(big, 3), CapError);
}

TEST(NelderMead, SolvesRosenbrock) {
  Objective obj(rosenbrock, cube(2, -2, 2));
  const auto r = nelder_mead(obj, std::vector<double>{-1.2, 1.0}, {.max_evals = 4000, .xtol = 1e-10});
  EXPECT_NEAR(r.best_x[0], 1.0, 1e-4);
  EXPECT_NEAR(r.best_x[1], 1.0, 1e-4);
  EXPECT_TRUE(r.converged);
  expect_consistent(obj, r);
}

TEST(NelderMead, RespectsBudget) {
  Objective obj(rosenbrock, cube(2, -2, 2));
  const auto r = nelder_mead(obj, std::vector<double>{-1.2, 1.0}, {.max_evals = 50});
  EXPECT_LE(r.evals, 50U);
  EXPECT_FALSE(r.converged);
}

TEST(FdGradient, MatchesAnalyticAndShiftsAtBounds) {
  Objective obj(sphere, cube(3, 0, 1));
  const auto g = fd_gradient(obj, std::vector<double>{0.5, 0.1, 0.0});
  EXPECT_NEAR(g[0], 1.0, 1e-6);
  EXPECT_NEAR(g[1], -0.4, 1e-6);
  EXPECT_NEAR(g[2], -1.2, 1e-4);  // one-sided region near the lower bound
}

TEST(Bfgs, ConvergesOnSmoothProblems) {
  Objective quad(sphere, cube(4, -3, 3));
  const auto r = bfgs_fd(quad, std::vector<double>{2, 2, 2, 2});
  EXPECT_LT(r.best_f, 1e-10);
  expect_consistent(quad, r);
  Objective rb(rosenbrock, cube(2, -2, 2));
  const auto r2 = bfgs_fd(rb, std::vector<double>{-1.2, 1.0}, {.max_iter = 500, .max_evals = 20000});
  EXPECT_NEAR(r2.best_x[0], 1.0, 1e-4);
  EXPECT_NEAR(r2.best_x[1], 1.0, 1e-4);
}

TEST(DifferentialEvolution, FindsGlobalMinimumOfRastrigin) {
  Objective obj(rastrigin, cube(2, -5.12, 5.12));
  const auto r = diff_evolution(obj, DeOptions::with(40, 300, 1e-10), 3);
  EXPECT_LT(r.best_f, 1e-6);
  expect_consistent(obj, r);
}

TEST(DifferentialEvolution, DeterministicAcrossWorkerCounts) {
  Objective a(rastrigin, cube(3, -5.12, 5.12));
  Objective b(rastrigin, cube(3, -5.12, 5.12));
  auto o1 = DeOptions::with(20, 30, 0.0);
  auto o4 = o1;
  o4.workers = 4;
  const auto r1 = diff_evolution(a, o1, 8);
  const auto r4 = diff_evolution(b, o4, 8);
  EXPECT_EQ(r1.best_x, r4.best_x);
  EXPECT_EQ(r1.evals, r4.evals);
}

TEST(DifferentialEvolution, InitialPointsAndBudget) {
  Objective obj(sphere, cube(2, -1, 1));
  auto o = DeOptions::with(10, 100, 0.0);
  o.initial_points = {{0.0, 0.3}};
  o.budget = 35;
  const auto r = diff_evolution(obj, o, 1);
  EXPECT_DOUBLE_EQ(r.best_f, 0.0);
  EXPECT_LE(r.evals, 35U);
}

TEST(Egg, LayerValuesNeverRegress) {
  const auto g = fixtures::random_complete(6, 4);
  QaoaRunOptions opts;
  opts.p_max = 4;
  const auto res = run_qaoa_maxkcut(g, 2, opts, 5, brute_maxkcut(g, 2).value);
  for (std::size_t i = 1; i < res.per_layer_trace.size(); ++i)
    EXPECT_GE(res.per_layer_trace[i].expectation, res.per_layer_trace[i - 1].expectation - 1e-9);
  EXPECT_EQ(res.per_layer_trace.back().cumulative_evals, res.evals);
}

TEST(Interp, BothLocalSolversProduceValidDepthSequences) {
  const auto g = fixtures::random_complete(6, 9);
  const double opt = brute_maxkcut(g, 2).value;
  for (Strategy s : {Strategy::interp_nelder_mead, Strategy::interp_de}) {
    QaoaRunOptions opts;
    opts.p_max = 3;
    opts.strategy = s;
    const auto res = run_qaoa_maxkcut(g, 2, opts, 2, opt);
    ASSERT_EQ(res.per_layer_trace.size(), 3U);
    for (const auto& l : res.per_layer_trace) {
      EXPECT_EQ(l.params.depth(), l.depth);
      EXPECT_LE(*l.ratio, 1.0 + 1e-9);
      EXPECT_GT(*l.ratio, 0.5);
    }
  }
}

TEST(Driver, ReportsDenormalizedCutsAndIsDeterministic) {
  const auto g = fixtures::random_complete(5, 1);
  QaoaRunOptions opts;
  opts.p_max = 2;
  const auto a = run_qaoa_maxkcut(g, 2, opts, 7);
  const auto b = run_qaoa_maxkcut(g, 2, opts, 7);
  EXPECT_EQ(a.params.gammas, b.params.gammas);
  EXPECT_EQ(a.best_sampled, b.best_sampled);
  EXPECT_NEAR(a.expectation, qaoa_expectation(g.scaled(a.scale), 2, a.params) / a.scale, 1e-9);
  EXPECT_DOUBLE_EQ(cut_value(g, a.best_sampled), a.best_sampled_value);
  EXPECT_EQ(parse_strategy("interp-de"), Strategy::interp_de);
  EXPECT_THROW(parse_strategy("cobyla"), ConfigError);
}

TEST(Landscape, GridAndStrictMinima) {
  const Box b{{0, 0}, {1, 1}};
  const auto l = landscape_grid([](double x, double y) { return (x - 0.5) * (x - 0.5) + (y - 0.25) * (y - 0.25); }, 5, b);
  EXPECT_EQ(l.values.size(), 25U);
  EXPECT_DOUBLE_EQ(l.argmin_x, 0.5);
  EXPECT_DOUBLE_EQ(l.argmin_y, 0.25);
  EXPECT_DOUBLE_EQ(l.at(1, 2), l.min_value);
  EXPECT_EQ(count_strict_local_minima(l), 1);
  const auto wavy = landscape_grid([](double x, double y) { return std::cos(6 * std::numbers::pi * x) + 0 * y; }, 31, b);
  // Flat along y, so no strict minima at all.
  EXPECT_EQ(count_strict_local_minima(wavy), 0);
  const auto egg = landscape_grid(
      [](double x, double y) { return std::cos(4 * std::numbers::pi * x) * std::cos(4 * std::numbers::pi * y); }, 33, b);
  EXPECT_GE(count_strict_local_minima(egg), 4);
}
