// Schedules six charging jobs on two chargers via Max-2-Cut QAOA, then solves
// a small group-interval MIS instance and embeds its conflict graph.

#include <cstdio>

#include "evq/classical.hpp"
#include "evq/embedding.hpp"
#include "evq/instances.hpp"
#include "evq/qaoa_driver.hpp"
#include "evq/reduction.hpp"

int main() {
  const auto records = evq::synthetic_records(500, 7);

  const auto sc1 = evq::gen_sc1(records, 6, 2, 1);
  const auto g = evq::sc1_to_graph(sc1);
  const double best_cut = evq::brute_maxkcut(g, 2).value;
  evq::QaoaRunOptions opts;
  opts.p_max = 3;
  const auto res = evq::run_qaoa_maxkcut(g, 2, opts, 1, best_cut);
  std::printf("SC1: optimal cut %.0f, optimal schedule cost %lld\n", best_cut,
              static_cast<long long>(evq::dp_optimum(sc1)));
  for (const auto& l : res.per_layer_trace)
    std::printf("  p=%d  <cut>=%.3f  ratio=%.4f  evals=%zu\n", l.depth, l.expectation, *l.ratio, l.evals);
  const auto sampled = evq::schedule_cost(sc1, res.best_sampled);
  std::printf("  best sampled cut %.0f -> schedule cost %lld\n", res.best_sampled_value,
              static_cast<long long>(sampled.total));

  const auto sc2 = evq::gen_sc2(records, 3, 3, 2);
  const auto conflicts = evq::sc2_to_graph(sc2);
  const auto mis = evq::brute_mis(conflicts);
  opts.mis_ansatz = evq::MisAnsatz::blockade;
  const auto mres = evq::run_qaoa_mis(evq::make_mis_spec(conflicts), opts, 2, mis.size);
  std::printf("SC2: %d vertices, %zu conflicts, MIS size %d, blockade QAOA p=%d ratio %.4f\n", conflicts.size(),
              conflicts.edge_count(), mis.size, opts.p_max, *mres.ratio);

  const auto layout = evq::solve_layout(evq::EmbedSpec{conflicts}, 2);
  std::printf("  unit-disk layout %s (side %.2f um)\n", layout.feasible ? "found" : "not found", layout.layout.side);
  return 0;
}
