#pragma once

// End-to-end QAOA runs: build the diagonal, optimise angles depth by depth,
// and report de-normalised expectations, ratios and sampled solutions.

#include <bit>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "evq/error.hpp"
#include "evq/graph.hpp"
#include "evq/optimizers.hpp"
#include "evq/qaoa_maxkcut.hpp"
#include "evq/qaoa_mis.hpp"
#include "evq/reduction.hpp"
#include "evq/statevector.hpp"

namespace evq {

enum class Strategy { egg, interp_nelder_mead, interp_de };

inline std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::egg: return "egg";
    case Strategy::interp_nelder_mead: return "interp-nm";
    case Strategy::interp_de: return "interp-de";
  }
  return "egg";
}

inline Strategy parse_strategy(std::string_view s) {
  if (s == "egg") return Strategy::egg;
  if (s == "interp-nm") return Strategy::interp_nelder_mead;
  if (s == "interp-de") return Strategy::interp_de;
  throw ConfigError("unknown optimizer strategy '" + std::string(s) + "'");
}

enum class MisAnsatz { penalty, blockade };

inline std::string_view to_string(MisAnsatz a) { return a == MisAnsatz::penalty ? "penalty" : "blockade"; }

inline MisAnsatz parse_mis_ansatz(std::string_view s) {
  if (s == "penalty") return MisAnsatz::penalty;
  if (s == "blockade") return MisAnsatz::blockade;
  throw ConfigError("unknown MIS ansatz '" + std::string(s) + "'");
}

/// The blockade drive has no period in beta, so its box reaches further.
inline Box default_blockade_layer_box() { return {{0.0, 0.0}, {2.0 * 3.14159265358979323846, 4.0 * 3.14159265358979323846}}; }

struct QaoaRunOptions {
  int p_max = 1;
  Strategy strategy = Strategy::egg;
  EggOptions egg;
  InterpOptions interp;
  Box layer_box = default_qaoa_layer_box();
  SimulatorLimits limits;
  std::size_t shots = 1000;
  /// Max-k-Cut only: rescale weights by 2 pi / (w_max N^2 / 4) before optimising.
  bool normalize = true;
  /// MIS only.
  MisAnsatz mis_ansatz = MisAnsatz::penalty;
  Box blockade_box = default_blockade_layer_box();
};

struct LayerRecord {
  int depth = 0;
  QaoaParams params;
  double expectation = 0.0;  // problem units (cut weight or expected independent-set size)
  std::optional<double> ratio;
  std::size_t evals = 0;
  std::size_t cumulative_evals = 0;
  std::string optimizer_note;
};

struct QaoaResult {
  QaoaParams params;
  double expectation = 0.0;
  std::optional<double> ratio;
  Assignment best_sampled;
  double best_sampled_value = 0.0;
  std::size_t evals = 0;
  double scale = 1.0;
  std::vector<LayerRecord> per_layer_trace;
};

namespace detail {

// Objective family over a fixed diagonal; extend() caches the prefix state.
inline LayeredObjective layered_over(std::shared_ptr<const DiagonalCost> cost, const QaoaRunOptions& opts) {
  LayeredObjective lo;
  lo.layer_box = opts.layer_box;
  const SimulatorLimits limits = opts.limits;
  lo.full = [cost, limits](const QaoaParams& p) { return expectation(prepare_state(*cost, p, limits), *cost); };
  lo.extend = [cost, limits](const QaoaParams& frozen) {
    auto prefix = std::make_shared<const StateVector>(prepare_state(*cost, frozen, limits));
    return std::function<double(double, double)>([cost, prefix](double g, double b) {
      StateVector s = *prefix;
      apply_phase(s, *cost, g);
      apply_mixer(s, b);
      return expectation(s, *cost);
    });
  };
  return lo;
}

inline std::vector<EggLayerReport> optimize_layers(const LayeredObjective& lo, const QaoaRunOptions& opts,
                                                   std::uint64_t seed) {
  switch (opts.strategy) {
    case Strategy::egg: return egg_optimize(lo, opts.p_max, opts.egg, seed);
    case Strategy::interp_nelder_mead: {
      InterpOptions io = opts.interp;
      io.local = InterpLocal::nelder_mead;
      return interp_optimize(lo, opts.p_max, io, seed);
    }
    case Strategy::interp_de: {
      InterpOptions io = opts.interp;
      io.local = InterpLocal::de;
      return interp_optimize(lo, opts.p_max, io, seed);
    }
  }
  throw DomainError("unknown strategy");
}

}  // namespace detail

/// Max-k-Cut QAOA. Expectations are reported as cut weight on the original
/// graph; ratio is filled when the optimum is supplied.
inline QaoaResult run_qaoa_maxkcut(const WeightedGraph& g, int k, const QaoaRunOptions& opts, std::uint64_t seed,
                                   std::optional<double> optimum = std::nullopt) {
  if (opts.p_max < 1) throw DomainError("p_max must be at least 1");
  double scale = 1.0;
  WeightedGraph work = g;
  if (opts.normalize) {
    auto nz = normalize(g);
    work = std::move(nz.graph);
    scale = nz.scale;
  }
  auto cost = std::make_shared<const DiagonalCost>(cost_diagonal(work, k, opts.limits));
  const auto lo = detail::layered_over(cost, opts);
  const auto layers = detail::optimize_layers(lo, opts, derive_seed(seed, {0x9a0a}));

  QaoaResult res;
  res.scale = scale;
  std::size_t cumulative = 0;
  for (const auto& l : layers) {
    cumulative += l.report.evals;
    LayerRecord rec;
    rec.depth = l.params.depth();
    rec.params = l.params;
    rec.expectation = -l.report.best_f / scale;
    if (optimum && *optimum > 0.0) rec.ratio = rec.expectation / *optimum;
    rec.evals = l.report.evals;
    rec.cumulative_evals = cumulative;
    rec.optimizer_note = l.report.reason;
    res.per_layer_trace.push_back(std::move(rec));
  }
  const auto& last = res.per_layer_trace.back();
  res.params = last.params;
  res.expectation = last.expectation;
  res.ratio = last.ratio;
  res.evals = cumulative;

  const StateVector state = prepare_state(*cost, res.params, opts.limits);
  double best = -1.0;
  for (std::uint64_t z : sample(state, opts.shots, derive_seed(seed, {0x5a4e}))) {
    auto labels = decode_coloring(z, g.size(), k);
    const double v = cut_value(g, labels);
    if (v > best) best = v, res.best_sampled = std::move(labels);
  }
  res.best_sampled_value = best;
  return res;
}

namespace detail {

inline QaoaResult collect_mis_layers(const std::vector<EggLayerReport>& layers,
                                     const std::function<double(const QaoaParams&)>& expected_size,
                                     std::optional<int> mis_size) {
  QaoaResult res;
  std::size_t cumulative = 0;
  for (const auto& l : layers) {
    cumulative += l.report.evals;
    LayerRecord rec;
    rec.depth = l.params.depth();
    rec.params = l.params;
    rec.expectation = expected_size(l.params);
    if (mis_size && *mis_size > 0) rec.ratio = rec.expectation / *mis_size;
    rec.evals = l.report.evals;
    rec.cumulative_evals = cumulative;
    rec.optimizer_note = l.report.reason;
    res.per_layer_trace.push_back(std::move(rec));
  }
  const auto& last = res.per_layer_trace.back();
  res.params = last.params;
  res.expectation = last.expectation;
  res.ratio = last.ratio;
  res.evals = cumulative;
  return res;
}

inline void sample_mis(QaoaResult& res, const Graph& g, const StateVector& state, std::size_t shots, std::uint64_t seed) {
  int best = -1;
  for (std::uint64_t z : sample(state, shots, seed)) {
    const std::uint64_t set = repair_independent_set(g, z);
    const int size = std::popcount(set);
    if (size > best) {
      best = size;
      res.best_sampled.assign(static_cast<std::size_t>(g.size()), 0);
      for (int u = 0; u < g.size(); ++u) res.best_sampled[u] = static_cast<int>((set >> u) & 1U);
    }
  }
  res.best_sampled_value = best;
}

}  // namespace detail

/// MIS QAOA. With the penalty ansatz the phase uses the penalty diagonal from
/// the uniform superposition, and expectation and ratio use the greedily
/// repaired independent-set size of each basis state. With the blockade
/// ansatz every reachable state is independent and the optimiser maximises
/// the expected set size directly.
inline QaoaResult run_qaoa_mis(const MisCostSpec& spec, const QaoaRunOptions& opts, std::uint64_t seed,
                               std::optional<int> mis_size = std::nullopt) {
  if (opts.p_max < 1) throw DomainError("p_max must be at least 1");
  spec.validate();
  if (opts.mis_ansatz == MisAnsatz::blockade) {
    auto sub = std::make_shared<const BlockadeSubspace>(blockade_subspace(spec.graph, opts.limits));
    LayeredObjective lo;
    lo.layer_box = opts.blockade_box;
    lo.full = [sub](const QaoaParams& p) { return -blockade_expected_size(*sub, blockade_evolve(*sub, p)); };
    const auto layers = detail::optimize_layers(lo, opts, derive_seed(seed, {0x9a0c}));
    QaoaResult res = detail::collect_mis_layers(
        layers, [&](const QaoaParams& p) { return blockade_expected_size(*sub, blockade_evolve(*sub, p)); }, mis_size);
    detail::sample_mis(res, spec.graph, blockade_to_state(*sub, blockade_evolve(*sub, res.params)), opts.shots,
                       derive_seed(seed, {0x5a50}));
    return res;
  }
  auto cost = std::make_shared<const DiagonalCost>(mis_cost_diagonal(spec, opts.limits));
  const auto repaired = repaired_size_diagonal(spec.graph, opts.limits);
  const auto lo = detail::layered_over(cost, opts);
  const auto layers = detail::optimize_layers(lo, opts, derive_seed(seed, {0x9a0b}));
  QaoaResult res = detail::collect_mis_layers(
      layers, [&](const QaoaParams& p) { return expectation(prepare_state(*cost, p, opts.limits), repaired); }, mis_size);
  detail::sample_mis(res, spec.graph, prepare_state(*cost, res.params, opts.limits), opts.shots, derive_seed(seed, {0x5a4f}));
  return res;
}

}  // namespace evq
