#pragma once

// Unit-disk layouts for interval graphs: verification and a simulated
// annealing search over continuous positions.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "evq/error.hpp"
#include "evq/graph.hpp"
#include "evq/qaoa_mis.hpp"
#include "evq/rng.hpp"

namespace evq {

struct EmbedSpec {
  Graph graph;
  double r = 15.0;
  double rho = 5.0;
  double l_bar = 100.0;

  void validate() const {
    if (!(rho > 0.0 && rho < r && r <= l_bar)) throw DomainError("embedding needs 0 < rho < r <= l_bar");
  }
};

/// Separation slack for non-edges on squared distances (um^2), shared with the LP export.
inline constexpr double kNonEdgeEpsilon = 1e-6;
/// Boundary tolerance for closed constraints.
inline constexpr double kBoundaryTolerance = 1e-9;

struct Layout {
  std::vector<Point> positions;
  EmbedSpec spec;
  double side = 0.0;
};

enum class ViolationKind { edge_too_far, edge_too_close, nonedge_too_close, pair_too_close, out_of_square, side_too_large };

inline std::string_view to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::edge_too_far: return "edge_too_far";
    case ViolationKind::edge_too_close: return "edge_too_close";
    case ViolationKind::nonedge_too_close: return "nonedge_too_close";
    case ViolationKind::pair_too_close: return "pair_too_close";
    case ViolationKind::out_of_square: return "out_of_square";
    case ViolationKind::side_too_large: return "side_too_large";
  }
  return "unknown";
}

struct Violation {
  ViolationKind kind = ViolationKind::edge_too_far;
  int i = -1;
  int j = -1;
  double value = 0.0;  // distance for pair violations, coordinate or side otherwise
};

struct VerifyResult {
  bool feasible = true;
  std::vector<Violation> violations;
};

inline VerifyResult verify_layout(const Layout& layout) {
  const auto& spec = layout.spec;
  const int n = spec.graph.size();
  if (static_cast<int>(layout.positions.size()) != n) throw DomainError("position count does not match node count");
  VerifyResult res;
  auto add = [&](ViolationKind k, int i, int j, double v) {
    res.feasible = false;
    res.violations.push_back({k, i, j, v});
  };
  if (layout.side > spec.l_bar + kBoundaryTolerance) add(ViolationKind::side_too_large, -1, -1, layout.side);
  for (int i = 0; i < n; ++i) {
    for (double c : layout.positions[i])
      if (c < -kBoundaryTolerance || c > layout.side + kBoundaryTolerance) add(ViolationKind::out_of_square, i, -1, c);
  }
  const double r2 = spec.r * spec.r;
  const double rho2 = spec.rho * spec.rho;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double d2 = squared_distance(layout.positions[i], layout.positions[j]);
      const double d = std::sqrt(d2);
      if (d2 < rho2 - kBoundaryTolerance)
        add(spec.graph.has_edge(i, j) ? ViolationKind::edge_too_close : ViolationKind::pair_too_close, i, j, d);
      if (spec.graph.has_edge(i, j)) {
        if (d2 > r2 + kBoundaryTolerance) add(ViolationKind::edge_too_far, i, j, d);
      } else if (d2 < r2 + kNonEdgeEpsilon) {
        add(ViolationKind::nonedge_too_close, i, j, d);
      }
    }
  }
  return res;
}

namespace detail {

struct PenaltyTargets {
  double edge_max2;     // edges: d^2 <= edge_max2
  double pair_min2;     // all pairs: d^2 >= pair_min2
  double nonedge_min2;  // non-edges: d^2 >= nonedge_min2
};

inline double sq(double v) { return v * v; }

inline double pair_penalty(const PenaltyTargets& t, bool edge, double d2) {
  double p = sq(std::max(0.0, t.pair_min2 - d2));
  if (edge) p += sq(std::max(0.0, d2 - t.edge_max2));
  else p += sq(std::max(0.0, t.nonedge_min2 - d2));
  return p;
}

inline double total_penalty(const Graph& g, const std::vector<Point>& pos, const PenaltyTargets& t) {
  double p = 0.0;
  for (int i = 0; i < g.size(); ++i)
    for (int j = i + 1; j < g.size(); ++j) p += pair_penalty(t, g.has_edge(i, j), squared_distance(pos[i], pos[j]));
  return p;
}

inline PenaltyTargets exact_targets(const EmbedSpec& s) {
  return {s.r * s.r + kBoundaryTolerance, s.rho * s.rho - kBoundaryTolerance, s.r * s.r + kNonEdgeEpsilon};
}

}  // namespace detail

/// Squared hinges on squared distances against the verifier's thresholds;
/// zero exactly when every pair constraint passes.
inline double constraint_penalty(const Layout& layout) {
  return detail::total_penalty(layout.spec.graph, layout.positions, detail::exact_targets(layout.spec));
}

/// Shifts positions so the minimum coordinate on each axis is zero and sets side.
inline Layout normalize_layout(std::vector<Point> pos, const EmbedSpec& spec) {
  double mx = 0.0, my = 0.0;
  if (!pos.empty()) {
    mx = pos[0][0], my = pos[0][1];
    for (const auto& p : pos) mx = std::min(mx, p[0]), my = std::min(my, p[1]);
  }
  double side = 0.0;
  for (auto& p : pos) {
    p[0] -= mx;
    p[1] -= my;
    side = std::max({side, p[0], p[1]});
  }
  return {std::move(pos), spec, side};
}

struct AnnealOptions {
  int restarts = 8;
  int iterations = 20000;
  double t_start = 1e3;
  double t_end = 1e-4;
  /// Safety margin on the targets, as a fraction of r.
  double margin = 0.01;
  /// Weight of the bounding-square term.
  double lambda = 1e-4;
  int max_nodes = 30;
  unsigned workers = 1;
};

struct EmbedResult {
  bool feasible = false;
  Layout layout;  // the verified layout when feasible, the best attempt otherwise
  double best_penalty = 0.0;
  std::map<std::string, int> violation_census;
  int restarts_run = 0;
  int feasible_restart = -1;
};

namespace detail {

struct AnnealOutcome {
  std::vector<Point> positions;
  double penalty = 0.0;
};

inline double extent(const std::vector<Point>& pos) {
  if (pos.empty()) return 0.0;
  double lx = pos[0][0], hx = lx, ly = pos[0][1], hy = ly;
  for (const auto& p : pos) {
    lx = std::min(lx, p[0]), hx = std::max(hx, p[0]);
    ly = std::min(ly, p[1]), hy = std::max(hy, p[1]);
  }
  return std::max(hx - lx, hy - ly);
}

inline AnnealOutcome anneal_once(const EmbedSpec& spec, const AnnealOptions& opt, std::uint64_t seed) {
  const Graph& g = spec.graph;
  const int n = g.size();
  Rng rng(seed);
  const double m = opt.margin * spec.r;
  const PenaltyTargets t{sq(spec.r - m), sq(spec.rho + m), sq(spec.r + m)};
  const double init_side = std::min(spec.l_bar, spec.r * (1.0 + std::sqrt(static_cast<double>(n))));
  std::vector<Point> pos(static_cast<std::size_t>(n));
  for (auto& p : pos) p = {uniform(rng, 0.0, init_side), uniform(rng, 0.0, init_side)};

  auto node_penalty = [&](int i, const Point& at) {
    double p = 0.0;
    for (int j = 0; j < n; ++j)
      if (j != i) p += pair_penalty(t, g.has_edge(i, j), squared_distance(at, pos[j]));
    return p;
  };

  double pen = total_penalty(g, pos, t);
  double energy = pen + opt.lambda * extent(pos);
  AnnealOutcome best{pos, pen};
  if (n < 2) return best;
  const double cool = std::pow(opt.t_end / opt.t_start, 1.0 / std::max(1, opt.iterations - 1));
  double temp = opt.t_start;
  for (int it = 0; it < opt.iterations && pen > 0.0; ++it, temp *= cool) {
    const int i = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(n)));
    const double frac = static_cast<double>(it) / static_cast<double>(opt.iterations);
    const double sigma = spec.r * std::pow(0.02, frac);
    // Box-Muller pair for an isotropic Gaussian step.
    const double u1 = 1.0 - uniform01(rng);
    const double u2 = uniform01(rng);
    const double rad = sigma * std::sqrt(-2.0 * std::log(u1));
    Point cand{std::clamp(pos[i][0] + rad * std::cos(2.0 * 3.14159265358979323846 * u2), 0.0, spec.l_bar),
               std::clamp(pos[i][1] + rad * std::sin(2.0 * 3.14159265358979323846 * u2), 0.0, spec.l_bar)};
    const double before = node_penalty(i, pos[i]);
    const double after = node_penalty(i, cand);
    const Point old = pos[i];
    pos[i] = cand;
    const double new_pen = pen - before + after;
    const double new_energy = new_pen + opt.lambda * extent(pos);
    const double delta = new_energy - energy;
    if (delta <= 0.0 || uniform01(rng) < std::exp(-delta / temp)) {
      pen = new_pen;
      energy = new_energy;
      if (pen < best.penalty) {
        // Re-sum to avoid drift from incremental updates.
        pen = total_penalty(g, pos, t);
        energy = pen + opt.lambda * extent(pos);
        if (pen < best.penalty) best = {pos, pen};
      }
    } else {
      pos[i] = old;
    }
  }
  return best;
}

}  // namespace detail

/// Restarts are seeded by (seed, restart index) and the lowest feasible index
/// wins, so the result does not depend on the worker count.
inline EmbedResult solve_layout(const EmbedSpec& spec, std::uint64_t seed, const AnnealOptions& opt = {}) {
  spec.validate();
  if (spec.graph.size() > opt.max_nodes)
    throw CapError("embedding supports at most " + std::to_string(opt.max_nodes) + " nodes");
  if (opt.restarts < 1 || opt.iterations < 1) throw DomainError("annealing needs at least one restart and iteration");
  EmbedResult res;
  double best_exact = std::numeric_limits<double>::infinity();
  const unsigned w = std::max(1U, opt.workers);
  for (int base = 0; base < opt.restarts; base += static_cast<int>(w)) {
    const int batch = std::min<int>(static_cast<int>(w), opt.restarts - base);
    std::vector<detail::AnnealOutcome> out(static_cast<std::size_t>(batch));
    std::vector<std::exception_ptr> errs(static_cast<std::size_t>(batch));
    auto job = [&](int b) {
      try {
        out[b] = detail::anneal_once(spec, opt, derive_seed(seed, {0xe3bed, static_cast<std::uint64_t>(base + b)}));
      } catch (...) {
        errs[b] = std::current_exception();
      }
    };
    if (batch == 1) {
      job(0);
    } else {
      std::vector<std::thread> pool;
      for (int b = 0; b < batch; ++b) pool.emplace_back(job, b);
      for (auto& th : pool) th.join();
    }
    for (auto& e : errs)
      if (e) std::rethrow_exception(e);
    for (int b = 0; b < batch; ++b) {
      ++res.restarts_run;
      Layout lay = normalize_layout(out[b].positions, spec);
      const double exact = constraint_penalty(lay);
      if (verify_layout(lay).feasible) {
        res.feasible = true;
        res.layout = std::move(lay);
        res.best_penalty = 0.0;
        res.feasible_restart = base + b;
        res.violation_census.clear();
        return res;
      }
      if (exact < best_exact) {
        best_exact = exact;
        res.layout = std::move(lay);
      }
    }
  }
  res.best_penalty = best_exact;
  for (const auto& v : verify_layout(res.layout).violations) ++res.violation_census[std::string(to_string(v.kind))];
  return res;
}

}  // namespace evq
