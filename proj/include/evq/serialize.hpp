#pragma once

// JSON and text formats for graphs, instances, layouts and results.
// Field order is fixed so that identical inputs give byte-identical files.

#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "evq/embedding.hpp"
#include "evq/error.hpp"
#include "evq/graph.hpp"
#include "evq/instances.hpp"
#include "evq/lp_model.hpp"
#include "evq/optimizers.hpp"
#include "evq/parity.hpp"
#include "evq/qaoa_driver.hpp"
#include "evq/qaoa_mis.hpp"

namespace evq {

using Json = nlohmann::ordered_json;

// ---- graphs ---------------------------------------------------------------

/// Dense lower triangle: weights[u] lists w(u, 0..u-1).
inline Json graph_to_json(const WeightedGraph& g) {
  Json rows = Json::array();
  for (int u = 0; u < g.size(); ++u) {
    Json row = Json::array();
    for (int v = 0; v < u; ++v) row.push_back(g.weight(u, v));
    rows.push_back(std::move(row));
  }
  return Json{{"nodes", g.size()}, {"origin", std::string(to_string(g.origin()))}, {"weights", std::move(rows)}};
}

inline WeightedGraph graph_from_json(const Json& j) {
  try {
    const int n = j.at("nodes").get<int>();
    WeightedGraph g(n, parse_origin(j.at("origin").get<std::string>()));
    const auto& rows = j.at("weights");
    if (!rows.is_array() || static_cast<int>(rows.size()) != n) throw ParseError("weights must have one row per node");
    for (int u = 0; u < n; ++u) {
      if (static_cast<int>(rows[u].size()) != u) throw ParseError("row " + std::to_string(u) + " must have " + std::to_string(u) + " entries");
      for (int v = 0; v < u; ++v) g.set_weight(u, v, rows[u][v].get<double>());
    }
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed graph JSON: ") + e.what());
  }
}

inline Json graph_to_json(const Graph& g) {
  Json edges = Json::array();
  for (auto [u, v] : g.edges()) edges.push_back(Json::array({u, v}));
  return Json{{"nodes", g.size()}, {"edges", std::move(edges)}};
}

inline Graph unweighted_graph_from_json(const Json& j) {
  try {
    Graph g(j.at("nodes").get<int>());
    for (const auto& e : j.at("edges")) g.add_edge(e.at(0).get<int>(), e.at(1).get<int>());
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed graph JSON: ") + e.what());
  }
}

/// Edge-list text: first line "n", then one "u v w" line per edge.
inline void write_edge_list(std::ostream& out, const WeightedGraph& g) {
  std::ostringstream os;
  os.precision(17);
  os << g.size() << '\n';
  for (int u = 0; u < g.size(); ++u)
    for (int v = u + 1; v < g.size(); ++v)
      if (g.weight(u, v) != 0.0) os << u << ' ' << v << ' ' << g.weight(u, v) << '\n';
  out << os.str();
}

inline WeightedGraph read_edge_list(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  int n = -1;
  WeightedGraph g;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream is(line);
    if (n < 0) {
      if (!(is >> n) || n < 0) throw ParseError("expected node count", line_no);
      g = WeightedGraph(n);
      continue;
    }
    int u = 0, v = 0;
    double w = 0.0;
    if (!(is >> u >> v >> w)) throw ParseError("expected 'u v w'", line_no);
    std::string rest;
    if (is >> rest) throw ParseError("trailing data", line_no);
    if (u < 0 || v < 0 || u >= n || v >= n) throw ParseError("node index out of range", line_no);
    try {
      g.set_weight(u, v, w);
    } catch (const DomainError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  if (n < 0) throw ParseError("empty edge list");
  return g;
}

// ---- instances ------------------------------------------------------------

inline Json to_json(const SC1Instance& inst) {
  Json jobs = Json::array();
  for (const auto& j : inst.jobs) jobs.push_back(Json{{"duration", j.duration}, {"weight", j.weight}});
  return Json{{"family", "sc1"}, {"k", inst.k}, {"seed", inst.seed}, {"jobs", std::move(jobs)}};
}

inline SC1Instance sc1_from_json(const Json& j) {
  try {
    SC1Instance inst;
    inst.k = j.at("k").get<int>();
    inst.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& x : j.at("jobs")) inst.jobs.push_back({x.at("duration").get<std::int64_t>(), x.at("weight").get<std::int64_t>()});
    return inst;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed SC1 instance: ") + e.what());
  }
}

inline Json to_json(const SC2Instance& inst) {
  Json iv = Json::array();
  for (const auto& i : inst.intervals) iv.push_back(Json{{"start", i.start}, {"end", i.end}, {"group", i.group}});
  return Json{{"family", "sc2"},
              {"groups", inst.n_groups},
              {"group_size", inst.group_size},
              {"seed", inst.seed},
              {"intervals", std::move(iv)}};
}

inline SC2Instance sc2_from_json(const Json& j) {
  try {
    SC2Instance inst;
    inst.n_groups = j.at("groups").get<int>();
    inst.group_size = j.at("group_size").get<int>();
    inst.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& x : j.at("intervals"))
      inst.intervals.push_back({x.at("start").get<std::int64_t>(), x.at("end").get<std::int64_t>(), x.at("group").get<int>()});
    return inst;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed SC2 instance: ") + e.what());
  }
}

// ---- layouts and physics --------------------------------------------------

inline Json to_json(const Layout& l) {
  Json pos = Json::array();
  for (const auto& p : l.positions) pos.push_back(Json::array({p[0], p[1]}));
  return Json{{"r", l.spec.r},   {"rho", l.spec.rho},  {"l_bar", l.spec.l_bar},
              {"side", l.side},  {"positions", pos},    {"graph", graph_to_json(l.spec.graph)}};
}

inline Layout layout_from_json(const Json& j) {
  try {
    Layout l;
    l.spec.r = j.at("r").get<double>();
    l.spec.rho = j.at("rho").get<double>();
    l.spec.l_bar = j.at("l_bar").get<double>();
    l.side = j.at("side").get<double>();
    l.spec.graph = unweighted_graph_from_json(j.at("graph"));
    for (const auto& p : j.at("positions")) l.positions.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    return l;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed layout: ") + e.what());
  }
}

inline Json to_json(const EmbedResult& r) {
  Json census = Json::object();
  for (const auto& [k, v] : r.violation_census) census[k] = v;
  Json j{{"feasible", r.feasible}, {"restarts_run", r.restarts_run}, {"feasible_restart", r.feasible_restart},
         {"best_penalty", r.best_penalty}, {"violation_census", census}};
  j["layout"] = to_json(r.layout);
  return j;
}

inline Json to_json(const RydbergParams& p) {
  Json pos = Json::array();
  for (const auto& x : p.positions) pos.push_back(Json::array({x[0], x[1]}));
  return Json{{"omega", p.omega}, {"delta", p.delta}, {"c6", p.c6}, {"positions", pos}};
}

inline RydbergParams rydberg_from_json(const Json& j) {
  try {
    RydbergParams p;
    p.omega = j.at("omega").get<double>();
    p.delta = j.at("delta").get<double>();
    p.c6 = j.at("c6").get<double>();
    for (const auto& x : j.at("positions")) p.positions.push_back({x.at(0).get<double>(), x.at(1).get<double>()});
    p.validate();
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed Rydberg parameters: ") + e.what());
  }
}

inline Json to_json(const ParityLayout& l) {
  Json qubits = Json::array();
  for (const auto& q : l.physical_qubits)
    qubits.push_back(Json{{"layer", q.layer}, {"pair", Json::array({q.i, q.j})}, {"x", q.x}, {"y", q.y}});
  Json pairs = Json::array();
  for (auto [a, b] : l.interlayer_pairs) pairs.push_back(Json::array({a, b}));
  return Json{{"logical_nodes", l.logical_nodes}, {"qubits", qubits}, {"constraints", l.constraints}, {"interlayer_pairs", pairs}};
}

inline Json to_json(const ParityResources& r) {
  return Json{{"logical_nodes", r.logical_nodes},       {"qubits_per_layer", r.qubits_per_layer},
              {"qubits_total", r.qubits_total},         {"cnot_count", r.cnot_count},
              {"constraint_count", r.constraint_count}, {"depth_class", r.depth_class},
              {"notes", r.notes}};
}

inline Json to_json(const LpStats& s) {
  return Json{{"bits", s.bits},
              {"expansion_binaries", s.expansion_binaries},
              {"product_binaries", s.product_binaries},
              {"self_product_binaries", s.self_product_binaries},
              {"selector_binaries", s.selector_binaries},
              {"binaries", s.binaries},
              {"generals", s.generals},
              {"continuous", s.continuous},
              {"constraints", s.constraints},
              {"linearization_constraints", s.linearization_constraints},
              {"disjuncts", s.disjuncts},
              {"box_inequalities", s.box_inequalities}};
}

// ---- results --------------------------------------------------------------

inline Json to_json(const QaoaParams& p) { return Json{{"gammas", p.gammas}, {"betas", p.betas}}; }

inline Json to_json(const QaoaResult& r) {
  Json trace = Json::array();
  for (const auto& l : r.per_layer_trace) {
    Json e{{"depth", l.depth}, {"params", to_json(l.params)}, {"expectation", l.expectation}};
    e["ratio"] = l.ratio ? Json(*l.ratio) : Json(nullptr);
    e["evals"] = l.evals;
    e["cumulative_evals"] = l.cumulative_evals;
    e["optimizer"] = l.optimizer_note;
    trace.push_back(std::move(e));
  }
  Json j{{"params", to_json(r.params)}, {"expectation", r.expectation}};
  j["ratio"] = r.ratio ? Json(*r.ratio) : Json(nullptr);
  j["best_sampled"] = Json{{"assignment", r.best_sampled}, {"value", r.best_sampled_value}};
  j["evals"] = r.evals;
  j["scale"] = r.scale;
  j["per_layer_trace"] = std::move(trace);
  return j;
}

inline Json to_json(const OptimizerReport& r, bool with_trajectory = false) {
  Json j{{"best_x", r.best_x}, {"best_f", r.best_f}, {"evals", r.evals}, {"converged", r.converged}, {"reason", r.reason}};
  if (with_trajectory) {
    Json t = Json::array();
    for (const auto& p : r.trajectory) t.push_back(Json::array({p.evals, p.best_f}));
    j["trajectory"] = std::move(t);
  }
  return j;
}

/// CSV of a landscape: header "beta\\gamma,<gamma columns>", one row per beta.
inline void write_landscape_csv(std::ostream& out, const Landscape& l) {
  std::ostringstream os;
  os.precision(17);
  os << "beta\\gamma";
  for (int c = 0; c < l.resolution; ++c) os << ',' << l.coord(0, c);
  os << '\n';
  for (int r = 0; r < l.resolution; ++r) {
    os << l.coord(1, r);
    for (int c = 0; c < l.resolution; ++c) os << ',' << l.at(r, c);
    os << '\n';
  }
  out << os.str();
}

}  // namespace evq
