#pragma once

// Experiment configuration, instance generation and the batch pipelines
// behind the command-line tool. Every pipeline is fail-soft per instance.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "evq/classical.hpp"
#include "evq/embedding.hpp"
#include "evq/error.hpp"
#include "evq/instances.hpp"
#include "evq/lp_model.hpp"
#include "evq/optimizers.hpp"
#include "evq/parity.hpp"
#include "evq/qaoa_driver.hpp"
#include "evq/reduction.hpp"
#include "evq/serialize.hpp"

namespace evq {

inline constexpr const char* kVersion = "0.1.0";

enum class Problem { sc1, sc2, synthetic };

struct OptimizerConfig {
  Strategy strategy = Strategy::egg;
  PolishMethod polish = PolishMethod::bfgs;
  std::size_t de_population = 20;
  std::size_t de_max_gens = 40;
  double de_tol = 1e-4;
  std::size_t polish_max_evals = 1500;
  bool normalize = true;
};

struct EmbedConfig {
  double r = 15.0;
  double rho = 5.0;
  double l_bar = 100.0;
  int restarts = 8;
  int iterations = 20000;
};

struct ModelConfig {
  LpVariant variant = LpVariant::udrlt;
  int phi_count = 8;
};

struct ExperimentConfig {
  Problem problem = Problem::sc1;
  std::vector<int> sizes;
  int k = 2;
  int n_groups = 0;
  int group_size = 0;
  int p_max = 1;
  std::vector<std::uint64_t> seeds{1};
  std::size_t shots = 1000;
  std::string records;  // CSV path; empty selects synthetic records
  std::size_t record_count = 2250;
  std::uint64_t records_seed = 0;
  double priority_lambda = 2.0;
  int synthetic_max_weight = 5;
  std::size_t baseline_trials = 1000;
  int landscape_resolution = 30;
  std::vector<double> landscape_scales{1.0};
  std::optional<double> mis_penalty;
  MisAnsatz mis_ansatz = MisAnsatz::blockade;
  OptimizerConfig optimizer;
  EmbedConfig embedding;
  ModelConfig model;
  std::string output = "out";
};

namespace detail {

inline void reject_unknown(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

template <class T>
T get_as(const Json& j, const char* key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("key '" + std::string(key) + "' in " + where + " has the wrong type");
  }
}

template <class T>
void read_opt(const Json& j, const char* key, T& out, const std::string& where) {
  if (j.contains(key)) out = get_as<T>(j, key, where);
}

}  // namespace detail

inline std::string to_string(Problem p) {
  switch (p) {
    case Problem::sc1: return "sc1";
    case Problem::sc2: return "sc2";
    case Problem::synthetic: return "synthetic-graph";
  }
  return "sc1";
}

/// Strict parse: unknown keys, wrong types and out-of-range values are errors.
inline ExperimentConfig parse_config(const Json& j) {
  using detail::read_opt;
  detail::reject_unknown(j,
                         {"problem", "sizes", "k", "groups", "p_max", "seeds", "shots", "records", "record_count",
                          "records_seed", "priority_lambda", "synthetic_max_weight", "baseline_trials", "landscape",
                          "mis_penalty", "mis_ansatz", "optimizer", "embedding", "model", "output"},
                         "config");
  ExperimentConfig c;
  if (!j.contains("problem")) throw ConfigError("config needs 'problem'");
  const auto problem = detail::get_as<std::string>(j, "problem", "config");
  if (problem == "sc1") c.problem = Problem::sc1;
  else if (problem == "sc2") c.problem = Problem::sc2;
  else if (problem == "synthetic-graph") c.problem = Problem::synthetic;
  else throw ConfigError("problem must be sc1, sc2 or synthetic-graph");

  read_opt(j, "sizes", c.sizes, "config");
  read_opt(j, "k", c.k, "config");
  read_opt(j, "p_max", c.p_max, "config");
  read_opt(j, "shots", c.shots, "config");
  read_opt(j, "records", c.records, "config");
  read_opt(j, "record_count", c.record_count, "config");
  read_opt(j, "records_seed", c.records_seed, "config");
  read_opt(j, "priority_lambda", c.priority_lambda, "config");
  read_opt(j, "synthetic_max_weight", c.synthetic_max_weight, "config");
  read_opt(j, "baseline_trials", c.baseline_trials, "config");
  read_opt(j, "output", c.output, "config");
  if (j.contains("groups")) {
    const auto g = detail::get_as<std::vector<int>>(j, "groups", "config");
    if (g.size() != 2) throw ConfigError("groups must be [n_groups, group_size]");
    c.n_groups = g[0];
    c.group_size = g[1];
  }
  if (j.contains("seeds")) {
    const auto& s = j.at("seeds");
    if (s.is_array()) {
      c.seeds = detail::get_as<std::vector<std::uint64_t>>(j, "seeds", "config");
    } else {
      detail::reject_unknown(s, {"first", "count"}, "seeds");
      const auto first = detail::get_as<std::uint64_t>(s, "first", "seeds");
      const auto count = detail::get_as<std::uint64_t>(s, "count", "seeds");
      c.seeds.clear();
      for (std::uint64_t i = 0; i < count; ++i) c.seeds.push_back(first + i);
    }
  }
  if (j.contains("mis_penalty") && !j.at("mis_penalty").is_null()) c.mis_penalty = detail::get_as<double>(j, "mis_penalty", "config");
  if (j.contains("mis_ansatz")) c.mis_ansatz = parse_mis_ansatz(detail::get_as<std::string>(j, "mis_ansatz", "config"));
  if (j.contains("landscape")) {
    const auto& l = j.at("landscape");
    detail::reject_unknown(l, {"resolution", "scales"}, "landscape");
    read_opt(l, "resolution", c.landscape_resolution, "landscape");
    read_opt(l, "scales", c.landscape_scales, "landscape");
  }
  if (j.contains("optimizer")) {
    const auto& o = j.at("optimizer");
    detail::reject_unknown(o, {"strategy", "polish", "de_population", "de_max_gens", "de_tol", "polish_max_evals", "normalize"},
                           "optimizer");
    if (o.contains("strategy")) {
      try {
        c.optimizer.strategy = parse_strategy(detail::get_as<std::string>(o, "strategy", "optimizer"));
      } catch (const ConfigError&) {
        throw;
      }
    }
    if (o.contains("polish")) {
      const auto p = detail::get_as<std::string>(o, "polish", "optimizer");
      if (p == "bfgs") c.optimizer.polish = PolishMethod::bfgs;
      else if (p == "nelder-mead") c.optimizer.polish = PolishMethod::nelder_mead;
      else if (p == "none") c.optimizer.polish = PolishMethod::none;
      else throw ConfigError("polish must be bfgs, nelder-mead or none");
    }
    read_opt(o, "de_population", c.optimizer.de_population, "optimizer");
    read_opt(o, "de_max_gens", c.optimizer.de_max_gens, "optimizer");
    read_opt(o, "de_tol", c.optimizer.de_tol, "optimizer");
    read_opt(o, "polish_max_evals", c.optimizer.polish_max_evals, "optimizer");
    read_opt(o, "normalize", c.optimizer.normalize, "optimizer");
  }
  if (j.contains("embedding")) {
    const auto& e = j.at("embedding");
    detail::reject_unknown(e, {"r", "rho", "l_bar", "restarts", "iterations"}, "embedding");
    read_opt(e, "r", c.embedding.r, "embedding");
    read_opt(e, "rho", c.embedding.rho, "embedding");
    read_opt(e, "l_bar", c.embedding.l_bar, "embedding");
    read_opt(e, "restarts", c.embedding.restarts, "embedding");
    read_opt(e, "iterations", c.embedding.iterations, "embedding");
  }
  if (j.contains("model")) {
    const auto& m = j.at("model");
    detail::reject_unknown(m, {"variant", "phi_count"}, "model");
    if (m.contains("variant")) c.model.variant = parse_lp_variant(detail::get_as<std::string>(m, "variant", "model"));
    read_opt(m, "phi_count", c.model.phi_count, "model");
  }

  if (c.problem == Problem::sc2) {
    if (c.n_groups < 1 || c.group_size < 1) throw ConfigError("sc2 needs groups = [n_groups >= 1, group_size >= 1]");
  } else {
    if (c.sizes.empty()) throw ConfigError("sizes must list at least one node count");
    for (int n : c.sizes)
      if (n < 2) throw ConfigError("sizes must be at least 2");
    if (c.k < 2) throw ConfigError("k must be at least 2");
  }
  if (c.p_max < 1) throw ConfigError("p_max must be at least 1");
  if (c.seeds.empty()) throw ConfigError("seeds must not be empty");
  if (c.shots < 1) throw ConfigError("shots must be at least 1");
  if (c.baseline_trials < 1) throw ConfigError("baseline_trials must be at least 1");
  if (c.landscape_resolution < 2) throw ConfigError("landscape resolution must be at least 2");
  if (!(c.priority_lambda > 0.0)) throw ConfigError("priority_lambda must be positive");
  if (c.synthetic_max_weight < 1) throw ConfigError("synthetic_max_weight must be at least 1");
  if (c.optimizer.de_population < 4) throw ConfigError("de_population must be at least 4");
  if (c.model.phi_count < 4) throw ConfigError("phi_count must be at least 4");
  if (c.mis_penalty && !(*c.mis_penalty > 1.0)) throw ConfigError("mis_penalty must exceed 1");
  try {
    EmbedSpec{Graph(0), c.embedding.r, c.embedding.rho, c.embedding.l_bar}.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

inline Json config_to_json(const ExperimentConfig& c) {
  Json j{{"problem", to_string(c.problem)}, {"sizes", c.sizes}, {"k", c.k}};
  j["groups"] = Json::array({c.n_groups, c.group_size});
  j["p_max"] = c.p_max;
  j["seeds"] = c.seeds;
  j["shots"] = c.shots;
  j["records"] = c.records;
  j["record_count"] = c.record_count;
  j["records_seed"] = c.records_seed;
  j["priority_lambda"] = c.priority_lambda;
  j["synthetic_max_weight"] = c.synthetic_max_weight;
  j["baseline_trials"] = c.baseline_trials;
  j["landscape"] = Json{{"resolution", c.landscape_resolution}, {"scales", c.landscape_scales}};
  j["mis_penalty"] = c.mis_penalty ? Json(*c.mis_penalty) : Json(nullptr);
  j["mis_ansatz"] = to_string(c.mis_ansatz);
  const char* polish = c.optimizer.polish == PolishMethod::bfgs ? "bfgs"
                       : c.optimizer.polish == PolishMethod::nelder_mead ? "nelder-mead" : "none";
  j["optimizer"] = Json{{"strategy", to_string(c.optimizer.strategy)},
                        {"polish", polish},
                        {"de_population", c.optimizer.de_population},
                        {"de_max_gens", c.optimizer.de_max_gens},
                        {"de_tol", c.optimizer.de_tol},
                        {"polish_max_evals", c.optimizer.polish_max_evals},
                        {"normalize", c.optimizer.normalize}};
  j["embedding"] = Json{{"r", c.embedding.r}, {"rho", c.embedding.rho}, {"l_bar", c.embedding.l_bar},
                        {"restarts", c.embedding.restarts}, {"iterations", c.embedding.iterations}};
  j["model"] = Json{{"variant", to_string(c.model.variant)}, {"phi_count", c.model.phi_count}};
  j["output"] = c.output;
  return j;
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

inline QaoaRunOptions run_options(const ExperimentConfig& c) {
  QaoaRunOptions o;
  o.p_max = c.p_max;
  o.strategy = c.optimizer.strategy;
  o.egg.de.population = c.optimizer.de_population;
  o.egg.de.max_gens = c.optimizer.de_max_gens;
  o.egg.de.tol = c.optimizer.de_tol;
  o.egg.polish = c.optimizer.polish;
  o.egg.bfgs.max_evals = c.optimizer.polish_max_evals;
  o.egg.nelder_mead.max_evals = c.optimizer.polish_max_evals;
  o.shots = c.shots;
  o.normalize = c.optimizer.normalize;
  o.mis_ansatz = c.mis_ansatz;
  return o;
}

// ---- instances --------------------------------------------------------------

struct InstanceKey {
  std::string id;
  int size = 0;
  std::uint64_t seed = 0;
};

struct InstanceData {
  InstanceKey key;
  std::optional<SC1Instance> sc1;
  std::optional<SC2Instance> sc2;
  WeightedGraph weighted;  // Max-k-Cut problems
  Graph conflict;          // sc2
};

inline std::vector<InstanceKey> instance_keys(const ExperimentConfig& c) {
  std::vector<InstanceKey> keys;
  if (c.problem == Problem::sc2) {
    const int n = c.n_groups * c.group_size;
    for (auto s : c.seeds)
      keys.push_back({"sc2_g" + std::to_string(c.n_groups) + "x" + std::to_string(c.group_size) + "_s" + std::to_string(s), n, s});
  } else {
    for (int n : c.sizes)
      for (auto s : c.seeds) keys.push_back({std::string(c.problem == Problem::sc1 ? "sc1" : "syn") + "_n" + std::to_string(n) + "_s" + std::to_string(s), n, s});
  }
  return keys;
}

inline std::vector<LoadRecord> experiment_records(const ExperimentConfig& c) {
  if (!c.records.empty()) return load_records(c.records);
  return synthetic_records(c.record_count, c.records_seed);
}

/// Complete graph with integer weights uniform in [1, max_weight].
inline WeightedGraph synthetic_graph(int n, int max_weight, std::uint64_t seed) {
  Rng rng = make_rng(seed, {0x5e7});
  WeightedGraph g(n, GraphOrigin::synthetic);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      g.set_weight(u, v, 1.0 + static_cast<double>(uniform_index(rng, static_cast<std::uint64_t>(max_weight))));
  return g;
}

inline InstanceData make_instance(const ExperimentConfig& c, const InstanceKey& key, std::span<const LoadRecord> records) {
  InstanceData d;
  d.key = key;
  switch (c.problem) {
    case Problem::sc1:
      d.sc1 = gen_sc1(records, static_cast<std::size_t>(key.size), c.k, key.seed, c.priority_lambda);
      d.weighted = sc1_to_graph(*d.sc1);
      break;
    case Problem::sc2:
      d.sc2 = gen_sc2(records, c.n_groups, c.group_size, key.seed);
      d.conflict = sc2_to_graph(*d.sc2);
      break;
    case Problem::synthetic:
      d.weighted = synthetic_graph(key.size, c.synthetic_max_weight, key.seed);
      break;
  }
  return d;
}

/// Exact Max-k-Cut optimum: enumeration when within the cap, otherwise the
/// scheduling dynamic programme through cut = sum w t + W - cost (SC1 only).
inline double maxkcut_optimum(const InstanceData& d, int k) {
  const EnumerationLimits lim;
  try {
    check_enumeration(d.weighted.size(), k, lim);
    return brute_maxkcut(d.weighted, k, lim).value;
  } catch (const CapError&) {
    if (!d.sc1) throw;
  }
  std::int64_t swt = 0;
  for (const auto& j : d.sc1->jobs) swt += j.weight * j.duration;
  const auto w = sc1_integer_weights(*d.sc1);
  std::int64_t total = 0;
  const std::size_t n = d.sc1->jobs.size();
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) total += w[u * n + v];
  return static_cast<double>(swt + total - dp_optimum(*d.sc1));
}

// ---- helpers ----------------------------------------------------------------

/// Linear-interpolation quantile of an unsorted sample.
inline double quantile(std::vector<double> v, double q) {
  if (v.empty()) throw DomainError("quantile of empty sample");
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

inline void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& body) {
  const unsigned w = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (w == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < w; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
    });
  for (auto& th : pool) th.join();
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
  std::filesystem::create_directories(p.parent_path().empty() ? std::filesystem::path(".") : p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write '" + p.string() + "'");
  out << text;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

/// Removes every "timing" member recursively.
inline Json strip_timing(Json j) {
  if (j.is_object()) {
    j.erase("timing");
    for (auto& [_, v] : j.items()) v = strip_timing(v);
  } else if (j.is_array()) {
    for (auto& v : j) v = strip_timing(v);
  }
  return j;
}

/// The hash ignores the output directory.
inline Json provenance(const ExperimentConfig& c) {
  Json j = config_to_json(c);
  j.erase("output");
  return Json{{"config_hash", hex64(fnv1a(j.dump()))}, {"seeds", c.seeds}, {"version", kVersion}};
}

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---- pipelines --------------------------------------------------------------

struct BatchOutcome {
  Json report;
  std::size_t failed = 0;
};

inline Json failure_record(const InstanceKey& key, const std::exception& e) {
  return Json{{"id", key.id}, {"size", key.size}, {"seed", key.seed}, {"status", "failed"}, {"error", e.what()}};
}

/// Full pipeline: generate, reduce, solve exactly, optimise QAOA per depth,
/// baselines and ratios. Writes report.json and curves.csv into out_dir.
inline BatchOutcome run_experiment(const ExperimentConfig& c, const std::filesystem::path& out_dir, unsigned jobs = 1) {
  const auto keys = instance_keys(c);
  const auto records = experiment_records(c);
  std::vector<Json> recs(keys.size());
  parallel_for(keys.size(), jobs, [&](std::size_t idx) {
    const auto& key = keys[idx];
    try {
      auto t0 = Clock::now();
      const auto d = make_instance(c, key, records);
      Json timing{{"generate_s", seconds_since(t0)}};
      Json rec{{"id", key.id}, {"size", key.size}, {"seed", key.seed}, {"status", "ok"}};
      QaoaRunOptions opts = run_options(c);
      if (c.problem == Problem::sc2) {
        t0 = Clock::now();
        const auto mis = brute_mis(d.conflict);
        timing["oracle_s"] = seconds_since(t0);
        t0 = Clock::now();
        const auto spec = make_mis_spec(d.conflict, c.mis_penalty);
        const auto res = run_qaoa_mis(spec, opts, key.seed, mis.size);
        timing["qaoa_s"] = seconds_since(t0);
        const auto repaired = repaired_size_diagonal(d.conflict);
        double mean = 0.0;
        for (double v : repaired) mean += v;
        mean /= static_cast<double>(repaired.size());
        rec["edges"] = d.conflict.edge_count();
        rec["ansatz"] = to_string(c.mis_ansatz);
        rec["penalty"] = spec.U;
        rec["optimum"] = mis.size;
        rec["qaoa"] = to_json(res);
        rec["baseline"] = Json{{"kind", "uniform_bitstring_repaired"}, {"mean_size", mean}, {"mean_ratio", mean / mis.size}};
      } else {
        t0 = Clock::now();
        const double opt = maxkcut_optimum(d, c.k);
        timing["oracle_s"] = seconds_since(t0);
        t0 = Clock::now();
        const auto res = run_qaoa_maxkcut(d.weighted, c.k, opts, key.seed, opt);
        timing["qaoa_s"] = seconds_since(t0);
        t0 = Clock::now();
        const auto base = random_baseline(d.weighted, c.k, c.baseline_trials, key.seed, opt);
        timing["baseline_s"] = seconds_since(t0);
        rec["total_weight"] = d.weighted.total_weight();
        rec["optimum"] = opt;
        rec["qaoa"] = to_json(res);
        rec["baseline"] = Json{{"kind", "uniform_labeling"}, {"trials", c.baseline_trials}, {"mean_cut", base.mean_cut},
                               {"stddev_cut", base.stddev_cut}, {"mean_ratio", base.mean_ratio ? Json(*base.mean_ratio) : Json(nullptr)}};
      }
      rec["timing"] = timing;
      recs[idx] = std::move(rec);
    } catch (const std::exception& e) {
      recs[idx] = failure_record(key, e);
    }
  });

  BatchOutcome out;
  Json records_json = Json::array();
  std::vector<std::vector<double>> per_depth(static_cast<std::size_t>(c.p_max));
  std::ostringstream csv;
  csv.precision(17);
  csv << "id,size,seed,depth,ratio,expectation,evals,cumulative_evals\n";
  for (auto& r : recs) {
    if (r["status"] == "failed") {
      ++out.failed;
    } else {
      for (const auto& l : r["qaoa"]["per_layer_trace"]) {
        const int depth = l["depth"].get<int>();
        const double ratio = l["ratio"].is_null() ? std::nan("") : l["ratio"].get<double>();
        per_depth[static_cast<std::size_t>(depth - 1)].push_back(ratio);
        csv << r["id"].get<std::string>() << ',' << r["size"].get<int>() << ',' << r["seed"].get<std::uint64_t>() << ','
            << depth << ',' << ratio << ',' << l["expectation"].get<double>() << ',' << l["evals"].get<std::size_t>()
            << ',' << l["cumulative_evals"].get<std::size_t>() << '\n';
      }
    }
    records_json.push_back(std::move(r));
  }
  Json depths = Json::array();
  for (std::size_t d = 0; d < per_depth.size(); ++d) {
    const auto& v = per_depth[d];
    Json e{{"depth", d + 1}, {"count", v.size()}};
    if (!v.empty()) {
      double mean = 0.0;
      for (double x : v) mean += x;
      e["mean"] = mean / static_cast<double>(v.size());
      e["min"] = quantile(v, 0.0);
      e["q25"] = quantile(v, 0.25);
      e["median"] = quantile(v, 0.5);
      e["q75"] = quantile(v, 0.75);
      e["max"] = quantile(v, 1.0);
      e["distribution"] = v;
    }
    depths.push_back(std::move(e));
  }
  out.report = Json{{"provenance", provenance(c)}, {"config", config_to_json(c)}, {"records", std::move(records_json)}};
  out.report["aggregate"] = Json{{"instances", keys.size()}, {"failed", out.failed}, {"depths", std::move(depths)}};
  write_text(out_dir / "report.json", dump(out.report));
  write_text(out_dir / "curves.csv", csv.str());
  return out;
}

/// Generated instances and their graphs, without any optimisation.
inline BatchOutcome run_generate(const ExperimentConfig& c, const std::filesystem::path& out_dir) {
  const auto keys = instance_keys(c);
  const auto records = experiment_records(c);
  BatchOutcome out;
  Json items = Json::array();
  for (const auto& key : keys) {
    try {
      const auto d = make_instance(c, key, records);
      Json j{{"id", key.id}, {"status", "ok"}};
      if (d.sc1) j["instance"] = to_json(*d.sc1);
      if (d.sc2) {
        j["instance"] = to_json(*d.sc2);
        j["graph"] = graph_to_json(d.conflict);
      } else {
        j["graph"] = graph_to_json(d.weighted);
      }
      items.push_back(std::move(j));
    } catch (const std::exception& e) {
      ++out.failed;
      items.push_back(failure_record(key, e));
    }
  }
  out.report = Json{{"provenance", provenance(c)}, {"instances", std::move(items)}};
  write_text(out_dir / "instances.json", dump(out.report));
  return out;
}

/// Random baselines and exact optima only.
inline BatchOutcome run_baselines(const ExperimentConfig& c, const std::filesystem::path& out_dir) {
  const auto keys = instance_keys(c);
  const auto records = experiment_records(c);
  BatchOutcome out;
  Json items = Json::array();
  for (const auto& key : keys) {
    try {
      const auto d = make_instance(c, key, records);
      Json j{{"id", key.id}, {"status", "ok"}};
      if (c.problem == Problem::sc2) {
        const auto mis = brute_mis(d.conflict);
        const auto repaired = repaired_size_diagonal(d.conflict);
        double mean = 0.0;
        for (double v : repaired) mean += v;
        mean /= static_cast<double>(repaired.size());
        j["optimum"] = mis.size;
        j["mean_size"] = mean;
        j["mean_ratio"] = mean / mis.size;
      } else {
        const double opt = maxkcut_optimum(d, c.k);
        const auto base = random_baseline(d.weighted, c.k, c.baseline_trials, key.seed, opt);
        j["optimum"] = opt;
        j["mean_cut"] = base.mean_cut;
        j["stddev_cut"] = base.stddev_cut;
        j["mean_ratio"] = *base.mean_ratio;
        if (d.sc1) {
          const auto dp = dp_optimum(*d.sc1);
          const auto sb = random_schedule_baseline(*d.sc1, c.baseline_trials, key.seed, dp);
          j["schedule_optimum"] = dp;
          j["schedule_mean_cost"] = sb.mean_cost;
          j["schedule_mean_ratio"] = *sb.mean_ratio;
        }
      }
      items.push_back(std::move(j));
    } catch (const std::exception& e) {
      ++out.failed;
      items.push_back(failure_record(key, e));
    }
  }
  out.report = Json{{"provenance", provenance(c)}, {"baselines", std::move(items)}};
  write_text(out_dir / "baseline.json", dump(out.report));
  return out;
}

/// p = 1 landscapes of the normalised graph times each configured factor.
inline BatchOutcome run_landscapes(const ExperimentConfig& c, const std::filesystem::path& out_dir) {
  const auto keys = instance_keys(c);
  const auto records = experiment_records(c);
  BatchOutcome out;
  Json items = Json::array();
  for (const auto& key : keys) {
    try {
      if (c.problem == Problem::sc2) throw DomainError("landscapes are defined for Max-k-Cut problems");
      const auto d = make_instance(c, key, records);
      const auto nz = normalize(d.weighted);
      Json per_scale = Json::array();
      for (std::size_t si = 0; si < c.landscape_scales.size(); ++si) {
        const double factor = c.landscape_scales[si];
        const auto g = nz.graph.scaled(factor);
        const auto cost = cost_diagonal(g, c.k);
        const auto l = landscape_grid(
            [&](double gamma, double beta) { return -expectation(prepare_state(cost, QaoaParams{{gamma}, {beta}}), cost) / nz.scale / factor; },
            c.landscape_resolution, default_qaoa_layer_box());
        const std::string name = "landscape_" + key.id + (c.landscape_scales.size() > 1 ? "_x" + std::to_string(si) : "") + ".csv";
        std::ostringstream os;
        write_landscape_csv(os, l);
        write_text(out_dir / name, os.str());
        per_scale.push_back(Json{{"factor", factor}, {"file", name}, {"strict_local_minima", count_strict_local_minima(l)},
                                 {"min_gamma", l.argmin_x}, {"min_beta", l.argmin_y}, {"min_value", l.min_value}});
      }
      items.push_back(Json{{"id", key.id}, {"status", "ok"}, {"scale", nz.scale}, {"landscapes", std::move(per_scale)}});
    } catch (const std::exception& e) {
      ++out.failed;
      items.push_back(failure_record(key, e));
    }
  }
  out.report = Json{{"provenance", provenance(c)}, {"landscapes", std::move(items)}};
  write_text(out_dir / "landscapes.json", dump(out.report));
  return out;
}

inline EmbedSpec embed_spec(const ExperimentConfig& c, Graph g) {
  return EmbedSpec{std::move(g), c.embedding.r, c.embedding.rho, c.embedding.l_bar};
}

inline Graph conflict_graph_for(const ExperimentConfig& c, const InstanceData& d) {
  if (c.problem != Problem::sc2) throw DomainError("layouts are defined for sc2 conflict graphs");
  return d.conflict;
}

/// Unit-disk layouts of the sc2 conflict graphs; one layout_<id>.json each.
inline BatchOutcome run_embeddings(const ExperimentConfig& c, const std::filesystem::path& out_dir, unsigned jobs = 1) {
  const auto keys = instance_keys(c);
  const auto records = experiment_records(c);
  BatchOutcome out;
  Json items = Json::array();
  AnnealOptions ao;
  ao.restarts = c.embedding.restarts;
  ao.iterations = c.embedding.iterations;
  ao.workers = jobs;
  for (const auto& key : keys) {
    try {
      const auto d = make_instance(c, key, records);
      const auto res = solve_layout(embed_spec(c, conflict_graph_for(c, d)), key.seed, ao);
      const std::string name = "layout_" + key.id + ".json";
      write_text(out_dir / name, dump(to_json(res)));
      if (!res.feasible) ++out.failed;
      items.push_back(Json{{"id", key.id}, {"status", res.feasible ? "ok" : "infeasible"}, {"file", name},
                           {"best_penalty", res.best_penalty}});
    } catch (const std::exception& e) {
      ++out.failed;
      items.push_back(failure_record(key, e));
    }
  }
  out.report = Json{{"provenance", provenance(c)}, {"layouts", std::move(items)}};
  write_text(out_dir / "layouts.json", dump(out.report));
  return out;
}

/// LP models of the sc2 layout problems; one model_<id>.lp each.
inline BatchOutcome run_export_models(const ExperimentConfig& c, const std::filesystem::path& out_dir) {
  const auto keys = instance_keys(c);
  const auto records = experiment_records(c);
  BatchOutcome out;
  Json items = Json::array();
  for (const auto& key : keys) {
    try {
      const auto d = make_instance(c, key, records);
      const auto model = export_model(embed_spec(c, conflict_graph_for(c, d)), c.model.variant, c.model.phi_count);
      const std::string name = "model_" + key.id + ".lp";
      write_text(out_dir / name, model.text);
      items.push_back(Json{{"id", key.id}, {"status", "ok"}, {"file", name}, {"variant", to_string(c.model.variant)},
                           {"stats", to_json(model.stats)}});
    } catch (const std::exception& e) {
      ++out.failed;
      items.push_back(failure_record(key, e));
    }
  }
  out.report = Json{{"provenance", provenance(c)}, {"models", std::move(items)}};
  write_text(out_dir / "models.json", dump(out.report));
  return out;
}

inline Json parity_resource_table(const std::vector<int>& sizes) {
  Json items = Json::array();
  for (int n : sizes) items.push_back(to_json(parity_resources(n)));
  return items;
}

/// Sorted cut-ratio spectra of K_N, as CSV rows (n, normalized_index, ratio).
inline void write_spectrum_csv(std::ostream& out, const std::vector<int>& sizes) {
  std::ostringstream os;
  os.precision(17);
  os << "n,normalized_index,ratio\n";
  for (int n : sizes) {
    const auto s = cut_ratio_spectrum(n);
    for (std::size_t i = 0; i < s.size(); ++i)
      os << n << ',' << (s.size() > 1 ? static_cast<double>(i) / static_cast<double>(s.size() - 1) : 0.0) << ',' << s[i] << '\n';
  }
  out << os.str();
}

}  // namespace evq
