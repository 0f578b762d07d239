// Command-line front end for the experiment pipelines.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "evq/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitPartial = 2;

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  unsigned jobs = 1;
};

evq::ExperimentConfig load(const Common& c) {
  auto cfg = evq::load_config(c.config);
  if (c.seed) cfg.seeds = {*c.seed};
  if (!c.out.empty()) cfg.output = c.out;
  return cfg;
}

int finish(const evq::BatchOutcome& o, const std::string& what, const std::filesystem::path& out) {
  std::cerr << what << ": " << (o.failed == 0 ? "ok" : std::to_string(o.failed) + " instance(s) failed") << ", output in "
            << out.string() << "\n";
  return o.failed == 0 ? kExitOk : kExitPartial;
}

void add_common(CLI::App* sub, Common& c, bool with_jobs) {
  sub->add_option("--config", c.config, "Experiment configuration (JSON)")->required()->check(CLI::ExistingFile);
  sub->add_option("--seed", c.seed, "Run a single seed instead of the configured list");
  sub->add_option("--out", c.out, "Output directory (overrides the config)");
  if (with_jobs) sub->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::Range(1U, 1024U));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scheduling-to-QAOA experiment runner"};
  app.set_version_flag("--version", std::string(evq::kVersion));
  app.require_subcommand(1);

  Common gen, run, base, land, embed, model;
  std::optional<int> phi_count;
  std::vector<int> res_sizes{5};
  std::vector<int> spec_sizes{4, 8, 16};
  std::string res_out = "out", spec_out = "out";

  add_common(app.add_subcommand("gen", "Generate instances and their graphs"), gen, false);
  add_common(app.add_subcommand("run", "Full QAOA pipeline: report.json and curves.csv"), run, true);
  add_common(app.add_subcommand("baseline", "Exact optima and random baselines"), base, false);
  add_common(app.add_subcommand("landscape", "p = 1 landscapes: landscape_<id>.csv"), land, false);
  add_common(app.add_subcommand("embed", "Unit-disk layouts: layout_<id>.json"), embed, true);
  auto* exp = app.add_subcommand("export-model", "Layout MILP models: model_<id>.lp");
  add_common(exp, model, false);
  exp->add_option("--phi-count", phi_count, "Angular resolution of the disjunctive variant")->check(CLI::Range(4, 1024));
  auto* res = app.add_subcommand("resources", "Parity-encoding resource table");
  res->add_option("--sizes", res_sizes, "Logical node counts")->check(CLI::Range(3, 1000));
  res->add_option("--out", res_out, "Output directory");
  auto* spc = app.add_subcommand("spectrum", "Sorted cut-ratio spectra of complete graphs");
  spc->add_option("--sizes", spec_sizes, "Node counts")->check(CLI::Range(1, 20));
  spc->add_option("--out", spec_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (app.got_subcommand("gen")) {
      const auto cfg = load(gen);
      return finish(evq::run_generate(cfg, cfg.output), "gen", cfg.output);
    }
    if (app.got_subcommand("run")) {
      const auto cfg = load(run);
      return finish(evq::run_experiment(cfg, cfg.output, run.jobs), "run", cfg.output);
    }
    if (app.got_subcommand("baseline")) {
      const auto cfg = load(base);
      return finish(evq::run_baselines(cfg, cfg.output), "baseline", cfg.output);
    }
    if (app.got_subcommand("landscape")) {
      const auto cfg = load(land);
      return finish(evq::run_landscapes(cfg, cfg.output), "landscape", cfg.output);
    }
    if (app.got_subcommand("embed")) {
      const auto cfg = load(embed);
      return finish(evq::run_embeddings(cfg, cfg.output, embed.jobs), "embed", cfg.output);
    }
    if (app.got_subcommand("export-model")) {
      auto cfg = load(model);
      if (phi_count) cfg.model.phi_count = *phi_count;
      return finish(evq::run_export_models(cfg, cfg.output), "export-model", cfg.output);
    }
    if (app.got_subcommand("resources")) {
      evq::write_text(std::filesystem::path(res_out) / "resources.json", evq::dump(evq::parity_resource_table(res_sizes)));
      std::cerr << "resources: ok, output in " << res_out << "\n";
      return kExitOk;
    }
    if (app.got_subcommand("spectrum")) {
      std::ostringstream os;
      evq::write_spectrum_csv(os, spec_sizes);
      evq::write_text(std::filesystem::path(spec_out) / "spectrum.csv", os.str());
      std::cerr << "spectrum: ok, output in " << spec_out << "\n";
      return kExitOk;
    }
  } catch (const evq::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
