// Command-line front end: evolve, prune, simulate, analyze, validate, export-fig.

#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "duet/lab/commands.hpp"

using namespace duet;
using namespace duet::lab;

namespace {

// Flags shared by every experiment verb. Values given on the command line
// override the config file.
struct Common {
  std::string config_file;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::size_t> workers;
  std::vector<std::string> sets;

  void attach(CLI::App* app) {
    app->add_option("--config", config_file, "key = value config file")->check(CLI::ExistingFile);
    app->add_option("--seed", seed, "master seed");
    app->add_option("--out", out, "output directory");
    app->add_option("--workers", workers, "evaluation threads (never changes results)");
    app->add_option("--set", sets, "extra config entry key=value (repeatable)");
  }

  ExperimentConfig build(std::map<std::string, std::string> extra = {}) const {
    ExperimentConfig config = config_file.empty() ? ExperimentConfig{} : load_config(config_file);
    std::map<std::string, std::string> entries;
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + s + "'");
      entries[s.substr(0, eq)] = s.substr(eq + 1);
    }
    if (seed) entries["seed"] = std::to_string(*seed);
    if (out) entries["out"] = *out;
    if (workers) entries["workers"] = std::to_string(*workers);
    for (auto& [k, v] : extra) entries[k] = v;
    apply_config(config, entries);
    return config;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two acoustically coupled CTRNN agents: evolution, simulation and time-series analysis"};
  app.require_subcommand(1);

  Common evolve_common, prune_common, sim_common, analyze_common, fig_common;

  auto* evolve = app.add_subcommand("evolve", "evolve 3-neuron controllers from a random population");
  evolve_common.attach(evolve);
  std::optional<std::size_t> max_generations;
  std::optional<double> threshold;
  evolve->add_option("--max-generations", max_generations);
  evolve->add_option("--threshold", threshold, "stop once the best fitness reaches this");

  auto* prune = app.add_subcommand("prune", "prune a neuron and re-evolve from the pruned genome");
  prune_common.attach(prune);
  std::string prune_stage;
  std::string prune_genome;
  std::optional<std::size_t> prune_generations;
  prune->add_option("--stage", prune_stage, "prune2 or prune1")->required()->check(CLI::IsMember({"prune2", "prune1"}));
  prune->add_option("--genome", prune_genome, "genome from the preceding stage")->required();
  prune->add_option("--max-generations", prune_generations);
  std::optional<double> prune_threshold;
  prune->add_option("--threshold", prune_threshold, "stop at this fitness (default: the input genome's fitness)");

  auto* simulate = app.add_subcommand("simulate", "run one trial and write the full record");
  sim_common.attach(simulate);
  std::string sim_genome;
  bool ghost = false, isolated = false;
  std::optional<double> duration;
  std::optional<std::uint64_t> trial_seed;
  simulate->add_option("--genome", sim_genome)->required();
  simulate->add_flag("--ghost", ghost, "disable collisions");
  simulate->add_flag("--isolated", isolated, "one agent, sensors forced to zero");
  simulate->add_option("--duration", duration, "time units");
  simulate->add_option("--trial-seed", trial_seed, "initial-condition seed");

  auto* analyze = app.add_subcommand("analyze", "delay, FNN dimension, Lyapunov exponent, determinism");
  analyze_common.attach(analyze);
  std::string series_file;
  std::optional<std::string> column;
  std::optional<double> dt;
  std::optional<double> transient;
  analyze->add_option("input", series_file, "trial CSV or one value per line")->required();
  analyze->add_option("--column", column, "column to analyse (default a1_s1)");
  analyze->add_option("--dt", dt, "sampling interval when the file does not record one");
  analyze->add_option("--transient", transient, "time units dropped from the start");

  auto* validate = app.add_subcommand("validate", "check the analysis toolkit on reference systems");
  bool force_fail = false;
  validate->add_flag("--force-fail", force_fail, "zero all tolerances");

  auto* fig = app.add_subcommand("export-fig", "figure data (CSV, optional SVG) from a trial record");
  fig_common.attach(fig);
  std::string fig_record;
  int figure = 1;
  bool svg = false;
  fig->add_option("record", fig_record)->required();
  fig->add_option("--figure", figure, "1 trajectories, 2 coupled activation, 3 isolated, 4 no collisions")
      ->required()
      ->check(CLI::Range(1, 4));
  fig->add_flag("--svg", svg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*evolve) {
      std::map<std::string, std::string> extra;
      if (max_generations) extra["max_generations"] = std::to_string(*max_generations);
      if (threshold) extra["fitness_threshold"] = format_double(*threshold);
      return cmd_evolve(evolve_common.build(extra), Stage::evolve3, std::nullopt, std::cout);
    }
    if (*prune) {
      std::map<std::string, std::string> extra;
      if (prune_generations) extra["max_generations"] = std::to_string(*prune_generations);
      if (prune_threshold) extra["fitness_threshold"] = format_double(*prune_threshold);
      return cmd_evolve(prune_common.build(extra), *parse_stage(prune_stage), prune_genome, std::cout);
    }
    if (*simulate) {
      std::map<std::string, std::string> extra;
      if (ghost) extra["ghost"] = "true";
      if (isolated) extra["isolated"] = "true";
      if (duration) extra["duration"] = format_double(*duration);
      if (trial_seed) extra["trial_seed"] = std::to_string(*trial_seed);
      return cmd_simulate(sim_common.build(extra), sim_genome, std::cout);
    }
    if (*analyze) {
      std::map<std::string, std::string> extra;
      if (transient) extra["transient"] = format_double(*transient);
      return cmd_analyze(analyze_common.build(extra), series_file, column, dt, std::cout);
    }
    if (*validate) return cmd_validate(force_fail, std::cout);
    if (*fig) return cmd_export_fig(fig_common.build(), fig_record, figure, svg, std::cout, std::cerr);
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
