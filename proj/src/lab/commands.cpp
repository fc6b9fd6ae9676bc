#include "duet/lab/commands.hpp"

#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include "duet/lab/validation.hpp"

namespace duet::lab {

namespace {

std::string genome_text(const GenomeFile& genome) {
  std::ostringstream out;
  write_genome(out, genome);
  return out.str();
}

std::filesystem::path prepare_out(const ExperimentConfig& config) {
  std::filesystem::create_directories(config.out_dir);
  return config.out_dir;
}

template <typename Writer>
void write_file(const std::filesystem::path& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path.string());
  writer(out);
  if (!out) throw UsageError("error while writing " + path.string());
}

Preamble base_preamble(const char* schema, const ExperimentConfig& config, const std::string& digest_input) {
  return {{"schema", schema},
          {"seed", std::to_string(config.master_seed)},
          {"config_digest", fnv1a_hex(canonical_text(config) + digest_input)}};
}

std::string file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

const char* condition_name(Condition condition) {
  switch (condition) {
    case Condition::normal: return "normal";
    case Condition::ghost: return "ghost";
    case Condition::isolated: return "isolated";
  }
  return "?";
}

Condition condition_of(const ExperimentConfig& config) {
  if (config.ghost && config.isolated) throw UsageError("--ghost and --isolated are mutually exclusive");
  if (config.ghost) return Condition::ghost;
  if (config.isolated) return Condition::isolated;
  return Condition::normal;
}

EvolveResult run_evolve(const ExperimentConfig& config, Stage stage, const std::optional<GenomeFile>& seed,
                        std::ostream* progress) {
  EvolveResult result;
  std::string digest_input = std::string("command=evolve\nstage=") + stage_name(stage) + '\n';
  GenerationObserver observer;
  if (progress) {
    observer = [progress, stage](const GenerationStats& g) {
      *progress << stage_name(stage) << " generation " << g.generation << " best " << format_double(g.best)
                << " mean " << format_double(g.mean) << '\n'
                << std::flush;
    };
  }
  if (stage == Stage::evolve3) {
    if (seed) throw UsageError("evolve3 starts from a random population; drop the seed genome");
    result.log = run_evolution(config.evo, stage, std::nullopt, observer);
  } else {
    if (!seed) throw UsageError(std::string(stage_name(stage)) + " needs a seed genome (--genome)");
    const Stage expected = stage == Stage::prune2 ? Stage::evolve3 : Stage::prune2;
    if (seed->stage != expected) {
      throw UsageError(std::string(stage_name(stage)) + " needs a " + stage_name(expected) + " genome, got " +
                       stage_name(seed->stage));
    }
    digest_input += genome_text(*seed);
    // Without an explicit threshold a reseeded stage runs until it regains the seed's fitness.
    EvoConfig evo = config.evo;
    if (!evo.fitness_threshold) evo.fitness_threshold = seed->fitness;
    digest_input += "stage_threshold=" + format_double(*evo.fitness_threshold) + '\n';
    result.log = prune_and_reseed(seed->genome, stage, evo, observer);
  }
  result.best = {stage, result.log.best_generation, result.log.best_fitness, config.master_seed, result.log.best};

  const auto dir = prepare_out(config);
  result.log_path = dir / (std::string(stage_name(stage)) + "_log.csv");
  result.genome_path = dir / (std::string(stage_name(stage)) + "_best.genome");
  const Preamble preamble = base_preamble(kEvolutionSchema, config, digest_input);
  write_file(result.log_path, [&](std::ostream& out) { write_evolution_csv(out, result.log, preamble); });
  write_file(result.genome_path, [&](std::ostream& out) { write_genome(out, result.best); });
  return result;
}

SimulateResult run_simulate(const ExperimentConfig& config, const GenomeFile& genome) {
  const Condition condition = condition_of(config);
  const CtrnnParams params = decode(genome.genome, active_neurons(genome.stage));
  TrialConfig trial = config.simulation;
  trial.init_poses = initial_conditions_for_seed(config.resolved_trial_seed());
  trial.collisions_enabled = condition != Condition::ghost;

  SimulateResult result;
  result.record = condition == Condition::isolated ? run_isolated(params, trial) : run_trial(params, trial);

  const std::string digest_input =
      std::string("command=simulate\ncondition=") + condition_name(condition) + '\n' + genome_text(genome);
  Preamble preamble = base_preamble(kTrialSchema, config, digest_input);
  preamble.emplace_back("condition", condition_name(condition));
  preamble.emplace_back("stage", stage_name(genome.stage));
  preamble.emplace_back("trial_seed", std::to_string(config.resolved_trial_seed()));
  preamble.emplace_back("record_stride", std::to_string(trial.record_stride));

  result.path = prepare_out(config) / (std::string("trial_") + condition_name(condition) + ".csv");
  write_file(result.path, [&](std::ostream& out) { write_trial_csv(out, result.record, preamble); });
  return result;
}

AnalyzeResult run_analyze(const ExperimentConfig& config, const std::filesystem::path& input,
                          const std::optional<std::string>& column, std::optional<double> dt) {
  const Table table = load_table(input);
  std::string name;
  if (column) {
    name = *column;
  } else if (table.names.size() == 1) {
    name = table.names.front();
  } else {
    name = "a1_s1";
  }
  const std::vector<double>& values = table.column(name);

  tsa::TimeSeries series;
  if (const auto it = table.meta.find("sample_interval"); it != table.meta.end()) {
    series.dt = parse_double(it->second);
  } else {
    series.dt = dt.value_or(1.0);
  }
  if (!(series.dt > 0.0)) throw UsageError("sampling interval must be positive");
  const auto skip = static_cast<std::size_t>(std::llround(config.transient / series.dt));
  if (skip >= values.size()) throw UsageError(input.string() + ": transient removes the whole series");
  series.values.assign(values.begin() + static_cast<std::ptrdiff_t>(skip), values.end());
  for (double v : series.values) {
    if (!std::isfinite(v)) throw NumericError(input.string() + ": column '" + name + "' has non-finite values");
  }

  AnalyzeResult result;
  try {
    result.report = tsa::analyze(series);
  } catch (const tsa::AnalysisError& e) {
    throw tsa::AnalysisError(input.string() + ", column '" + name + "': " + e.what());
  }

  const std::string digest_input = "command=analyze\ncolumn=" + name + "\ndt=" + format_double(series.dt) +
                                   "\ninput=" + fnv1a_hex(file_bytes(input)) + '\n';
  Preamble preamble = base_preamble(kAnalysisSchema, config, digest_input);
  preamble.emplace_back("source", input.filename().string());
  preamble.emplace_back("column", name);
  preamble.emplace_back("transient_samples", std::to_string(skip));
  const auto dir = prepare_out(config);
  result.report_path = dir / "analysis_report.txt";
  result.curves_path = dir / "analysis_curves.csv";
  write_file(result.report_path, [&](std::ostream& out) { write_analysis_report(out, result.report, preamble); });
  write_file(result.curves_path, [&](std::ostream& out) { write_analysis_curves(out, result.report, preamble); });
  return result;
}

std::filesystem::path run_export_fig(const ExperimentConfig& config, const std::filesystem::path& record, int figure,
                                     bool svg, std::ostream& warnings) {
  if (figure < 1 || figure > 4) throw UsageError("figure must be 1, 2, 3 or 4");
  const Table table = load_table(record);
  const auto condition_it = table.meta.find("condition");
  const std::string condition = condition_it == table.meta.end() ? "unknown" : condition_it->second;
  const char* expected = figure == 3 ? "isolated" : figure == 4 ? "ghost" : "normal";
  if (condition != expected) {
    warnings << "warning: figure " << figure << " expects a " << expected << " record, " << record.string()
             << " is " << condition << '\n';
  }
  const std::size_t agents = table.meta.count("agents") ? parse_uint(table.meta.at("agents")) : 1;

  Preamble preamble{{"schema", "duet-figure 1.0"}, {"figure", std::to_string(figure)}, {"source_condition", condition}};
  for (const char* key : {"seed", "config_digest"}) {
    if (table.meta.count(key)) preamble.emplace_back(std::string("source_") + key, table.meta.at(key));
  }

  std::vector<PlotSeries> plot;
  for (std::size_t a = 1; a <= agents; ++a) {
    const std::string p = "a" + std::to_string(a) + "_";
    PlotSeries s;
    s.label = "agent " + std::to_string(a);
    if (figure == 1) {
      s.x = table.column(p + "x");
      s.y = table.column(p + "y");
    } else {
      s.x = table.column("time");
      s.y = table.column(p + "s1");
    }
    plot.push_back(std::move(s));
  }

  const auto dir = prepare_out(config);
  const auto csv_path = dir / ("fig" + std::to_string(figure) + ".csv");
  write_file(csv_path, [&](std::ostream& out) {
    write_preamble(out, preamble);
    out << (figure == 1 ? "agent,x,y\n" : "agent,time,activation\n");
    for (std::size_t a = 0; a < plot.size(); ++a) {
      for (std::size_t i = 0; i < plot[a].x.size(); ++i) {
        out << a + 1 << ',' << format_double(plot[a].x[i]) << ',' << format_double(plot[a].y[i]) << '\n';
      }
    }
  });
  if (svg) {
    static const char* titles[] = {"", "Trajectories", "Neural activation, coupled agents",
                                   "Neural activation, isolated network", "Neural activation, no collisions"};
    write_file(dir / ("fig" + std::to_string(figure) + ".svg"), [&](std::ostream& out) {
      write_svg(out, titles[figure], figure == 1 ? "x" : "time", figure == 1 ? "y" : "activation", plot);
    });
  }
  return csv_path;
}

int cmd_evolve(const ExperimentConfig& config, Stage stage, const std::optional<std::filesystem::path>& seed_genome,
               std::ostream& out) {
  std::optional<GenomeFile> seed;
  if (seed_genome) seed = load_genome(*seed_genome);
  const EvolveResult r = run_evolve(config, stage, seed, &out);
  out << "stop: " << stop_reason_name(r.log.stop) << '\n'
      << "best fitness " << format_double(r.log.best_fitness) << " at generation " << r.log.best_generation << '\n'
      << "wrote " << r.log_path.string() << '\n'
      << "wrote " << r.genome_path.string() << '\n';
  return kExitOk;
}

int cmd_simulate(const ExperimentConfig& config, const std::filesystem::path& genome, std::ostream& out) {
  const SimulateResult r = run_simulate(config, load_genome(genome));
  if (r.record.agent_count == 2) {
    out << "score " << format_double(r.record.clamped_score) << ", collisions " << r.record.collision_events << '\n';
  }
  out << "wrote " << r.path.string() << '\n';
  return kExitOk;
}

int cmd_analyze(const ExperimentConfig& config, const std::filesystem::path& input,
                const std::optional<std::string>& column, std::optional<double> dt, std::ostream& out) {
  const AnalyzeResult r = run_analyze(config, input, column, dt);
  write_analysis_report(out, r.report, {});
  out << "wrote " << r.report_path.string() << '\n' << "wrote " << r.curves_path.string() << '\n';
  return kExitOk;
}

int cmd_validate(bool force_fail, std::ostream& out) {
  const auto checks = run_validation(force_fail);
  print_checks(out, checks);
  const bool ok = all_passed(checks);
  out << (ok ? "all checks passed" : "validation FAILED") << '\n';
  return ok ? kExitOk : kExitValidation;
}

int cmd_export_fig(const ExperimentConfig& config, const std::filesystem::path& record, int figure, bool svg,
                   std::ostream& out, std::ostream& warnings) {
  out << "wrote " << run_export_fig(config, record, figure, svg, warnings).string() << '\n';
  return kExitOk;
}

}  // namespace duet::lab
