#pragma once

// The command-line verbs as library functions. Each writes its files under
// config.out_dir and returns a process exit code.

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "duet/lab/config.hpp"
#include "duet/lab/files.hpp"

namespace duet::lab {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitValidation = 2, kExitNumeric = 3 };

enum class Condition { normal, ghost, isolated };
const char* condition_name(Condition condition);
// From the ghost/isolated flags; both at once is a usage error.
Condition condition_of(const ExperimentConfig& config);

struct EvolveResult {
  EvolutionLog log;
  GenomeFile best;
  std::filesystem::path log_path;
  std::filesystem::path genome_path;
};

// evolve3 from a random population, or prune2/prune1 reseeded from `seed`
// (which must come from the preceding stage). Reseeded stages stop once they
// reach the seed's recorded fitness unless a threshold is configured.
// Writes <stage>_log.csv and <stage>_best.genome.
EvolveResult run_evolve(const ExperimentConfig& config, Stage stage, const std::optional<GenomeFile>& seed,
                        std::ostream* progress = nullptr);

struct SimulateResult {
  TrialRecord record;
  std::filesystem::path path;
};

// One trial of the genome under the configured condition; writes trial_<condition>.csv.
SimulateResult run_simulate(const ExperimentConfig& config, const GenomeFile& genome);

struct AnalyzeResult {
  tsa::AnalysisReport report;
  std::filesystem::path report_path;
  std::filesystem::path curves_path;
};

// Analyses one column of a table (default a1_s1, or the only column) after
// dropping config.transient time units. The sampling interval comes from
// the file's preamble, then `dt`, then 1.
AnalyzeResult run_analyze(const ExperimentConfig& config, const std::filesystem::path& input,
                          const std::optional<std::string>& column, std::optional<double> dt = std::nullopt);

// Figure 1: agent,x,y blocks. Figures 2-4: agent,time,activation blocks
// (neuron 1 state). Writes fig<N>.csv and, when requested, fig<N>.svg.
// Mismatched conditions produce a warning on `warnings`.
std::filesystem::path run_export_fig(const ExperimentConfig& config, const std::filesystem::path& record, int figure,
                                     bool svg, std::ostream& warnings);

int cmd_evolve(const ExperimentConfig& config, Stage stage, const std::optional<std::filesystem::path>& seed_genome,
               std::ostream& out);
int cmd_simulate(const ExperimentConfig& config, const std::filesystem::path& genome, std::ostream& out);
int cmd_analyze(const ExperimentConfig& config, const std::filesystem::path& input,
                const std::optional<std::string>& column, std::optional<double> dt, std::ostream& out);
int cmd_validate(bool force_fail, std::ostream& out);
int cmd_export_fig(const ExperimentConfig& config, const std::filesystem::path& record, int figure, bool svg,
                   std::ostream& out, std::ostream& warnings);

}  // namespace duet::lab
