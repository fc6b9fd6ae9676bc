#pragma once

// On-disk formats: genome files, CSV tables with a '#' metadata preamble,
// analysis reports and SVG line plots.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "duet/evolution.hpp"
#include "duet/trial.hpp"
#include "duet/tsa.hpp"

namespace duet::lab {

inline constexpr int kGenomeFormatVersion = 1;
inline constexpr const char* kTrialSchema = "duet-trial 1.0";
inline constexpr const char* kEvolutionSchema = "duet-evolution 1.0";
inline constexpr const char* kAnalysisSchema = "duet-analysis 1.0";

struct GenomeFile {
  Stage stage = Stage::evolve3;
  std::size_t generation = 0;
  double fitness = 0.0;
  std::uint64_t master_seed = 0;
  Genome genome;

  bool operator==(const GenomeFile&) const = default;
};

void write_genome(std::ostream& out, const GenomeFile& file);
// Throws UsageError on anything malformed, naming `origin` in the message.
GenomeFile read_genome(std::istream& in, const std::string& origin = "genome");
GenomeFile load_genome(const std::filesystem::path& path);

// Ordered `# key: value` lines written ahead of every table.
using Preamble = std::vector<std::pair<std::string, std::string>>;

void write_preamble(std::ostream& out, const Preamble& preamble);

// Trial rows: step, time, then per agent a1_s1..a1_s3, a1_in1, a1_in2,
// a1_m1, a1_m2, a1_x, a1_y, a1_heading; two-agent records add distance and
// the cumulative collision count.
void write_trial_csv(std::ostream& out, const TrialRecord& record, Preamble preamble);
void write_evolution_csv(std::ostream& out, const EvolutionLog& log, Preamble preamble);

// Human-readable `key: value` report.
void write_analysis_report(std::ostream& out, const tsa::AnalysisReport& report, const Preamble& preamble);
// Long-format curves: curve,x,y with curves mutual_information (lag),
// fnn (dimension) and divergence (time).
void write_analysis_curves(std::ostream& out, const tsa::AnalysisReport& report, Preamble preamble);

// Numeric table read back from a CSV with preamble and header, or from a
// plain one-value-per-line file (single column "value").
struct Table {
  std::map<std::string, std::string> meta;
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;

  // Throws UsageError listing the available columns when `name` is absent.
  const std::vector<double>& column(const std::string& name) const;
};

Table read_table(std::istream& in, const std::string& origin = "table");
Table load_table(const std::filesystem::path& path);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

// Plain polyline plot with axes and min/max tick labels.
void write_svg(std::ostream& out, const std::string& title, const std::string& x_label, const std::string& y_label,
               const std::vector<PlotSeries>& series);

}  // namespace duet::lab
