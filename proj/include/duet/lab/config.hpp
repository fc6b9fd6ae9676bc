#pragma once

// Experiment configuration: flat `key = value` text files, canonical
// serialization and the digest stamped into every output file.

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "duet/evolution.hpp"
#include "duet/trial.hpp"

namespace duet::lab {

// Bad command line, config file or input file. Maps to exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::uint64_t master_seed = 1;
  // Evolution settings; evo.trial is the evaluation trial (300 time units).
  EvoConfig evo;
  // Settings for `simulate`: one trial, every step logged.
  TrialConfig simulation = [] {
    TrialConfig t;
    t.record_stride = 1;
    return t;
  }();
  bool ghost = false;
  bool isolated = false;
  // Initial-condition seed for `simulate`; derived from the master seed when unset.
  std::optional<std::uint64_t> trial_seed;
  // Time units dropped from the start of a series before analysis.
  double transient = 0.0;
  std::filesystem::path out_dir = ".";

  // Seed used for the simulated trial's initial poses.
  std::uint64_t resolved_trial_seed() const;
};

// Shortest decimal text that reads back to the same double.
std::string format_double(double value);
double parse_double(std::string_view text);
std::uint64_t parse_uint(std::string_view text);

// Parses `key = value` lines; '#' starts a comment. Duplicate keys are an error.
std::map<std::string, std::string> parse_config_text(std::istream& in, const std::string& origin = "config");

// Applies known keys; unknown keys throw UsageError naming the key.
void apply_config(ExperimentConfig& config, const std::map<std::string, std::string>& entries);

ExperimentConfig load_config(const std::filesystem::path& path);

// Every key that affects results, one `key=value` per line in fixed order.
// Worker count and output directory are excluded: they never change output.
std::string canonical_text(const ExperimentConfig& config);

// 64-bit FNV-1a, as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view text);

}  // namespace duet::lab
