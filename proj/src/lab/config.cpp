#include "duet/lab/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace duet::lab {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw UsageError("config key '" + key + "' expects true or false, got '" + value + "'");
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, result.ptr);
}

double parse_double(std::string_view text) {
  double value = 0.0;
  const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc() || result.ptr != text.data() + text.size()) {
    throw UsageError("not a number: '" + std::string(text) + "'");
  }
  return value;
}

std::uint64_t parse_uint(std::string_view text) {
  std::uint64_t value = 0;
  const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc() || result.ptr != text.data() + text.size()) {
    throw UsageError("not a non-negative integer: '" + std::string(text) + "'");
  }
  return value;
}

std::uint64_t ExperimentConfig::resolved_trial_seed() const {
  if (trial_seed) return *trial_seed;
  Rng rng = make_rng(master_seed, Stream::trial_seeds, {~0ULL});
  return rng();
}

std::map<std::string, std::string> parse_config_text(std::istream& in, const std::string& origin) {
  std::map<std::string, std::string> entries;
  std::string line;
  for (std::size_t number = 1; std::getline(in, line); ++number) {
    const auto hash = line.find('#');
    const std::string body = trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw UsageError(origin + ":" + std::to_string(number) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw UsageError(origin + ":" + std::to_string(number) + ": empty key");
    if (!entries.emplace(key, value).second) {
      throw UsageError(origin + ":" + std::to_string(number) + ": duplicate key '" + key + "'");
    }
  }
  return entries;
}

void apply_config(ExperimentConfig& c, const std::map<std::string, std::string>& entries) {
  for (const auto& [key, value] : entries) {
    if (key == "seed") {
      c.master_seed = parse_uint(value);
    } else if (key == "population") {
      c.evo.population = parse_uint(value);
    } else if (key == "max_generations") {
      c.evo.max_generations = parse_uint(value);
    } else if (key == "trials") {
      c.evo.trials = parse_uint(value);
    } else if (key == "eta_plus") {
      c.evo.eta_plus = parse_double(value);
    } else if (key == "mutation_variance") {
      c.evo.mutation_variance = parse_double(value);
    } else if (key == "fitness_threshold") {
      if (value == "none") {
        c.evo.fitness_threshold.reset();
      } else {
        c.evo.fitness_threshold = parse_double(value);
      }
    } else if (key == "plateau_window") {
      c.evo.plateau_window = parse_uint(value);
    } else if (key == "plateau_epsilon") {
      c.evo.plateau_epsilon = parse_double(value);
    } else if (key == "workers") {
      c.evo.workers = parse_uint(value);
    } else if (key == "trial_duration") {
      c.evo.trial.duration = parse_double(value);
    } else if (key == "dt") {
      c.evo.trial.dt = c.simulation.dt = parse_double(value);
    } else if (key == "emission") {
      c.evo.trial.emission = c.simulation.emission = parse_double(value);
    } else if (key == "duration") {
      c.simulation.duration = parse_double(value);
    } else if (key == "record_stride") {
      c.simulation.record_stride = parse_uint(value);
    } else if (key == "ghost") {
      c.ghost = parse_bool(key, value);
    } else if (key == "isolated") {
      c.isolated = parse_bool(key, value);
    } else if (key == "trial_seed") {
      c.trial_seed = parse_uint(value);
    } else if (key == "transient") {
      c.transient = parse_double(value);
    } else if (key == "out") {
      c.out_dir = value;
    } else {
      throw UsageError("unknown config key '" + key + "'");
    }
  }
  if (c.evo.population < 2 || c.evo.population % 2 != 0) throw UsageError("population must be even and at least 2");
  if (c.evo.trials < 1) throw UsageError("trials must be at least 1");
  if (!(c.evo.eta_plus > 1.0 && c.evo.eta_plus <= 2.0)) throw UsageError("eta_plus must lie in (1, 2]");
  if (!(c.evo.mutation_variance > 0.0)) throw UsageError("mutation_variance must be positive");
  if (!(c.transient >= 0.0)) throw UsageError("transient must be non-negative");
  c.evo.master_seed = c.master_seed;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path.string());
  ExperimentConfig config;
  apply_config(config, parse_config_text(in, path.string()));
  return config;
}

std::string canonical_text(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "seed=" << c.master_seed << '\n'
      << "population=" << c.evo.population << '\n'
      << "max_generations=" << c.evo.max_generations << '\n'
      << "trials=" << c.evo.trials << '\n'
      << "eta_plus=" << format_double(c.evo.eta_plus) << '\n'
      << "mutation_variance=" << format_double(c.evo.mutation_variance) << '\n'
      << "fitness_threshold=" << (c.evo.fitness_threshold ? format_double(*c.evo.fitness_threshold) : "none") << '\n'
      << "plateau_window=" << c.evo.plateau_window << '\n'
      << "plateau_epsilon=" << format_double(c.evo.plateau_epsilon) << '\n'
      << "trial_duration=" << format_double(c.evo.trial.duration) << '\n'
      << "dt=" << format_double(c.simulation.dt) << '\n'
      << "emission=" << format_double(c.simulation.emission) << '\n'
      << "duration=" << format_double(c.simulation.duration) << '\n'
      << "record_stride=" << c.simulation.record_stride << '\n'
      << "ghost=" << (c.ghost ? "true" : "false") << '\n'
      << "isolated=" << (c.isolated ? "true" : "false") << '\n'
      << "trial_seed=" << c.resolved_trial_seed() << '\n'
      << "transient=" << format_double(c.transient) << '\n';
  return out.str();
}

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  static constexpr char digits[] = "0123456789abcdef";
  for (int i = 15; i >= 0; --i) {
    buf[i] = digits[h & 0xf];
    h >>= 4;
  }
  buf[16] = '\0';
  return buf;
}

}  // namespace duet::lab
