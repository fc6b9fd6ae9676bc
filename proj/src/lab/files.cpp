#include "duet/lab/files.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "duet/lab/config.hpp"

namespace duet::lab {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// "# key: value" -> (key, value); false for other comment lines.
bool split_meta(const std::string& line, std::string& key, std::string& value) {
  const std::string body = trim(line.substr(1));
  const auto colon = body.find(':');
  if (colon == std::string::npos) return false;
  key = trim(body.substr(0, colon));
  value = trim(body.substr(colon + 1));
  return !key.empty();
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

bool is_number(const std::string& field) {
  try {
    parse_double(field);
    return true;
  } catch (const UsageError&) {
    return false;
  }
}

}  // namespace

void write_genome(std::ostream& out, const GenomeFile& file) {
  out << "# duet-genome " << kGenomeFormatVersion << '\n'
      << "# stage: " << stage_name(file.stage) << '\n'
      << "# generation: " << file.generation << '\n'
      << "# fitness: " << format_double(file.fitness) << '\n'
      << "# seed: " << file.master_seed << '\n'
      << "# layout: " << kGeneLayoutName << '\n';
  for (double g : file.genome.genes) out << format_double(g) << '\n';
}

GenomeFile read_genome(std::istream& in, const std::string& origin) {
  GenomeFile file;
  std::map<std::string, std::string> meta;
  std::vector<double> values;
  bool versioned = false;
  std::string line;
  for (std::size_t number = 1; std::getline(in, line); ++number) {
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind("# duet-genome ", 0) == 0) {
        if (trim(line.substr(14)) != std::to_string(kGenomeFormatVersion)) {
          throw UsageError(origin + ": unsupported genome format version '" + trim(line.substr(14)) + "'");
        }
        versioned = true;
        continue;
      }
      std::string key, value;
      if (split_meta(line, key, value)) meta[key] = value;
      continue;
    }
    try {
      values.push_back(parse_double(line));
    } catch (const UsageError&) {
      throw UsageError(origin + ":" + std::to_string(number) + ": not a gene value: '" + line + "'");
    }
  }
  if (!versioned) throw UsageError(origin + ": missing '# duet-genome' header");
  for (const char* key : {"stage", "generation", "fitness", "seed", "layout"}) {
    if (!meta.count(key)) throw UsageError(origin + ": missing header field '" + key + "'");
  }
  if (meta["layout"] != kGeneLayoutName) throw UsageError(origin + ": unknown gene layout '" + meta["layout"] + "'");
  const auto stage = parse_stage(meta["stage"]);
  if (!stage) throw UsageError(origin + ": unknown stage '" + meta["stage"] + "'");
  if (values.size() != kGenomeLength) {
    throw UsageError(origin + ": expected " + std::to_string(kGenomeLength) + " gene values, found " +
                     std::to_string(values.size()));
  }
  for (std::size_t i = 0; i < kGenomeLength; ++i) {
    if (!(values[i] >= -1.0 && values[i] <= 1.0)) {
      throw UsageError(origin + ": gene " + std::to_string(i) + " outside [-1, 1]");
    }
    file.genome.genes[i] = values[i];
  }
  file.stage = *stage;
  file.generation = parse_uint(meta["generation"]);
  file.fitness = parse_double(meta["fitness"]);
  file.master_seed = parse_uint(meta["seed"]);
  return file;
}

GenomeFile load_genome(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open genome file " + path.string());
  return read_genome(in, path.string());
}

void write_preamble(std::ostream& out, const Preamble& preamble) {
  for (const auto& [key, value] : preamble) out << "# " << key << ": " << value << '\n';
}

void write_trial_csv(std::ostream& out, const TrialRecord& record, Preamble preamble) {
  const std::size_t stride = record.rows.size() > 1 ? record.rows[1].step - record.rows[0].step : 1;
  preamble.emplace_back("dt", format_double(record.dt));
  preamble.emplace_back("sample_interval", format_double(record.dt * static_cast<double>(stride)));
  preamble.emplace_back("agents", std::to_string(record.agent_count));
  if (record.agent_count == 2) {
    preamble.emplace_back("initial_distance", format_double(record.initial_distance));
    preamble.emplace_back("raw_score", format_double(record.raw_score));
    preamble.emplace_back("clamped_score", format_double(record.clamped_score));
    preamble.emplace_back("collision_events", std::to_string(record.collision_events));
    preamble.emplace_back("first_collision_step",
                          record.first_collision_step ? std::to_string(*record.first_collision_step) : "none");
  }
  write_preamble(out, preamble);

  out << "step,time";
  for (std::size_t a = 1; a <= record.agent_count; ++a) {
    const std::string p = "a" + std::to_string(a) + "_";
    out << ',' << p << "s1," << p << "s2," << p << "s3," << p << "in1," << p << "in2," << p << "m1," << p << "m2,"
        << p << "x," << p << "y," << p << "heading";
  }
  if (record.agent_count == 2) out << ",distance,collisions";
  out << '\n';
  for (const TrialRow& row : record.rows) {
    out << row.step << ',' << format_double(row.time);
    for (std::size_t a = 0; a < record.agent_count; ++a) {
      const AgentSample& s = row.agents[a];
      for (double v : s.s) out << ',' << format_double(v);
      for (double v : s.inputs) out << ',' << format_double(v);
      for (double v : s.motors) out << ',' << format_double(v);
      out << ',' << format_double(s.pose.position.x) << ',' << format_double(s.pose.position.y) << ','
          << format_double(s.pose.heading);
    }
    if (record.agent_count == 2) out << ',' << format_double(row.distance) << ',' << row.collisions;
    out << '\n';
  }
}

void write_evolution_csv(std::ostream& out, const EvolutionLog& log, Preamble preamble) {
  preamble.emplace_back("stage", stage_name(log.stage));
  preamble.emplace_back("stop", stop_reason_name(log.stop));
  preamble.emplace_back("best_fitness", format_double(log.best_fitness));
  preamble.emplace_back("best_generation", std::to_string(log.best_generation));
  write_preamble(out, preamble);
  out << "generation,best,mean,median,best_so_far\n";
  for (const GenerationStats& g : log.generations) {
    out << g.generation << ',' << format_double(g.best) << ',' << format_double(g.mean) << ','
        << format_double(g.median) << ',' << format_double(g.best_so_far) << '\n';
  }
}

void write_analysis_report(std::ostream& out, const tsa::AnalysisReport& r, const Preamble& preamble) {
  write_preamble(out, preamble);
  out << "samples: " << r.samples << '\n'
      << "dt: " << format_double(r.dt) << '\n'
      << "delay: " << r.delay.delay << '\n'
      << "delay_rule: " << tsa::rule_name(r.delay.rule) << '\n'
      << "fnn_fractions:";
  for (double f : r.fnn.fractions) out << ' ' << format_double(f);
  out << '\n'
      << "fnn_saturated: " << (r.fnn.embedding_dim ? "true" : "false") << '\n'
      << "embedding_dim: " << r.embedding_dim << '\n'
      << "fnn_theiler: " << r.fnn.theiler << '\n'
      << "lle: " << format_double(r.lyapunov.exponent) << '\n'
      << "lle_fit_steps: 0-" << r.lyapunov.fit_end << '\n'
      << "lle_theiler: " << r.lyapunov.theiler << '\n'
      << "lle_pairs: " << r.lyapunov.pairs << '\n'
      << "determinism_k: " << format_double(r.determinism.k) << '\n'
      << "determinism_boxes: " << r.determinism.occupied_boxes << '\n'
      << "determinism_passes: " << r.determinism.passes << '\n'
      << "classification: " << r.classification << '\n';
}

void write_analysis_curves(std::ostream& out, const tsa::AnalysisReport& r, Preamble preamble) {
  write_preamble(out, preamble);
  out << "curve,x,y\n";
  for (std::size_t lag = 0; lag < r.delay.mutual_information.size(); ++lag) {
    out << "mutual_information," << lag << ',' << format_double(r.delay.mutual_information[lag]) << '\n';
  }
  for (std::size_t m = 0; m < r.fnn.fractions.size(); ++m) {
    out << "fnn," << m + 1 << ',' << format_double(r.fnn.fractions[m]) << '\n';
  }
  for (std::size_t i = 0; i < r.lyapunov.divergence.size(); ++i) {
    out << "divergence," << format_double(static_cast<double>(i) * r.dt) << ','
        << format_double(r.lyapunov.divergence[i]) << '\n';
  }
}

const std::vector<double>& Table::column(const std::string& name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) {
    std::string available;
    for (const auto& n : names) available += (available.empty() ? "" : ", ") + n;
    throw UsageError("no column '" + name + "'; available columns: " + available);
  }
  return columns[static_cast<std::size_t>(it - names.begin())];
}

Table read_table(std::istream& in, const std::string& origin) {
  Table table;
  std::string line;
  bool header_seen = false;
  for (std::size_t number = 1; std::getline(in, line); ++number) {
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string key, value;
      if (split_meta(line, key, value)) table.meta[key] = value;
      continue;
    }
    auto fields = split_csv(line);
    if (!header_seen) {
      header_seen = true;
      if (!is_number(fields[0])) {
        table.names = fields;
        table.columns.assign(fields.size(), {});
        continue;
      }
      if (fields.size() != 1) throw UsageError(origin + ": numeric data without a header row must have one column");
      table.names = {"value"};
      table.columns.assign(1, {});
    }
    if (fields.size() != table.names.size()) {
      throw UsageError(origin + ":" + std::to_string(number) + ": expected " + std::to_string(table.names.size()) +
                       " fields, found " + std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      try {
        table.columns[c].push_back(parse_double(fields[c]));
      } catch (const UsageError&) {
        throw UsageError(origin + ":" + std::to_string(number) + ": column '" + table.names[c] +
                         "' is not numeric: '" + fields[c] + "'");
      }
    }
  }
  if (!header_seen) throw UsageError(origin + ": no data");
  return table;
}

Table load_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path.string());
  return read_table(in, path.string());
}

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string label_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_svg(std::ostream& out, const std::string& title, const std::string& x_label, const std::string& y_label,
               const std::vector<PlotSeries>& series) {
  constexpr double width = 800.0, height = 500.0;
  constexpr double left = 80.0, right = 20.0, top = 40.0, bottom = 60.0;
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

  double x_lo = INFINITY, x_hi = -INFINITY, y_lo = INFINITY, y_hi = -INFINITY;
  for (const PlotSeries& s : series) {
    for (double x : s.x) x_lo = std::min(x_lo, x), x_hi = std::max(x_hi, x);
    for (double y : s.y) y_lo = std::min(y_lo, y), y_hi = std::max(y_hi, y);
  }
  if (!(x_hi >= x_lo)) x_lo = 0.0, x_hi = 1.0;
  if (!(y_hi >= y_lo)) y_lo = 0.0, y_hi = 1.0;
  if (x_hi == x_lo) x_lo -= 0.5, x_hi += 0.5;
  if (y_hi == y_lo) y_lo -= 0.5, y_hi += 0.5;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  auto px = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * plot_w; };
  auto py = [&](double y) { return top + (1.0 - (y - y_lo) / (y_hi - y_lo)) * plot_h; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << escape(title)
      << "</text>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w << "\" y2=\""
      << top + plot_h << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + plot_h
      << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << left << "\" y=\"" << top + plot_h + 18 << "\" font-size=\"12\">" << label_number(x_lo)
      << "</text>\n";
  out << "<text x=\"" << left + plot_w << "\" y=\"" << top + plot_h + 18
      << "\" text-anchor=\"end\" font-size=\"12\">" << label_number(x_hi) << "</text>\n";
  out << "<text x=\"" << left - 6 << "\" y=\"" << top + plot_h << "\" text-anchor=\"end\" font-size=\"12\">"
      << label_number(y_lo) << "</text>\n";
  out << "<text x=\"" << left - 6 << "\" y=\"" << top + 12 << "\" text-anchor=\"end\" font-size=\"12\">"
      << label_number(y_hi) << "</text>\n";
  out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 16 << "\" text-anchor=\"middle\" font-size=\"13\">"
      << escape(x_label) << "</text>\n";
  out << "<text x=\"18\" y=\"" << top + plot_h / 2 << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
      << top + plot_h / 2 << ")\">" << escape(y_label) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const PlotSeries& s = series[k];
    const char* colour = palette[k % 4];
    out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1\" points=\"";
    const std::size_t n = std::min(s.x.size(), s.y.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (i) out << ' ';
      out << fixed(px(s.x[i]), 2) << ',' << fixed(py(s.y[i]), 2);
    }
    out << "\"/>\n";
    out << "<text x=\"" << left + plot_w - 4 << "\" y=\"" << top + 16 + 16 * static_cast<double>(k)
        << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << colour << "\">" << escape(s.label) << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace duet::lab
