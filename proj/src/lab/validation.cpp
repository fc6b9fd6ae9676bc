#include "duet/lab/validation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "duet/ctrnn.hpp"
#include "duet/lab/config.hpp"
#include "duet/synthetic.hpp"
#include "duet/trial.hpp"
#include "duet/tsa.hpp"

namespace duet::lab {

bool Check::passed() const {
  if (error || !std::isfinite(measured)) return false;
  switch (kind) {
    case Kind::within: return std::abs(measured - target) <= tolerance;
    case Kind::at_least: return measured >= target;
    case Kind::at_most: return measured <= target;
  }
  return false;
}

bool all_passed(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed(); });
}

namespace {

constexpr std::uint64_t kNoiseSeed = 7;
constexpr std::uint64_t kShuffleSeed = 11;

Check measure(std::string name, Check::Kind kind, double target, double tolerance,
              const std::function<double()>& body) {
  Check c{std::move(name), kind, NAN, target, tolerance, {}, false};
  try {
    c.measured = body();
  } catch (const std::exception& e) {
    c.error = true;
    c.note = e.what();
  }
  return c;
}

// Neuron 1 of a single isolated neuron relaxing from rest to its fixed point.
tsa::TimeSeries relaxation_series() {
  CtrnnParams p;
  p.n = 1;
  p.weights[0][0] = 2.0;
  p.biases[0] = -1.5;
  p.taus[0] = 20.0;
  p.output_gains = {1.0, 1.0};
  p.pruned_output_2 = 0.5;
  TrialConfig config;
  config.duration = 300.0;
  config.record_stride = 1;
  const TrialRecord record = run_isolated(p, config);
  tsa::TimeSeries series;
  series.dt = config.dt;
  for (const TrialRow& row : record.rows) series.values.push_back(row.agents[0].s[0]);
  return series;
}

double chosen_dim(const tsa::FnnResult& fnn) { return fnn.embedding_dim ? static_cast<double>(*fnn.embedding_dim) : 0.0; }

}  // namespace

std::vector<Check> run_validation(bool force_fail) {
  using K = Check::Kind;
  const auto sine = synthetic::sine(10000, 100.0);
  const auto noise = synthetic::white_noise(5000, kNoiseSeed);
  const auto logistic = synthetic::logistic_map(5000);
  const auto henon = synthetic::henon_map(5000);
  const auto lorenz = synthetic::lorenz_x(50000);
  std::size_t sine_delay = 1;

  std::vector<Check> checks;
  checks.push_back(measure("delay/sine-100-per-period", K::within, 25.0, 5.0, [&] {
    sine_delay = tsa::mutual_information_delay(sine, 100).delay;
    return static_cast<double>(sine_delay);
  }));
  checks.push_back(measure("delay/white-noise", K::within, 1.0, 0.0, [&] {
    return static_cast<double>(tsa::mutual_information_delay(noise, 100).delay);
  }));
  checks.push_back(measure("embed/count-dim3-delay7-n1000", K::within, 986.0, 0.0, [&] {
    tsa::TimeSeries s;
    s.values.assign(1000, 0.0);
    return static_cast<double>(tsa::delay_embed(s, 3, 7).count);
  }));
  checks.push_back(measure("fnn/sine-dim", K::within, 2.0, 0.0, [&] {
    return chosen_dim(tsa::false_nearest_neighbors(sine, sine_delay, 6));
  }));
  checks.push_back(measure("fnn/lorenz-x-dim", K::within, 3.0, 0.0, [&] {
    const auto delay = tsa::mutual_information_delay(lorenz, 100).delay;
    return chosen_dim(tsa::false_nearest_neighbors(lorenz, delay, 5));
  }));
  checks.push_back(measure("fnn/white-noise-min-fraction", K::at_least, 0.01, 0.0, [&] {
    const auto fnn = tsa::false_nearest_neighbors(noise, 1, 6);
    return *std::min_element(fnn.fractions.begin(), fnn.fractions.end());
  }));
  checks.push_back(measure("lle/logistic-r4", K::within, std::numbers::ln2, 0.05, [&] {
    return tsa::largest_lyapunov(logistic, 1, 1).exponent;
  }));
  checks.push_back(measure("lle/sine", K::within, 0.0, 0.02, [&] {
    return tsa::largest_lyapunov(sine, 2, sine_delay).exponent;
  }));
  checks.push_back(measure("lle/ctrnn-relaxation", K::at_most, 0.0, 0.0, [&] {
    return tsa::largest_lyapunov(relaxation_series(), 1, 1).exponent;
  }));
  // Unit vectors are only unit to rounding, so "exactly 1" means to 1e-12.
  checks.push_back(measure("determinism/straight-line", K::within, 1.0, 1e-12, [&] {
    tsa::TimeSeries line;
    for (int t = 0; t < 2000; ++t) line.values.push_back(0.5 * t);
    return tsa::determinism_test(line, 2, 1).k;
  }));
  checks.push_back(measure("determinism/henon", K::at_least, 0.95, 0.0, [&] {
    return tsa::determinism_test(henon, 2, 1).k;
  }));
  checks.push_back(measure("determinism/henon-shuffled", K::at_most, 0.6, 0.0, [&] {
    return tsa::determinism_test(synthetic::shuffled(henon, kShuffleSeed), 2, 1).k;
  }));

  if (force_fail) {
    for (Check& c : checks) c.tolerance = 0.0;
  }
  return checks;
}

void print_checks(std::ostream& out, const std::vector<Check>& checks) {
  for (const Check& c : checks) {
    out << (c.passed() ? "PASS " : "FAIL ") << c.name << "  measured=" << format_double(c.measured);
    switch (c.kind) {
      case Check::Kind::within:
        out << "  target=" << format_double(c.target) << "  tolerance=" << format_double(c.tolerance);
        break;
      case Check::Kind::at_least: out << "  target>=" << format_double(c.target); break;
      case Check::Kind::at_most: out << "  target<=" << format_double(c.target); break;
    }
    if (c.error) out << "  error: " << c.note;
    out << '\n';
  }
}

}  // namespace duet::lab
