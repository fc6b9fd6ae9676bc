#pragma once

// Nonlinear time-series analysis: delay selection, delay embedding, false
// nearest neighbours, largest Lyapunov exponent (Rosenstein) and the
// Kaplan-Glass determinism test.

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace duet::tsa {

class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TimeSeries {
  std::vector<double> values;
  double dt = 0.1;
};

// ---------------------------------------------------------------------------
// Delay selection

struct DelayOptions {
  // A local minimum only counts if none of the following lags dips below it;
  // histogram MI is noisy enough to produce spurious one-lag dips.
  std::size_t minimum_window = 5;
};

struct DelayResult {
  std::size_t delay = 1;
  std::vector<double> mutual_information;  // index = lag, 0..max_lag
  enum class Rule { first_minimum, autocorrelation, max_lag } rule = Rule::first_minimum;
};

const char* rule_name(DelayResult::Rule rule);

// Histogram mutual information with ceil(sqrt(N)) equal-width bins.
std::vector<double> mutual_information_curve(std::span<const double> values, std::size_t max_lag);

// Delay 1 when the autocorrelation is already below 1/e at lag 1; otherwise the
// first local minimum of the mutual information, falling back to the first lag
// whose autocorrelation drops below 1/e. Throws on a zero-variance series.
DelayResult mutual_information_delay(const TimeSeries& series, std::size_t max_lag, const DelayOptions& options = {});

// ---------------------------------------------------------------------------
// Embedding

struct Embedding {
  std::size_t dim = 0;
  std::size_t delay = 0;
  std::size_t count = 0;
  std::vector<double> coords;  // row-major, count x dim

  std::span<const double> point(std::size_t i) const { return {coords.data() + i * dim, dim}; }
};

// x_t = (v_t, v_{t+delay}, ..., v_{t+(dim-1)delay}).
Embedding delay_embed(const TimeSeries& series, std::size_t dim, std::size_t delay);

// Mean oscillation period in samples, from zero crossings of the
// mean-subtracted series; nullopt with fewer than three crossings.
std::optional<double> mean_period(std::span<const double> values);

// Index of the nearest embedded point to `query` among points [0, candidates)
// with |j - query| > theiler and nonzero distance. Uses the dispatched kernel.
struct Neighbour {
  std::size_t index = 0;
  double sq_distance = 0.0;
};
std::optional<Neighbour> nearest_neighbour(std::span<const double> values, std::size_t dim, std::size_t delay,
                                           std::size_t query, std::size_t candidates, std::size_t theiler,
                                           std::vector<double>& scratch);

// ---------------------------------------------------------------------------
// False nearest neighbours

struct FnnOptions {
  double rtol = 15.0;
  double atol = 2.0;
  double threshold = 0.01;
  std::size_t min_points = 500;
  // Fractions are estimated on at most this many evenly spaced query points.
  std::size_t max_queries = 4000;
  // Temporal exclusion window; defaults to the delay.
  std::optional<std::size_t> theiler;
};

struct FnnResult {
  std::vector<double> fractions;  // fractions[m - 1] for dimension m
  std::optional<std::size_t> embedding_dim;  // nullopt: not saturated
  std::size_t theiler = 0;
};

FnnResult false_nearest_neighbors(const TimeSeries& series, std::size_t delay, std::size_t max_dim,
                                  const FnnOptions& options = {});

// ---------------------------------------------------------------------------
// Largest Lyapunov exponent

struct LyapunovOptions {
  // Divergence is tracked for this many steps; defaults to 10 * delay.
  std::optional<std::size_t> horizon;
  // The slope is fitted over this leading fraction of the divergence curve.
  double fit_fraction = 1.0 / 3.0;
  // Temporal exclusion window; defaults to the mean period (or the delay when
  // the series has no measurable period).
  std::optional<std::size_t> theiler;
  std::size_t max_references = 4000;
  std::size_t min_points = 1000;
  std::size_t min_pairs = 10;
};

struct LyapunovResult {
  double exponent = 0.0;  // per time unit
  std::vector<double> divergence;  // mean ln distance after i steps
  std::size_t fit_end = 0;  // last index used in the fit
  std::size_t theiler = 0;
  std::size_t pairs = 0;
};

LyapunovResult largest_lyapunov(const TimeSeries& series, std::size_t dim, std::size_t delay,
                                const LyapunovOptions& options = {});

// ---------------------------------------------------------------------------
// Kaplan-Glass determinism

struct DeterminismResult {
  double k = 0.0;
  std::size_t occupied_boxes = 0;
  std::size_t passes = 0;
};

// Partitions the embedding's bounding box into boxes_per_axis^dim cells. Each
// pass through a cell contributes the unit vector from the trajectory point
// just before entry to the point just after exit; k is the pass-weighted mean
// resultant length of those vectors per cell.
DeterminismResult determinism_test(const TimeSeries& series, std::size_t dim, std::size_t delay,
                                   std::size_t boxes_per_axis = 10);

// ---------------------------------------------------------------------------
// Full pipeline

struct AnalysisOptions {
  std::size_t max_lag = 100;
  std::size_t max_dim = 8;
  std::size_t boxes_per_axis = 10;
  // Exponents above this count as chaotic.
  double chaos_threshold = 0.02;
  DelayOptions delay;
  FnnOptions fnn;
  LyapunovOptions lyapunov;
};

struct AnalysisReport {
  std::size_t samples = 0;
  double dt = 0.0;
  DelayResult delay;
  FnnResult fnn;
  std::size_t embedding_dim = 1;  // FNN choice, or max_dim when not saturated
  LyapunovResult lyapunov;
  DeterminismResult determinism;
  std::string classification;  // "chaotic" or "non-chaotic"
};

AnalysisReport analyze(const TimeSeries& series, const AnalysisOptions& options = {});

}  // namespace duet::tsa
