#include "duet/tsa.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <sstream>

#include "duet/kernels.hpp"

namespace duet::tsa {

namespace {

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
};

Range range_of(std::span<const double> values) {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return {*lo, *hi};
}

double mean_of(std::span<const double> values) {
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double sd_of(std::span<const double> values) {
  const double mean = mean_of(values);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size()));
}

void require_finite(std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) throw AnalysisError("series contains non-finite values");
  }
}

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

// Distances below this are numerically indistinguishable from zero.
double resolution_of(std::span<const double> values) {
  const Range r = range_of(values);
  return 1e-12 * std::max({r.width(), std::abs(r.lo), std::abs(r.hi)});
}

}  // namespace

const char* rule_name(DelayResult::Rule rule) {
  switch (rule) {
    case DelayResult::Rule::first_minimum: return "first_minimum";
    case DelayResult::Rule::autocorrelation: return "autocorrelation";
    case DelayResult::Rule::max_lag: return "max_lag";
  }
  return "?";
}

std::vector<double> mutual_information_curve(std::span<const double> values, std::size_t max_lag) {
  const std::size_t n = values.size();
  if (n < 2 || max_lag >= n) throw AnalysisError("series too short for the requested lags");
  require_finite(values);
  const Range r = range_of(values);
  if (!(r.width() > 0.0)) throw AnalysisError("zero-variance series");

  const auto bins = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
  std::vector<std::uint32_t> bin(n);
  for (std::size_t t = 0; t < n; ++t) {
    const auto b = static_cast<std::size_t>((values[t] - r.lo) / r.width() * static_cast<double>(bins));
    bin[t] = static_cast<std::uint32_t>(std::min(b, bins - 1));
  }

  std::vector<double> mi(max_lag + 1, 0.0);
  std::vector<std::uint32_t> joint(bins * bins);
  std::vector<std::uint32_t> px(bins);
  std::vector<std::uint32_t> py(bins);
  for (std::size_t lag = 0; lag <= max_lag; ++lag) {
    std::fill(joint.begin(), joint.end(), 0);
    std::fill(px.begin(), px.end(), 0);
    std::fill(py.begin(), py.end(), 0);
    const std::size_t pairs = n - lag;
    for (std::size_t t = 0; t < pairs; ++t) {
      ++joint[bin[t] * bins + bin[t + lag]];
      ++px[bin[t]];
      ++py[bin[t + lag]];
    }
    const double total = static_cast<double>(pairs);
    double sum = 0.0;
    for (std::size_t a = 0; a < bins; ++a) {
      if (px[a] == 0) continue;
      for (std::size_t b = 0; b < bins; ++b) {
        const std::uint32_t c = joint[a * bins + b];
        if (c == 0) continue;
        const double pab = c / total;
        sum += pab * std::log(c * total / (static_cast<double>(px[a]) * static_cast<double>(py[b])));
      }
    }
    mi[lag] = sum;
  }
  return mi;
}

DelayResult mutual_information_delay(const TimeSeries& series, std::size_t max_lag, const DelayOptions& options) {
  const auto& v = series.values;
  if (max_lag < 1) throw AnalysisError("max_lag must be at least 1");
  if (v.size() < 10 * max_lag) throw AnalysisError("series shorter than 10 * max_lag");
  DelayResult result;
  result.mutual_information = mutual_information_curve(v, max_lag);
  const auto& mi = result.mutual_information;

  const double mean = mean_of(v);
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  std::optional<std::size_t> acf_lag;
  for (std::size_t lag = 1; lag <= max_lag && !acf_lag; ++lag) {
    double cov = 0.0;
    for (std::size_t t = 0; t + lag < v.size(); ++t) cov += (v[t] - mean) * (v[t + lag] - mean);
    if (cov / var < std::exp(-1.0)) acf_lag = lag;
  }
  // Decorrelated after one sample (maps, noise): nothing for MI to resolve.
  if (acf_lag == 1u) {
    result.delay = 1;
    result.rule = DelayResult::Rule::autocorrelation;
    return result;
  }

  const std::size_t w = std::max<std::size_t>(options.minimum_window, 1);
  for (std::size_t lag = 1; lag + w <= max_lag; ++lag) {
    if (!(mi[lag] < mi[lag - 1])) continue;
    const auto next = mi.begin() + static_cast<std::ptrdiff_t>(lag + 1);
    if (std::all_of(next, next + static_cast<std::ptrdiff_t>(w), [&](double m) { return m >= mi[lag]; })) {
      result.delay = lag;
      result.rule = DelayResult::Rule::first_minimum;
      return result;
    }
  }
  if (acf_lag) {
    result.delay = *acf_lag;
    result.rule = DelayResult::Rule::autocorrelation;
    return result;
  }
  result.delay = max_lag;
  result.rule = DelayResult::Rule::max_lag;
  return result;
}

Embedding delay_embed(const TimeSeries& series, std::size_t dim, std::size_t delay) {
  const auto& v = series.values;
  if (dim == 0 || delay == 0) throw AnalysisError("embedding needs dim >= 1 and delay >= 1");
  const std::size_t span = (dim - 1) * delay;
  if (v.size() <= span) throw AnalysisError("insufficient length for the requested embedding");
  Embedding e;
  e.dim = dim;
  e.delay = delay;
  e.count = v.size() - span;
  e.coords.resize(e.count * dim);
  for (std::size_t t = 0; t < e.count; ++t) {
    for (std::size_t k = 0; k < dim; ++k) e.coords[t * dim + k] = v[t + k * delay];
  }
  return e;
}

std::optional<double> mean_period(std::span<const double> values) {
  if (values.size() < 3) return std::nullopt;
  const double mean = mean_of(values);
  std::vector<std::size_t> crossings;
  bool above = values[0] >= mean;
  for (std::size_t t = 1; t < values.size(); ++t) {
    const bool now = values[t] >= mean;
    if (now != above) crossings.push_back(t);
    above = now;
  }
  if (crossings.size() < 3) return std::nullopt;
  const double interval =
      static_cast<double>(crossings.back() - crossings.front()) / static_cast<double>(crossings.size() - 1);
  return 2.0 * interval;
}

namespace {

std::optional<Neighbour> nearest_above(std::span<const double> values, std::size_t dim, std::size_t delay,
                                       std::size_t query, std::size_t candidates, std::size_t theiler,
                                       double min_sq_distance, std::vector<double>& scratch) {
  scratch.resize(candidates);
  kernels::lagged_sq_distances(values, dim, delay, query, scratch);
  std::optional<Neighbour> best;
  for (std::size_t j = 0; j < candidates; ++j) {
    const std::size_t gap = j > query ? j - query : query - j;
    if (gap <= theiler) continue;
    const double d = scratch[j];
    if (d <= min_sq_distance) continue;
    if (!best || d < best->sq_distance) best = Neighbour{j, d};
  }
  return best;
}

}  // namespace

std::optional<Neighbour> nearest_neighbour(std::span<const double> values, std::size_t dim, std::size_t delay,
                                           std::size_t query, std::size_t candidates, std::size_t theiler,
                                           std::vector<double>& scratch) {
  return nearest_above(values, dim, delay, query, candidates, theiler, 0.0, scratch);
}

FnnResult false_nearest_neighbors(const TimeSeries& series, std::size_t delay, std::size_t max_dim,
                                  const FnnOptions& options) {
  const auto& v = series.values;
  if (delay == 0 || max_dim == 0) throw AnalysisError("FNN needs delay >= 1 and max_dim >= 1");
  require_finite(v);
  const double sd = sd_of(v);
  if (!(sd > 0.0)) throw AnalysisError("zero-variance series");

  FnnResult result;
  result.theiler = options.theiler.value_or(delay);
  // Exact repeats (periodic series) differ only by rounding; they are not neighbours.
  const double resolution = resolution_of(v);
  std::vector<double> scratch;
  for (std::size_t m = 1; m <= max_dim; ++m) {
    const std::size_t next_offset = m * delay;
    if (v.size() <= next_offset || v.size() - next_offset < options.min_points) {
      std::ostringstream msg;
      msg << "too few embedded points for FNN statistics at dimension " << m << " (need " << options.min_points
          << ")";
      throw AnalysisError(msg.str());
    }
    const std::size_t points = v.size() - next_offset;
    const std::size_t stride = ceil_div(points, std::max<std::size_t>(options.max_queries, 1));
    std::size_t tested = 0;
    std::size_t false_count = 0;
    for (std::size_t q = 0; q < points; q += stride) {
      const auto nn = nearest_above(v, m, delay, q, points, result.theiler, resolution * resolution, scratch);
      if (!nn) continue;
      const double r = std::sqrt(nn->sq_distance);
      const double extra = std::abs(v[q + next_offset] - v[nn->index + next_offset]);
      const bool is_false = extra / r > options.rtol || std::sqrt(nn->sq_distance + extra * extra) / sd > options.atol;
      ++tested;
      if (is_false) ++false_count;
    }
    if (tested == 0) throw AnalysisError("no admissible neighbours for FNN");
    const double fraction = static_cast<double>(false_count) / static_cast<double>(tested);
    result.fractions.push_back(fraction);
    if (!result.embedding_dim && fraction < options.threshold) result.embedding_dim = m;
  }
  return result;
}

LyapunovResult largest_lyapunov(const TimeSeries& series, std::size_t dim, std::size_t delay,
                                const LyapunovOptions& options) {
  const auto& v = series.values;
  if (dim == 0 || delay == 0) throw AnalysisError("Lyapunov estimate needs dim >= 1 and delay >= 1");
  if (!(series.dt > 0.0)) throw AnalysisError("sampling interval must be positive");
  require_finite(v);
  const std::size_t span = (dim - 1) * delay;
  if (v.size() <= span || v.size() - span < options.min_points) throw AnalysisError("insufficient data");
  const std::size_t points = v.size() - span;
  const std::size_t horizon = options.horizon.value_or(10 * delay);
  if (horizon < 2 || points <= horizon + 1) throw AnalysisError("insufficient data");
  const std::size_t usable = points - horizon;

  LyapunovResult result;
  if (options.theiler) {
    result.theiler = *options.theiler;
  } else if (const auto period = mean_period(v)) {
    result.theiler = static_cast<std::size_t>(std::ceil(*period));
  } else {
    result.theiler = delay;
  }

  const double resolution = resolution_of(v);
  const double log_resolution = std::log(resolution);

  std::vector<double> log_sum(horizon + 1, 0.0);
  std::vector<double> scratch;
  const std::size_t stride = ceil_div(usable, std::max<std::size_t>(options.max_references, 1));
  for (std::size_t j = 0; j < usable; j += stride) {
    const auto nn = nearest_above(v, dim, delay, j, usable, result.theiler, resolution * resolution, scratch);
    if (!nn) continue;
    for (std::size_t i = 0; i <= horizon; ++i) {
      double sq = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        const double diff = v[j + i + k * delay] - v[nn->index + i + k * delay];
        sq += diff * diff;
      }
      const double d = std::sqrt(sq);
      log_sum[i] += d > resolution ? std::log(d) : log_resolution;
    }
    ++result.pairs;
  }
  if (result.pairs < options.min_pairs) throw AnalysisError("insufficient data");

  result.divergence.resize(horizon + 1);
  for (std::size_t i = 0; i <= horizon; ++i) result.divergence[i] = log_sum[i] / static_cast<double>(result.pairs);

  result.fit_end = std::max<std::size_t>(1, static_cast<std::size_t>(static_cast<double>(horizon) * options.fit_fraction));
  const double count = static_cast<double>(result.fit_end + 1);
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i <= result.fit_end; ++i) {
    const double x = static_cast<double>(i);
    const double y = result.divergence[i];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  result.exponent = slope / series.dt;
  return result;
}

DeterminismResult determinism_test(const TimeSeries& series, std::size_t dim, std::size_t delay,
                                   std::size_t boxes_per_axis) {
  if (boxes_per_axis < 2) throw AnalysisError("need at least 2 boxes per axis");
  if (std::pow(static_cast<double>(boxes_per_axis), static_cast<double>(dim)) > 1e18) {
    throw AnalysisError("too many boxes for the embedding dimension");
  }
  require_finite(series.values);
  const Embedding e = delay_embed(series, dim, delay);

  std::vector<Range> bounds(dim, Range{INFINITY, -INFINITY});
  for (std::size_t t = 0; t < e.count; ++t) {
    for (std::size_t k = 0; k < dim; ++k) {
      bounds[k].lo = std::min(bounds[k].lo, e.coords[t * dim + k]);
      bounds[k].hi = std::max(bounds[k].hi, e.coords[t * dim + k]);
    }
  }
  for (const Range& b : bounds) {
    if (!(b.width() > 0.0)) throw AnalysisError("degenerate embedding: all points in one box");
  }

  std::vector<std::uint64_t> box(e.count);
  for (std::size_t t = 0; t < e.count; ++t) {
    std::uint64_t key = 0;
    for (std::size_t k = dim; k-- > 0;) {
      const double unitized = (e.coords[t * dim + k] - bounds[k].lo) / bounds[k].width();
      const auto c = std::min(static_cast<std::size_t>(unitized * static_cast<double>(boxes_per_axis)),
                              boxes_per_axis - 1);
      key = key * boxes_per_axis + c;
    }
    box[t] = key;
  }

  struct Resultant {
    std::vector<double> sum;
    std::size_t passes = 0;
  };
  std::map<std::uint64_t, Resultant> cells;
  std::vector<double> step(dim);
  DeterminismResult result;
  for (std::size_t t0 = 0; t0 < e.count;) {
    std::size_t t1 = t0;
    while (t1 + 1 < e.count && box[t1 + 1] == box[t0]) ++t1;
    if (t0 >= 1 && t1 + 1 < e.count) {
      double len = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        step[k] = e.coords[(t1 + 1) * dim + k] - e.coords[(t0 - 1) * dim + k];
        len += step[k] * step[k];
      }
      len = std::sqrt(len);
      if (len > 0.0) {
        Resultant& cell = cells[box[t0]];
        if (cell.sum.empty()) cell.sum.assign(dim, 0.0);
        for (std::size_t k = 0; k < dim; ++k) cell.sum[k] += step[k] / len;
        ++cell.passes;
        ++result.passes;
      }
    }
    t0 = t1 + 1;
  }
  if (result.passes == 0) throw AnalysisError("degenerate embedding: no complete passes through any box");

  double resultant_total = 0.0;
  for (const auto& [key, cell] : cells) {
    double sq = 0.0;
    for (double s : cell.sum) sq += s * s;
    resultant_total += std::sqrt(sq);
  }
  result.occupied_boxes = cells.size();
  result.k = std::min(1.0, resultant_total / static_cast<double>(result.passes));
  return result;
}

AnalysisReport analyze(const TimeSeries& series, const AnalysisOptions& options) {
  AnalysisReport report;
  report.samples = series.values.size();
  report.dt = series.dt;
  const std::size_t max_lag = std::max<std::size_t>(1, std::min(options.max_lag, series.values.size() / 10));
  report.delay = mutual_information_delay(series, max_lag, options.delay);
  const std::size_t delay = report.delay.delay;
  report.fnn = false_nearest_neighbors(series, delay, options.max_dim, options.fnn);
  report.embedding_dim = report.fnn.embedding_dim.value_or(options.max_dim);
  report.lyapunov = largest_lyapunov(series, report.embedding_dim, delay, options.lyapunov);
  report.determinism = determinism_test(series, report.embedding_dim, delay, options.boxes_per_axis);
  report.classification = report.lyapunov.exponent > options.chaos_threshold ? "chaotic" : "non-chaotic";
  return report;
}

}  // namespace duet::tsa
