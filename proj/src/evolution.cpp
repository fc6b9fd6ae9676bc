#include "duet/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "duet/parallel.hpp"

namespace duet {

std::size_t active_neurons(Stage stage) {
  switch (stage) {
    case Stage::evolve3: return 3;
    case Stage::prune2: return 2;
    case Stage::prune1: return 1;
  }
  return 3;
}

const char* stage_name(Stage stage) {
  switch (stage) {
    case Stage::evolve3: return "evolve3";
    case Stage::prune2: return "prune2";
    case Stage::prune1: return "prune1";
  }
  return "?";
}

std::optional<Stage> parse_stage(const std::string& name) {
  if (name == "evolve3") return Stage::evolve3;
  if (name == "prune2") return Stage::prune2;
  if (name == "prune1") return Stage::prune1;
  return std::nullopt;
}

const char* stop_reason_name(StopReason reason) {
  switch (reason) {
    case StopReason::max_generations: return "max_generations";
    case StopReason::fitness_threshold: return "fitness_threshold";
    case StopReason::plateau: return "plateau";
  }
  return "?";
}

namespace {

// Genes zeroed by pruning: every weight touching a pruned neuron and its input gains.
std::array<bool, kGenomeLength> structural_genes_of_pruned(std::size_t active) {
  std::array<bool, kGenomeLength> pruned{};
  for (std::size_t k = active; k < kMaxNeurons; ++k) {
    for (std::size_t other = 0; other < kMaxNeurons; ++other) {
      pruned[gene::weight(k, other)] = true;
      pruned[gene::weight(other, k)] = true;
    }
    if (k < kMotorNeurons) {
      pruned[gene::input_gain(k, 0)] = true;
      pruned[gene::input_gain(k, 1)] = true;
    }
  }
  return pruned;
}

double scale_symmetric(double g, double bound) { return bound * g; }

}  // namespace

GeneMask mutation_mask(std::size_t active) {
  GeneMask free{};
  free.fill(true);
  const auto pruned = structural_genes_of_pruned(active);
  for (std::size_t i = 0; i < kGenomeLength; ++i) free[i] = !pruned[i];
  // A pruned neuron's time constant no longer matters; the interneuron's bias
  // neither. Neuron 2's bias still sets the constant motor-2 output.
  for (std::size_t k = active; k < kMaxNeurons; ++k) {
    free[gene::tau(k)] = false;
    if (k >= kMotorNeurons) free[gene::bias(k)] = false;
  }
  return free;
}

Genome prune_genome(const Genome& genome, std::size_t active) {
  Genome out = genome;
  const auto pruned = structural_genes_of_pruned(active);
  for (std::size_t i = 0; i < kGenomeLength; ++i) {
    if (pruned[i]) out.genes[i] = 0.0;
  }
  return out;
}

CtrnnParams decode(const Genome& genome, std::size_t active) {
  if (active < 1 || active > kMaxNeurons) throw std::invalid_argument("active neuron count must be 1, 2 or 3");
  const auto& g = genome.genes;
  CtrnnParams p;
  p.n = kMaxNeurons;
  for (std::size_t to = 0; to < kMaxNeurons; ++to) {
    for (std::size_t from = 0; from < kMaxNeurons; ++from) {
      p.weights[from][to] = scale_symmetric(g[gene::weight(from, to)], kWeightBound);
    }
    p.biases[to] = scale_symmetric(g[gene::bias(to)], kBiasBound);
    p.taus[to] = kTauMin + (g[gene::tau(to)] + 1.0) / 2.0 * (kTauMax - kTauMin);
  }
  for (std::size_t i = 0; i < kMotorNeurons; ++i) {
    for (std::size_t k = 0; k < kSensors; ++k) {
      p.input_gains[i][k] = scale_symmetric(g[gene::input_gain(i, k)], kInputGainBound);
    }
    p.output_gains[i] = scale_symmetric(g[gene::output_gain(i)], kOutputGainBound);
  }
  if (active <= 2) p = prune_neuron(p, 3);
  if (active <= 1) p = prune_neuron(p, 2);
  return p;
}

Genome apply_mutation(const Genome& parent, const std::array<double, kGenomeLength>& direction, double magnitude,
                      const GeneMask& mask) {
  Genome child = parent;
  for (std::size_t i = 0; i < kGenomeLength; ++i) {
    if (!mask[i]) continue;
    child.genes[i] = std::clamp(parent.genes[i] + magnitude * direction[i], -1.0, 1.0);
  }
  return child;
}

Genome mutate(const Genome& parent, Rng& rng, const GeneMask& mask, double variance) {
  if (std::none_of(mask.begin(), mask.end(), [](bool b) { return b; })) return parent;
  std::normal_distribution<double> standard(0.0, 1.0);
  std::array<double, kGenomeLength> direction{};
  double length = 0.0;
  while (length == 0.0) {
    double sum = 0.0;
    for (std::size_t i = 0; i < kGenomeLength; ++i) {
      direction[i] = mask[i] ? standard(rng) : 0.0;
      sum += direction[i] * direction[i];
    }
    length = std::sqrt(sum);
  }
  for (double& d : direction) d /= length;
  const double magnitude = std::normal_distribution<double>(0.0, std::sqrt(variance))(rng);
  return apply_mutation(parent, direction, magnitude, mask);
}

Genome random_genome(Rng& rng, const GeneMask& mask) {
  Genome g;
  for (std::size_t i = 0; i < kGenomeLength; ++i) {
    const double v = uniform(rng, -1.0, 1.0);
    g.genes[i] = mask[i] ? v : 0.0;
  }
  return g;
}

namespace {

// Indices sorted best first; equal fitnesses keep index order.
std::vector<std::size_t> rank_order(std::span<const double> fitnesses) {
  std::vector<std::size_t> order(fitnesses.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return fitnesses[a] > fitnesses[b]; });
  return order;
}

}  // namespace

std::vector<double> expected_offspring(std::span<const double> fitnesses, double eta_plus) {
  const std::size_t n = fitnesses.size();
  std::vector<double> expected(n, 1.0);
  if (n < 2) return expected;
  const double eta_minus = 2.0 - eta_plus;
  const auto order = rank_order(fitnesses);
  std::vector<double> by_rank(n);
  for (std::size_t r = 0; r < n; ++r) {
    by_rank[r] = eta_plus - (eta_plus - eta_minus) * static_cast<double>(r) / static_cast<double>(n - 1);
  }
  for (std::size_t start = 0; start < n;) {
    std::size_t end = start + 1;
    while (end < n && fitnesses[order[end]] == fitnesses[order[start]]) ++end;
    double share = 0.0;
    for (std::size_t r = start; r < end; ++r) share += by_rank[r];
    share /= static_cast<double>(end - start);
    for (std::size_t r = start; r < end; ++r) expected[order[r]] = share;
    start = end;
  }
  return expected;
}

std::vector<std::size_t> sus_select(std::span<const double> fitnesses, Rng& rng, double eta_plus) {
  const std::size_t n = fitnesses.size();
  std::vector<std::size_t> parents;
  parents.reserve(n);
  if (n == 0) return parents;
  const auto expected = expected_offspring(fitnesses, eta_plus);
  const auto order = rank_order(fitnesses);
  double pointer = uniform(rng, 0.0, 1.0);
  double cumulative = 0.0;
  for (std::size_t idx : order) {
    cumulative += expected[idx];
    while (pointer < cumulative && parents.size() < n) {
      parents.push_back(idx);
      pointer += 1.0;
    }
  }
  // Rounding in the cumulative sum can leave the final pointer just past the end.
  while (parents.size() < n) parents.push_back(order.back());
  return parents;
}

namespace {

std::uint64_t stage_tag(Stage stage) { return static_cast<std::uint64_t>(stage); }

double median_of(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

}  // namespace

std::vector<std::uint64_t> generation_trial_seeds(const EvoConfig& config, Stage stage, std::size_t generation) {
  Rng rng = make_rng(config.master_seed, Stream::trial_seeds, {stage_tag(stage), generation});
  std::vector<std::uint64_t> seeds(config.trials);
  for (auto& s : seeds) s = rng();
  return seeds;
}

std::vector<double> evaluate_population(const std::vector<Genome>& population, std::size_t active,
                                        std::span<const std::uint64_t> trial_seeds, const EvoConfig& config) {
  std::vector<double> fitness(population.size(), 0.0);
  parallel_for(population.size(), config.workers, [&](std::size_t i) {
    fitness[i] = evaluate_solution(decode(population[i], active), trial_seeds, config.trial).fitness;
  });
  return fitness;
}

std::vector<Genome> evolve_generation(const std::vector<Genome>& population, std::span<const double> fitnesses,
                                      const EvoConfig& config, Stage stage, std::size_t generation) {
  const GeneMask mask = mutation_mask(active_neurons(stage));
  Rng selection = make_rng(config.master_seed, Stream::selection, {stage_tag(stage), generation});
  const auto parents = sus_select(fitnesses, selection, config.eta_plus);
  std::vector<Genome> next;
  next.reserve(parents.size());
  for (std::size_t slot = 0; slot < parents.size(); ++slot) {
    Rng rng = make_rng(config.master_seed, Stream::mutation, {stage_tag(stage), generation, slot});
    next.push_back(mutate(population[parents[slot]], rng, mask, config.mutation_variance));
  }
  return next;
}

std::vector<Genome> initial_population(const EvoConfig& config, Stage stage, const std::optional<Genome>& seed) {
  const GeneMask mask = mutation_mask(active_neurons(stage));
  std::vector<Genome> population;
  population.reserve(config.population);
  for (std::size_t i = 0; i < config.population; ++i) {
    Rng rng = make_rng(config.master_seed, Stream::initial_population, {stage_tag(stage), i});
    if (!seed) {
      population.push_back(random_genome(rng, mask));
    } else if (i == 0) {
      population.push_back(*seed);
    } else {
      population.push_back(mutate(*seed, rng, mask, config.mutation_variance));
    }
  }
  return population;
}

EvolutionLog run_evolution(const EvoConfig& config, Stage stage, const std::optional<Genome>& seed,
                           const GenerationObserver& observer) {
  if (config.population < 2 || config.population % 2 != 0) {
    throw std::invalid_argument("population must be even and at least 2");
  }
  if (!(config.eta_plus > 1.0 && config.eta_plus <= 2.0)) {
    throw std::invalid_argument("selection pressure eta_plus must lie in (1, 2]");
  }
  const std::size_t active = active_neurons(stage);
  EvolutionLog log;
  log.stage = stage;
  std::vector<Genome> population = initial_population(config, stage, seed);
  std::vector<double> fitness;
  double last_improvement_value = -1.0;
  std::size_t last_improvement_generation = 0;

  for (std::size_t generation = 0;; ++generation) {
    if (generation > 0) population = evolve_generation(population, fitness, config, stage, generation);
    const auto seeds = generation_trial_seeds(config, stage, generation);
    fitness = evaluate_population(population, active, seeds, config);

    const auto best_it = std::max_element(fitness.begin(), fitness.end());
    const std::size_t best_idx = static_cast<std::size_t>(best_it - fitness.begin());
    GenerationStats stats;
    stats.generation = generation;
    stats.best = *best_it;
    stats.mean = std::accumulate(fitness.begin(), fitness.end(), 0.0) / static_cast<double>(fitness.size());
    stats.median = median_of(fitness);
    if (generation == 0 || stats.best > log.best_fitness) {
      log.best_fitness = stats.best;
      log.best = population[best_idx];
      log.best_generation = generation;
    }
    stats.best_so_far = log.best_fitness;
    log.generations.push_back(stats);
    if (observer) observer(stats);

    if (generation == 0 || log.best_fitness > last_improvement_value + config.plateau_epsilon) {
      last_improvement_value = log.best_fitness;
      last_improvement_generation = generation;
    }
    if (config.fitness_threshold && stats.best >= *config.fitness_threshold) {
      log.stop = StopReason::fitness_threshold;
      break;
    }
    if (generation >= config.max_generations) {
      log.stop = StopReason::max_generations;
      break;
    }
    if (config.plateau_window > 0 && generation - last_improvement_generation >= config.plateau_window) {
      log.stop = StopReason::plateau;
      break;
    }
  }
  log.final_population = std::move(population);
  return log;
}

EvolutionLog prune_and_reseed(const Genome& best, Stage stage, const EvoConfig& config,
                              const GenerationObserver& observer) {
  if (stage == Stage::evolve3) throw std::invalid_argument("prune_and_reseed needs stage prune2 or prune1");
  if (stage == Stage::prune1) {
    const Genome interneuron_removed = prune_genome(best, 2);
    if (interneuron_removed != best) {
      throw std::invalid_argument("prune1 requires a genome whose interneuron was already pruned (run prune2 first)");
    }
  }
  const Genome seed = prune_genome(best, active_neurons(stage));
  return run_evolution(config, stage, seed, observer);
}

}  // namespace duet
