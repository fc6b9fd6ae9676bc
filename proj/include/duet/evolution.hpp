#pragma once

// Rank-based genetic algorithm over normalized real genomes, and the staged
// 3 -> 2 -> 1 neuron pruning workflow.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "duet/ctrnn.hpp"
#include "duet/random.hpp"
#include "duet/trial.hpp"

namespace duet {

inline constexpr std::size_t kGenomeLength = 21;

// Gene layout:
//   [0, 9)   weights, grouped by receiving neuron: w11 w21 w31 w12 w22 w32 w13 w23 w33
//   [9, 12)  biases
//   [12, 15) time constants
//   [15, 19) input gains g11 g12 g21 g22 (neuron, sensor)
//   [19, 21) output gains
namespace gene {
constexpr std::size_t weight(std::size_t from, std::size_t to) { return to * kMaxNeurons + from; }
constexpr std::size_t bias(std::size_t neuron) { return 9 + neuron; }
constexpr std::size_t tau(std::size_t neuron) { return 12 + neuron; }
constexpr std::size_t input_gain(std::size_t neuron, std::size_t sensor) { return 15 + 2 * neuron + sensor; }
constexpr std::size_t output_gain(std::size_t motor) { return 19 + motor; }
}  // namespace gene

inline constexpr const char* kGeneLayoutName = "w11,w21,w31,w12,w22,w32,w13,w23,w33,b1,b2,b3,tau1,tau2,tau3,gi11,gi12,gi21,gi22,go1,go2";

struct Genome {
  std::array<double, kGenomeLength> genes{};

  bool operator==(const Genome&) const = default;
};

enum class Stage { evolve3, prune2, prune1 };

std::size_t active_neurons(Stage stage);
const char* stage_name(Stage stage);
std::optional<Stage> parse_stage(const std::string& name);

// Which genes may mutate (true) at a given neuron count.
using GeneMask = std::array<bool, kGenomeLength>;
GeneMask mutation_mask(std::size_t active);

// Zeroes the weight and input-gain genes of every pruned neuron.
Genome prune_genome(const Genome& genome, std::size_t active);

// Linear map to parameter ranges; tau = 1 + (gene + 1) / 2 * 49. Neurons
// beyond `active` are pruned with prune_neuron.
CtrnnParams decode(const Genome& genome, std::size_t active = kMaxNeurons);

// parent + magnitude * direction on the free genes, clipped to [-1, 1].
// `direction` must be a unit vector supported on the free genes.
Genome apply_mutation(const Genome& parent, const std::array<double, kGenomeLength>& direction, double magnitude,
                      const GeneMask& mask);

// Isotropic direction over the free genes, magnitude ~ N(0, variance).
Genome mutate(const Genome& parent, Rng& rng, const GeneMask& mask, double variance = 0.2);

Genome random_genome(Rng& rng, const GeneMask& mask);

// Expected offspring per individual under linear ranking with best = eta_plus
// and worst = 2 - eta_plus. Tied fitnesses share the mean of their ranks.
std::vector<double> expected_offspring(std::span<const double> fitnesses, double eta_plus = 1.3);

// One stochastic-universal-sampling pass drawing fitnesses.size() parents.
std::vector<std::size_t> sus_select(std::span<const double> fitnesses, Rng& rng, double eta_plus = 1.3);

struct EvoConfig {
  std::size_t population = 100;
  std::size_t max_generations = 1000;
  double eta_plus = 1.3;
  double mutation_variance = 0.2;
  std::uint64_t master_seed = 1;
  std::size_t trials = 10;
  // Stop as soon as the best fitness in a generation reaches this.
  std::optional<double> fitness_threshold;
  // Stop when best-so-far has not improved by more than plateau_epsilon in this many generations.
  std::size_t plateau_window = 100;
  double plateau_epsilon = 1e-4;
  std::size_t workers = 1;
  TrialConfig trial;
};

struct GenerationStats {
  std::size_t generation = 0;
  double best = 0.0;
  double mean = 0.0;
  double median = 0.0;
  double best_so_far = 0.0;

  bool operator==(const GenerationStats&) const = default;
};

enum class StopReason { max_generations, fitness_threshold, plateau };
const char* stop_reason_name(StopReason reason);

struct EvolutionLog {
  Stage stage = Stage::evolve3;
  std::vector<GenerationStats> generations;
  Genome best;
  double best_fitness = 0.0;
  std::size_t best_generation = 0;
  std::vector<Genome> final_population;
  StopReason stop = StopReason::max_generations;

  bool operator==(const EvolutionLog&) const = default;
};

// The ten (by default) initial-condition seeds shared by a whole generation.
std::vector<std::uint64_t> generation_trial_seeds(const EvoConfig& config, Stage stage, std::size_t generation);

// Fitness of every genome, evaluated in parallel on config.workers threads.
std::vector<double> evaluate_population(const std::vector<Genome>& population, std::size_t active,
                                        std::span<const std::uint64_t> trial_seeds, const EvoConfig& config);

// SUS over the ranked population, then one mutation per slot. No elitism.
std::vector<Genome> evolve_generation(const std::vector<Genome>& population, std::span<const double> fitnesses,
                                      const EvoConfig& config, Stage stage, std::size_t generation);

// Random initial population (no seed) or the seed plus population-1 mutants of it.
std::vector<Genome> initial_population(const EvoConfig& config, Stage stage, const std::optional<Genome>& seed);

// Called once per generation, after evaluation.
using GenerationObserver = std::function<void(const GenerationStats&)>;

EvolutionLog run_evolution(const EvoConfig& config, Stage stage, const std::optional<Genome>& seed = std::nullopt,
                           const GenerationObserver& observer = {});

// Prunes `best` to the neuron count of `stage` (prune2 or prune1) and evolves
// a population seeded from it. prune1 requires the interneuron genes to be
// already zero; violations throw std::invalid_argument.
EvolutionLog prune_and_reseed(const Genome& best, Stage stage, const EvoConfig& config,
                              const GenerationObserver& observer = {});

}  // namespace duet
