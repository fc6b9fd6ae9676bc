#pragma once

// Seeded random streams. Every stream is derived from a master seed plus a
// tuple of integers naming its purpose, so the numbers an individual or trial
// sees never depend on evaluation order or thread count.

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace duet {

using Rng = std::mt19937_64;

// Stream purposes, mixed into the seed sequence.
enum class Stream : std::uint64_t {
  initial_population = 1,
  trial_seeds = 2,
  selection = 3,
  mutation = 4,
  validation = 5,
};

inline Rng make_rng(std::uint64_t master, Stream purpose, std::initializer_list<std::uint64_t> path = {}) {
  std::vector<std::uint32_t> words;
  auto push = [&words](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(master);
  push(static_cast<std::uint64_t>(purpose));
  for (std::uint64_t p : path) push(p);
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

}  // namespace duet
