#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sct/param_space.hpp"

namespace sct {

// Seeded generator with platform-stable uniform draws. std::mt19937_64 output
// is specified by the standard; the double conversion is ours so that streams
// are reproducible independent of library distributions.
class Rng {
  public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }
    uint64_t next_u64() { return engine_(); }

    // Uniform integer in [0, n) by rejection, bias-free.
    uint64_t below(uint64_t n);

    // Standard normal via Box-Muller (deterministic draw order).
    double gaussian();

  private:
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

enum class StrategyKind { random, halton, random_opt, halton_opt };

enum class OptObjective { maximize, minimize };

struct Strategy {
    StrategyKind kind = StrategyKind::halton;
    OptObjective objective = OptObjective::maximize;
    int budget = 100;
    int base_count = 85;
    int top_m = 5;
    int sa_iters = 3;

    bool has_opt() const {
        return kind == StrategyKind::random_opt || kind == StrategyKind::halton_opt;
    }
    StrategyKind base_kind() const {
        return kind == StrategyKind::random_opt ? StrategyKind::random
             : kind == StrategyKind::halton_opt ? StrategyKind::halton
                                                : kind;
    }
    void validate() const;
};

StrategyKind parse_strategy_kind(const std::string& s);
std::string strategy_kind_name(StrategyKind k);

struct SampleMeta {
    StrategyKind source = StrategyKind::halton;
    int64_t index = 0;  // Halton index, RNG draw counter, or SA step counter
    std::optional<double> score;
    bool eval_failed = false;
};

struct SampleSet {
    ParameterSpace space;
    std::vector<TestVector> vectors;
    std::vector<SampleMeta> meta;
};

// Digit reversal of `index` in base `base`, read as a base-b fraction.
// The sequence starts at index 1; index 0 is rejected.
double radical_inverse(int base, int64_t index);

// Component j is radical_inverse(bases[j], index). Bases must be distinct primes.
std::vector<double> halton_point(int64_t index, const std::vector<int>& bases);

// First `count` primes, 2, 3, 5, ... (declaration-order base assignment).
std::vector<int> prime_bases(std::size_t count);

// Base sampling: Halton (indices 1..n) or uniform random for continuous
// coordinates; discrete coordinates always uniform i.i.d. from the seeded
// generator. Deterministic in (space, strategy, seed).
SampleSet sample_mixed(const ParameterSpace& space, const Strategy& strategy, uint64_t seed);

// Evaluator; may throw, which records the candidate as failed-evaluation.
using ScoreFn = std::function<double(const TestVector&)>;

// Simulated-annealing refinement of an already-scored base set. Appends every
// evaluated candidate; output size equals strategy.budget.
SampleSet local_search(const SampleSet& base, const ScoreFn& score_of, const Strategy& strategy,
                       uint64_t seed);

}  // namespace sct
