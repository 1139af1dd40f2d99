#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sct/sampler.hpp"

namespace sct {

struct KwiseReport {
    int k = 0;
    int64_t total_combinations = 0;  // C(N_bits, k) * 2^k
    int64_t covered = 0;
    // Each missing entry: bit positions (ascending) and the uncovered pattern,
    // one bit per position.
    std::vector<std::pair<std::vector<int>, std::vector<uint8_t>>> missing;

    bool is_covering_family() const { return missing.empty(); }
};

struct Box {
    std::vector<double> low;
    std::vector<double> high;

    double volume() const;
};

struct DispersionResult {
    double value = 1.0;
    Box witness;
    bool exact = true;
    int64_t probe_budget = 0;  // estimated only
};

// Exhaustive k-wise interaction coverage over fixed-length bit vectors.
KwiseReport kwise_coverage(const std::vector<std::vector<uint8_t>>& bits, int k);

// ceil(2^k * (k ln N - ln delta)): random vectors of this count form a k-wise
// covering family with probability >= 1 - delta.
int64_t covering_family_size(int k, int n_bits, double delta);

// Largest axis-parallel box with point-free interior, d in {1, 2}. Exact.
DispersionResult dispersion_exact(const std::vector<std::vector<double>>& points);

// Randomized lower bound for any dimension: grows maximal empty boxes from
// probe seeds. Deterministic for a fixed seed.
DispersionResult dispersion_estimate(const std::vector<std::vector<double>>& points, int dim,
                                     int64_t probe_budget, uint64_t seed);

struct KEpsilonReport {
    std::optional<KwiseReport> kwise;
    std::optional<DispersionResult> dispersion;
};

// Pooled discrete bit vectors -> k-wise report; pooled continuous unit
// projections -> dispersion (exact for d <= 2, estimated otherwise).
KEpsilonReport k_epsilon_report(const SampleSet& samples, int k,
                                int64_t probe_budget = 20000, uint64_t seed = 0);

}  // namespace sct
