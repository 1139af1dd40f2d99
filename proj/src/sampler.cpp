#include "sct/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace sct {

uint64_t Rng::below(uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below(0)");
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t v;
    do {
        v = engine_();
    } while (v >= limit);
    return v % n;
}

double Rng::gaussian() {
    if (spare_) {
        const double v = *spare_;
        spare_.reset();
        return v;
    }
    double u1, u2;
    do {
        u1 = uniform();
    } while (u1 <= 0.0);
    u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * M_PI * u2);
    return r * std::cos(2.0 * M_PI * u2);
}

void Strategy::validate() const {
    if (budget < 0 || base_count < 0 || top_m < 0 || sa_iters < 0)
        throw std::invalid_argument("strategy counts must be non-negative");
    if (has_opt()) {
        if (budget != base_count + top_m * sa_iters)
            throw std::invalid_argument("opt strategy requires budget = base_count + top_m * sa_iters");
    } else if (budget != base_count) {
        throw std::invalid_argument("non-opt strategy requires budget = base_count");
    }
}

StrategyKind parse_strategy_kind(const std::string& s) {
    if (s == "random") return StrategyKind::random;
    if (s == "halton") return StrategyKind::halton;
    if (s == "random+opt") return StrategyKind::random_opt;
    if (s == "halton+opt") return StrategyKind::halton_opt;
    throw std::invalid_argument("unknown strategy '" + s + "'");
}

std::string strategy_kind_name(StrategyKind k) {
    switch (k) {
        case StrategyKind::random: return "random";
        case StrategyKind::halton: return "halton";
        case StrategyKind::random_opt: return "random+opt";
        case StrategyKind::halton_opt: return "halton+opt";
    }
    return "?";
}

double radical_inverse(int base, int64_t index) {
    if (base < 2) throw std::domain_error("radical_inverse: base must be >= 2");
    if (index < 1) throw std::domain_error("radical_inverse: index must be >= 1");
    double result = 0.0;
    double inv = 1.0 / base;
    double frac = inv;
    int64_t n = index;
    while (n > 0) {
        result += static_cast<double>(n % base) * frac;
        n /= base;
        frac *= inv;
    }
    return result;
}

std::vector<double> halton_point(int64_t index, const std::vector<int>& bases) {
    std::set<int> distinct(bases.begin(), bases.end());
    if (distinct.size() != bases.size())
        throw std::invalid_argument("halton_point: bases must be distinct");
    std::vector<double> out;
    out.reserve(bases.size());
    for (int b : bases) out.push_back(radical_inverse(b, index));
    return out;
}

std::vector<int> prime_bases(std::size_t count) {
    std::vector<int> primes;
    for (int n = 2; primes.size() < count; ++n) {
        bool prime = true;
        for (int p : primes) {
            if (p * p > n) break;
            if (n % p == 0) {
                prime = false;
                break;
            }
        }
        if (prime) primes.push_back(n);
    }
    return primes;
}

SampleSet sample_mixed(const ParameterSpace& space, const Strategy& strategy, uint64_t seed) {
    if (strategy.has_opt())
        throw std::invalid_argument("sample_mixed expects a base strategy (random or halton)");
    SampleSet set;
    set.space = space;
    Rng rng(seed);
    const auto bases = prime_bases(space.continuous().size());
    for (int i = 0; i < strategy.budget; ++i) {
        TestVector v;
        for (const auto& p : space.discrete())
            v.discrete.push_back(static_cast<int>(rng.below(p.values.size())));
        if (strategy.kind == StrategyKind::halton) {
            const auto unit = halton_point(i + 1, bases);
            for (std::size_t j = 0; j < unit.size(); ++j) {
                const auto& p = space.continuous()[j];
                v.continuous.push_back(p.low + unit[j] * (p.high - p.low));
            }
        } else {
            for (const auto& p : space.continuous())
                v.continuous.push_back(rng.uniform(p.low, p.high));
        }
        set.vectors.push_back(std::move(v));
        set.meta.push_back({strategy.kind, i + 1, std::nullopt, false});
    }
    return set;
}

namespace {

TestVector perturb(const ParameterSpace& space, const TestVector& v, Rng& rng) {
    TestVector out = v;
    for (std::size_t i = 0; i < out.continuous.size(); ++i) {
        const auto& p = space.continuous()[i];
        const double sigma = 0.05 * (p.high - p.low);
        out.continuous[i] = std::clamp(out.continuous[i] + sigma * rng.gaussian(), p.low, p.high);
    }
    for (std::size_t i = 0; i < out.discrete.size(); ++i) {
        if (rng.uniform() < 0.2)
            out.discrete[i] = static_cast<int>(rng.below(space.discrete()[i].values.size()));
    }
    return out;
}

}  // namespace

SampleSet local_search(const SampleSet& base, const ScoreFn& score_of, const Strategy& strategy,
                       uint64_t seed) {
    if (!strategy.has_opt())
        throw std::invalid_argument("local_search requires a +opt strategy");
    for (const auto& m : base.meta)
        if (!m.score && !m.eval_failed)
            throw std::invalid_argument("local_search requires a fully scored base set");

    const bool maximize = strategy.objective == OptObjective::maximize;
    std::vector<std::size_t> order(base.vectors.size());
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double sa = base.meta[a].score.value_or(maximize ? -1e300 : 1e300);
        const double sb = base.meta[b].score.value_or(maximize ? -1e300 : 1e300);
        return maximize ? sa > sb : sa < sb;
    });

    double lo = 1e300, hi = -1e300;
    for (const auto& m : base.meta)
        if (m.score) {
            lo = std::min(lo, *m.score);
            hi = std::max(hi, *m.score);
        }
    const double range = hi - lo;
    const double t0 = (range > 0.0 && std::isfinite(range)) ? 0.1 * range : 1.0;

    SampleSet out = base;
    Rng rng(seed);
    const int chains = std::min<int>(strategy.top_m, static_cast<int>(order.size()));
    for (int c = 0; c < chains; ++c) {
        TestVector current = base.vectors[order[c]];
        double current_score = base.meta[order[c]].score.value_or(maximize ? -1e300 : 1e300);
        double temp = t0;
        for (int step = 0; step < strategy.sa_iters; ++step) {
            const TestVector candidate = perturb(base.space, current, rng);
            SampleMeta meta{strategy.kind, static_cast<int64_t>(out.vectors.size()) + 1,
                            std::nullopt, false};
            bool ok = true;
            double score = 0.0;
            try {
                score = score_of(candidate);
                meta.score = score;
            } catch (const std::exception&) {
                ok = false;
                meta.eval_failed = true;
            }
            out.vectors.push_back(candidate);
            out.meta.push_back(meta);
            if (ok) {
                const double gain = maximize ? score - current_score : current_score - score;
                if (gain >= 0.0 || rng.uniform() < std::exp(gain / temp)) {
                    current = candidate;
                    current_score = score;
                }
            }
            temp *= 0.5;
        }
    }
    return out;
}

}  // namespace sct
