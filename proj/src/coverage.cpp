#include "sct/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace sct {

double Box::volume() const {
    double v = 1.0;
    for (std::size_t i = 0; i < low.size(); ++i) v *= std::max(0.0, high[i] - low[i]);
    return v;
}

namespace {

void for_each_subset(int n, int k, std::vector<int>& current,
                     const std::function<void(const std::vector<int>&)>& fn, int start = 0) {
    if (static_cast<int>(current.size()) == k) {
        fn(current);
        return;
    }
    for (int i = start; i <= n - (k - static_cast<int>(current.size())); ++i) {
        current.push_back(i);
        for_each_subset(n, k, current, fn, i + 1);
        current.pop_back();
    }
}

Box full_cube(int dim) {
    Box b;
    b.low.assign(dim, 0.0);
    b.high.assign(dim, 1.0);
    return b;
}

}  // namespace

KwiseReport kwise_coverage(const std::vector<std::vector<uint8_t>>& bits, int k) {
    if (bits.empty()) throw std::domain_error("kwise_coverage: empty vector list");
    const int n = static_cast<int>(bits.front().size());
    if (k < 1 || k > n) throw std::domain_error("kwise_coverage: k out of range");
    for (const auto& v : bits)
        if (static_cast<int>(v.size()) != n)
            throw std::domain_error("kwise_coverage: ragged bit vectors");

    KwiseReport report;
    report.k = k;
    std::vector<int> subset;
    for_each_subset(n, k, subset, [&](const std::vector<int>& idx) {
        std::vector<bool> seen(1u << k, false);
        for (const auto& v : bits) {
            unsigned pattern = 0;
            for (int i : idx) pattern = (pattern << 1) | v[i];
            seen[pattern] = true;
        }
        for (unsigned p = 0; p < seen.size(); ++p) {
            ++report.total_combinations;
            if (seen[p]) {
                ++report.covered;
            } else {
                std::vector<uint8_t> pat(k);
                for (int b = 0; b < k; ++b) pat[b] = (p >> (k - 1 - b)) & 1;
                report.missing.emplace_back(idx, pat);
            }
        }
    });
    return report;
}

int64_t covering_family_size(int k, int n_bits, double delta) {
    if (n_bits < 2) throw std::domain_error("covering_family_size: N must be >= 2");
    if (k < 1 || k > n_bits) throw std::domain_error("covering_family_size: k out of range");
    if (delta <= 0.0 || delta >= 1.0)
        throw std::domain_error("covering_family_size: delta must be in (0,1)");
    const double bound = std::exp2(k) * (k * std::log(n_bits) - std::log(delta));
    return static_cast<int64_t>(std::ceil(bound));
}

namespace {

DispersionResult dispersion_exact_1d(const std::vector<double>& xs) {
    std::vector<double> sorted = xs;
    sorted.push_back(0.0);
    sorted.push_back(1.0);
    std::sort(sorted.begin(), sorted.end());
    DispersionResult res;
    res.value = 0.0;
    res.witness = full_cube(1);
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
        const double gap = sorted[i + 1] - sorted[i];
        if (gap > res.value) {
            res.value = gap;
            res.witness.low = {sorted[i]};
            res.witness.high = {sorted[i + 1]};
        }
    }
    return res;
}

// Sweep: for every left boundary candidate, add points in increasing x while
// tracking the largest empty y-gap in the open slab. A box's interior is empty
// iff no point lies strictly inside, so sides through point coordinates and
// the domain boundary suffice.
DispersionResult dispersion_exact_2d(const std::vector<std::vector<double>>& points) {
    struct P {
        double x, y;
    };
    std::vector<P> pts;
    pts.reserve(points.size());
    for (const auto& p : points) pts.push_back({p[0], p[1]});
    std::sort(pts.begin(), pts.end(), [](const P& a, const P& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });

    std::vector<double> left_candidates{0.0};
    for (const auto& p : pts) left_candidates.push_back(p.x);
    left_candidates.erase(std::unique(left_candidates.begin(), left_candidates.end()),
                          left_candidates.end());

    DispersionResult res;
    res.value = 0.0;
    res.witness = full_cube(2);

    for (double xl : left_candidates) {
        if (xl >= 1.0) continue;
        std::multiset<double> ys{0.0, 1.0};
        std::multiset<double> gaps{1.0};
        auto insert_y = [&](double y) {
            auto it = ys.insert(y);
            auto above = std::next(it);
            auto below = std::prev(it);
            gaps.erase(gaps.find(*above - *below));
            gaps.insert(*above - y);
            gaps.insert(y - *below);
        };
        auto consider = [&](double xr) {
            const double gap = *gaps.rbegin();
            const double area = (xr - xl) * gap;
            if (area > res.value) {
                res.value = area;
                // Recover the y-interval attaining the max gap.
                double prev = *ys.begin();
                for (auto it = std::next(ys.begin()); it != ys.end(); ++it) {
                    if (*it - prev == gap) {
                        res.witness.low = {xl, prev};
                        res.witness.high = {xr, *it};
                        break;
                    }
                    prev = *it;
                }
            }
        };
        std::size_t i = 0;
        while (i < pts.size() && pts[i].x <= xl) ++i;
        while (i < pts.size()) {
            const double x = pts[i].x;
            consider(x);
            while (i < pts.size() && pts[i].x == x) insert_y(pts[i++].y);
        }
        consider(1.0);
    }
    return res;
}

}  // namespace

DispersionResult dispersion_exact(const std::vector<std::vector<double>>& points) {
    if (points.empty()) {
        DispersionResult res;
        res.value = 1.0;
        res.witness = full_cube(1);
        return res;
    }
    const int dim = static_cast<int>(points.front().size());
    if (dim < 1 || dim > 2) throw std::domain_error("dispersion_exact supports d in {1,2}");
    for (const auto& p : points) {
        if (static_cast<int>(p.size()) != dim)
            throw std::domain_error("dispersion_exact: ragged point list");
        for (double c : p)
            if (c < 0.0 || c > 1.0)
                throw std::domain_error("dispersion_exact: point outside unit cube");
    }
    if (dim == 1) {
        std::vector<double> xs;
        xs.reserve(points.size());
        for (const auto& p : points) xs.push_back(p[0]);
        return dispersion_exact_1d(xs);
    }
    return dispersion_exact_2d(points);
}

DispersionResult dispersion_estimate(const std::vector<std::vector<double>>& points, int dim,
                                     int64_t probe_budget, uint64_t seed) {
    DispersionResult res;
    res.exact = false;
    res.probe_budget = probe_budget;
    res.witness = full_cube(dim);
    if (points.empty()) {
        res.value = 1.0;
        return res;
    }

    Rng rng(seed);
    res.value = 0.0;
    std::vector<double> lo(dim), hi(dim), q(dim);
    auto inside = [&](const std::vector<double>& p) {
        for (int j = 0; j < dim; ++j)
            if (p[j] <= lo[j] || p[j] >= hi[j]) return false;
        return true;
    };
    for (int64_t probe = 0; probe < probe_budget; ++probe) {
        for (int j = 0; j < dim; ++j) {
            q[j] = rng.uniform();
            lo[j] = 0.0;
            hi[j] = 1.0;
        }
        // Shrink: expel each interior point along the cheapest dimension.
        for (bool dirty = true; dirty;) {
            dirty = false;
            for (const auto& p : points) {
                if (!inside(p)) continue;
                int best_j = -1;
                double best_keep = -1.0;
                for (int j = 0; j < dim; ++j) {
                    const double keep = (p[j] > q[j]) ? (p[j] - lo[j]) / (hi[j] - lo[j])
                                                      : (hi[j] - p[j]) / (hi[j] - lo[j]);
                    if (keep > best_keep) {
                        best_keep = keep;
                        best_j = j;
                    }
                }
                if (p[best_j] > q[best_j])
                    hi[best_j] = p[best_j];
                else
                    lo[best_j] = p[best_j];
                dirty = true;
            }
        }
        // Expand each side to maximality.
        for (int j = 0; j < dim; ++j) {
            double new_lo = 0.0, new_hi = 1.0;
            for (const auto& p : points) {
                bool in_others = true;
                for (int m = 0; m < dim && in_others; ++m)
                    if (m != j && (p[m] <= lo[m] || p[m] >= hi[m])) in_others = false;
                if (!in_others) continue;
                if (p[j] <= lo[j]) new_lo = std::max(new_lo, p[j]);
                if (p[j] >= hi[j]) new_hi = std::min(new_hi, p[j]);
            }
            lo[j] = new_lo;
            hi[j] = new_hi;
        }
        double vol = 1.0;
        for (int j = 0; j < dim; ++j) vol *= hi[j] - lo[j];
        if (vol > res.value) {
            res.value = vol;
            res.witness.low = lo;
            res.witness.high = hi;
        }
    }
    return res;
}

KEpsilonReport k_epsilon_report(const SampleSet& samples, int k, int64_t probe_budget,
                                uint64_t seed) {
    if (samples.vectors.empty()) throw std::domain_error("k_epsilon_report: empty sample set");
    KEpsilonReport report;
    if (!samples.space.discrete().empty()) {
        std::vector<std::vector<uint8_t>> bits;
        bits.reserve(samples.vectors.size());
        for (const auto& v : samples.vectors) bits.push_back(normalize(samples.space, v).bits);
        report.kwise = kwise_coverage(bits, std::min(k, samples.space.bit_width()));
    }
    if (!samples.space.continuous().empty()) {
        std::vector<std::vector<double>> unit;
        unit.reserve(samples.vectors.size());
        for (const auto& v : samples.vectors) unit.push_back(normalize(samples.space, v).unit);
        const int dim = static_cast<int>(samples.space.continuous().size());
        report.dispersion = dim <= 2 ? dispersion_exact(unit)
                                     : dispersion_estimate(unit, dim, probe_budget, seed);
    }
    return report;
}

}  // namespace sct
