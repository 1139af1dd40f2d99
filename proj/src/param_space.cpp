#include "sct/param_space.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace sct {

int DiscreteParam::bit_width() const {
    int bits = 1;
    while ((1u << bits) < values.size()) ++bits;
    return bits;
}

ParameterSpace::ParameterSpace(std::vector<DiscreteParam> discrete,
                               std::vector<ContinuousParam> continuous)
    : discrete_(std::move(discrete)), continuous_(std::move(continuous)) {
    if (discrete_.empty() && continuous_.empty())
        throw std::invalid_argument("parameter space must declare at least one parameter");
    std::set<std::string> names;
    for (const auto& p : discrete_) {
        if (p.values.size() < 2)
            throw std::invalid_argument("enum parameter '" + p.name + "' needs at least 2 values");
        std::set<std::string> distinct(p.values.begin(), p.values.end());
        if (distinct.size() != p.values.size())
            throw std::invalid_argument("enum parameter '" + p.name + "' has duplicate values");
        if (!names.insert(p.name).second)
            throw std::invalid_argument("duplicate parameter name '" + p.name + "'");
        total_bits_ += p.bit_width();
    }
    for (const auto& p : continuous_) {
        if (!(p.low < p.high))
            throw std::invalid_argument("interval parameter '" + p.name + "' needs low < high");
        if (!names.insert(p.name).second)
            throw std::invalid_argument("duplicate parameter name '" + p.name + "'");
    }
}

void validate_vector(const ParameterSpace& space, const TestVector& v) {
    if (v.discrete.size() != space.discrete().size() ||
        v.continuous.size() != space.continuous().size())
        throw std::domain_error("test vector arity does not match parameter space");
    for (std::size_t i = 0; i < v.discrete.size(); ++i) {
        if (v.discrete[i] < 0 || static_cast<std::size_t>(v.discrete[i]) >= space.discrete()[i].values.size())
            throw std::domain_error("value index out of range for parameter '" +
                                    space.discrete()[i].name + "'");
    }
    for (std::size_t i = 0; i < v.continuous.size(); ++i) {
        const auto& p = space.continuous()[i];
        if (v.continuous[i] < p.low || v.continuous[i] > p.high)
            throw std::domain_error("value out of range for parameter '" + p.name + "'");
    }
}

NormalizedVector normalize(const ParameterSpace& space, const TestVector& v) {
    validate_vector(space, v);
    NormalizedVector out;
    out.bits.reserve(space.bit_width());
    for (std::size_t i = 0; i < v.discrete.size(); ++i) {
        const int w = space.discrete()[i].bit_width();
        for (int b = w - 1; b >= 0; --b)
            out.bits.push_back(static_cast<uint8_t>((v.discrete[i] >> b) & 1));
    }
    out.unit.reserve(v.continuous.size());
    for (std::size_t i = 0; i < v.continuous.size(); ++i) {
        const auto& p = space.continuous()[i];
        out.unit.push_back((v.continuous[i] - p.low) / (p.high - p.low));
    }
    return out;
}

TestVector denormalize(const ParameterSpace& space, const std::vector<uint8_t>& bits,
                       const std::vector<double>& unit) {
    if (static_cast<int>(bits.size()) != space.bit_width())
        throw std::domain_error("bit vector length does not match parameter space");
    if (unit.size() != space.continuous().size())
        throw std::domain_error("unit vector length does not match parameter space");
    TestVector v;
    std::size_t pos = 0;
    for (const auto& p : space.discrete()) {
        const int w = p.bit_width();
        int idx = 0;
        for (int b = 0; b < w; ++b) idx = (idx << 1) | bits[pos++];
        if (static_cast<std::size_t>(idx) >= p.values.size())
            throw std::domain_error("bit pattern decodes to invalid index for parameter '" +
                                    p.name + "'");
        v.discrete.push_back(idx);
    }
    for (std::size_t i = 0; i < unit.size(); ++i) {
        if (unit[i] < 0.0 || unit[i] > 1.0)
            throw std::domain_error("unit coordinate out of [0,1] for parameter '" +
                                    space.continuous()[i].name + "'");
        const auto& p = space.continuous()[i];
        v.continuous.push_back(p.low + unit[i] * (p.high - p.low));
    }
    return v;
}

std::string discrete_symbol(const ParameterSpace& space, const TestVector& v, std::size_t i) {
    return space.discrete().at(i).values.at(static_cast<std::size_t>(v.discrete.at(i)));
}

}  // namespace sct
