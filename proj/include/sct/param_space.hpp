#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace sct {

struct ContinuousParam {
    std::string name;
    double low = 0.0;
    double high = 1.0;
};

struct DiscreteParam {
    std::string name;
    std::vector<std::string> values;  // ordered, distinct, length >= 2

    int bit_width() const;
};

// Mixed discrete/continuous parameter declaration. Immutable once built;
// construction validates names, bounds and enum cardinalities.
class ParameterSpace {
  public:
    ParameterSpace() = default;
    ParameterSpace(std::vector<DiscreteParam> discrete, std::vector<ContinuousParam> continuous);

    const std::vector<DiscreteParam>& discrete() const { return discrete_; }
    const std::vector<ContinuousParam>& continuous() const { return continuous_; }

    int bit_width() const { return total_bits_; }
    std::size_t num_params() const { return discrete_.size() + continuous_.size(); }

  private:
    std::vector<DiscreteParam> discrete_;
    std::vector<ContinuousParam> continuous_;
    int total_bits_ = 0;
};

// One concrete assignment, aligned with the owning space's declaration order:
// discrete[i] is a value index into space.discrete()[i].values,
// continuous[i] is a raw value within space.continuous()[i] bounds.
struct TestVector {
    std::vector<int> discrete;
    std::vector<double> continuous;

    bool operator==(const TestVector&) const = default;
};

struct NormalizedVector {
    std::vector<uint8_t> bits;  // big-endian per param, concatenated in declaration order
    std::vector<double> unit;   // each in [0,1]
};

// Raw values -> bit encoding + unit-cube coordinates. Throws std::domain_error
// naming the parameter if a value is out of range.
NormalizedVector normalize(const ParameterSpace& space, const TestVector& v);

// Inverse of normalize. Bit patterns decoding to an index >= |values| are
// rejected, not wrapped.
TestVector denormalize(const ParameterSpace& space, const std::vector<uint8_t>& bits,
                       const std::vector<double>& unit);

void validate_vector(const ParameterSpace& space, const TestVector& v);

// Symbol lookup helpers for reporting.
std::string discrete_symbol(const ParameterSpace& space, const TestVector& v, std::size_t i);

}  // namespace sct
