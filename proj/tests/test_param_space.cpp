#include "doctest.h"
#include "sct/param_space.hpp"
#include "sct/sampler.hpp"

using namespace sct;

namespace {

ParameterSpace objseg_like_space() {
    return ParameterSpace(
        {{"nlanes", {"2", "4"}}, {"color", {"Black", "Red", "Yellow", "Blue"}}},
        {{"height", 1.9, 2.2}, {"pitch", 10.0, 12.0}, {"focal", 18.0, 22.0}});
}

}  // namespace

TEST_CASE("bit widths follow ceil(log2)") {
    CHECK(DiscreteParam{"a", {"x", "y"}}.bit_width() == 1);
    CHECK(DiscreteParam{"b", {"1", "2", "3"}}.bit_width() == 2);
    CHECK(DiscreteParam{"c", {"1", "2", "3", "4", "5", "6", "7", "8"}}.bit_width() == 3);
    // two params with 2 and 4 values -> 3 bits total
    CHECK(objseg_like_space().bit_width() == 3);
    ParameterSpace single({{"p", {"a", "b"}}}, {});
    CHECK(single.bit_width() == 1);
}

TEST_CASE("construction rejects bad declarations") {
    CHECK_THROWS(ParameterSpace({}, {}));
    CHECK_THROWS(ParameterSpace({{"p", {"only"}}}, {}));
    CHECK_THROWS(ParameterSpace({{"p", {"a", "a"}}}, {}));
    CHECK_THROWS(ParameterSpace({}, {{"x", 1.0, 1.0}}));
    CHECK_THROWS(ParameterSpace({{"x", {"a", "b"}}}, {{"x", 0.0, 1.0}}));
}

TEST_CASE("normalize matches the fixture rows") {
    ParameterSpace space({}, {{"focal", 18.0, 22.0}, {"height", 1.9, 2.2}});
    TestVector v{{}, {18.8, 2.05}};
    const auto norm = normalize(space, v);
    CHECK(norm.unit[0] == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(norm.unit[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("normalize endpoints and enum encoding") {
    auto space = objseg_like_space();
    TestVector v{{1, 2}, {1.9, 12.0, 22.0}};
    const auto norm = normalize(space, v);
    CHECK(norm.unit == std::vector<double>{0.0, 1.0, 1.0});
    // nlanes value "4" is index 1 in 1 bit, color "Yellow" index 2 in 2 bits
    CHECK(norm.bits == std::vector<uint8_t>{1, 1, 0});

    ParameterSpace enum3({{"lanes", {"2", "4", "6"}}}, {});
    // value 4 -> index 1 -> "01"
    CHECK(normalize(enum3, {{1}, {}}).bits == std::vector<uint8_t>{0, 1});
}

TEST_CASE("normalize rejects out-of-range values naming the parameter") {
    auto space = objseg_like_space();
    try {
        normalize(space, {{0, 0}, {1.8, 11.0, 20.0}});
        FAIL("expected domain_error");
    } catch (const std::domain_error& e) {
        CHECK(std::string(e.what()).find("height") != std::string::npos);
    }
}

TEST_CASE("denormalize pitch example and invalid bit patterns") {
    ParameterSpace space({}, {{"pitch", 10.0, 12.0}});
    const auto v = denormalize(space, {}, {1.0 / 3.0});
    CHECK(v.continuous[0] == doctest::Approx(10.66666667).epsilon(1e-6));

    ParameterSpace lanes({{"lanes", {"2", "4"}}}, {});
    CHECK(denormalize(lanes, {0}, {}).discrete[0] == 0);

    ParameterSpace enum3({{"lanes", {"2", "4", "6"}}}, {});
    CHECK_THROWS_AS(denormalize(enum3, {1, 1}, {}), std::domain_error);  // index 3 >= 3
}

TEST_CASE("normalize/denormalize round-trips 1000 random vectors") {
    auto space = objseg_like_space();
    Rng rng(42);
    for (int i = 0; i < 1000; ++i) {
        TestVector v;
        for (const auto& p : space.discrete())
            v.discrete.push_back(static_cast<int>(rng.below(p.values.size())));
        for (const auto& p : space.continuous())
            v.continuous.push_back(rng.uniform(p.low, p.high));
        const auto norm = normalize(space, v);
        const auto back = denormalize(space, norm.bits, norm.unit);
        CHECK(back.discrete == v.discrete);
        for (std::size_t j = 0; j < v.continuous.size(); ++j)
            CHECK(back.continuous[j] ==
                  doctest::Approx(v.continuous[j]).epsilon(1e-12));
        // affine per coordinate: ordering preserved
        const auto norm2 = normalize(space, back);
        CHECK(norm2.unit == norm.unit);
    }
}
