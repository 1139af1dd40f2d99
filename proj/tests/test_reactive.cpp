#include <cmath>

#include "doctest.h"
#include "sct/reactive.hpp"
#include "sct/sampler.hpp"

using namespace sct;

TEST_CASE("map filter over fed input") {
    StreamGraph g;
    auto in = g.input("x");
    std::vector<double> out;
    in.map([](const Value& v) { return Value{as_double(v) * 2.0}; })
        .filter([](const Value& v) { return as_double(v) > 3.0; })
        .for_each([&](const Value& v) { out.push_back(as_double(v)); });
    for (int t = 0; t < 4; ++t) g.advance(t, {{in, Value{double(t)}}});
    CHECK(out == std::vector<double>{4.0, 6.0});
}

TEST_CASE("tick stream fires every tick with the tick index") {
    StreamGraph g;
    std::vector<int64_t> seen;
    g.tick_stream().for_each([&](const Value& v) { seen.push_back(std::get<int64_t>(v)); });
    for (int t = 0; t < 3; ++t) g.advance(t, {});
    CHECK(seen == std::vector<int64_t>{0, 1, 2});
}

TEST_CASE("zip pairs by arrival order") {
    StreamGraph g;
    auto a = g.input("a");
    auto b = g.input("b");
    std::vector<double> out;
    a.zip(b, [](const Value& x, const Value& y) { return Value{as_double(x) + as_double(y)}; })
        .for_each([&](const Value& v) { out.push_back(as_double(v)); });
    // a fires every tick, b only on even ticks: zip consumes queued a values.
    for (int t = 0; t < 4; ++t) {
        std::vector<std::pair<Stream, Value>> in = {{a, Value{double(t)}}};
        if (t % 2 == 0) in.push_back({b, Value{100.0}});
        g.advance(t, in);
    }
    CHECK(out == std::vector<double>{100.0, 101.0});
}

TEST_CASE("combine_latest emits when either side fires, after both have") {
    StreamGraph g;
    auto a = g.input("a");
    auto b = g.input("b");
    std::vector<double> out;
    a.combine_latest(b, [](const Value& x, const Value& y) {
         return Value{10.0 * as_double(x) + as_double(y)};
     }).for_each([&](const Value& v) { out.push_back(as_double(v)); });
    g.advance(0, {{a, Value{1.0}}});            // b never fired: nothing
    g.advance(1, {{b, Value{5.0}}});            // 1,5
    g.advance(2, {{a, Value{2.0}}});            // 2,5
    g.advance(3, {{a, Value{3.0}}, {b, Value{7.0}}});  // 3,7
    CHECK(out == std::vector<double>{15.0, 25.0, 37.0});
}

TEST_CASE("take skip and first") {
    StreamGraph g;
    auto in = g.input("x");
    std::vector<double> t2, s2, f1;
    in.take(2).for_each([&](const Value& v) { t2.push_back(as_double(v)); });
    in.skip(2).for_each([&](const Value& v) { s2.push_back(as_double(v)); });
    in.first().for_each([&](const Value& v) { f1.push_back(as_double(v)); });
    for (int t = 0; t < 5; ++t) g.advance(t, {{in, Value{double(t)}}});
    CHECK(t2 == std::vector<double>{0.0, 1.0});
    CHECK(s2 == std::vector<double>{2.0, 3.0, 4.0});
    CHECK(f1 == std::vector<double>{0.0});
}

TEST_CASE("skip_until excludes the trigger tick, take_until excludes the stop tick") {
    StreamGraph g;
    auto in = g.input("x");
    auto trig = g.input("trig");
    auto stop = g.input("stop");
    std::vector<double> su, tu, both;
    in.skip_until(trig).for_each([&](const Value& v) { su.push_back(as_double(v)); });
    in.take_until(stop).for_each([&](const Value& v) { tu.push_back(as_double(v)); });
    in.skip_until(trig).take_until(stop).for_each(
        [&](const Value& v) { both.push_back(as_double(v)); });
    for (int t = 0; t < 6; ++t) {
        std::vector<std::pair<Stream, Value>> feed = {{in, Value{double(t)}}};
        if (t == 2) feed.push_back({trig, Value{}});
        if (t == 4) feed.push_back({stop, Value{}});
        g.advance(t, feed);
    }
    CHECK(su == std::vector<double>{3.0, 4.0, 5.0});
    CHECK(tu == std::vector<double>{0.0, 1.0, 2.0, 3.0});
    CHECK(both == std::vector<double>{3.0});
}

TEST_CASE("concat queues the second stream and switches after the first completes") {
    StreamGraph g;
    auto in = g.input("pos");
    std::vector<double> pold;
    // The lagged-position idiom: take(1) then the full stream again.
    in.take(1).concat(in).for_each([&](const Value& v) { pold.push_back(as_double(v)); });
    const double pos[] = {0.0, 1.0, 3.0, 6.0};
    for (int t = 0; t < 4; ++t) g.advance(t, {{in, Value{pos[t]}}});
    CHECK(pold == std::vector<double>{0.0, 0.0, 1.0, 3.0});
}

TEST_CASE("distance pipeline: zip lagged positions, abs diff, running sum") {
    StreamGraph g;
    auto pos = g.input("pos");
    auto pold = pos.take(1).concat(pos);
    std::vector<double> dist;
    pos.zip(pold, [](const Value& a, const Value& b) {
           return Value{std::abs(as_double(a) - as_double(b))};
       })
        .sum()
        .for_each([&](const Value& v) { dist.push_back(as_double(v)); });
    const double p[] = {0.0, 1.0, 3.0, 6.0};
    for (int t = 0; t < 4; ++t) g.advance(t, {{pos, Value{p[t]}}});
    CHECK(dist == std::vector<double>{0.0, 1.0, 3.0, 6.0});
}

TEST_CASE("min tracks the running minimum") {
    StreamGraph g;
    auto in = g.input("x");
    std::vector<double> out;
    in.min().for_each([&](const Value& v) { out.push_back(as_double(v)); });
    const double xs[] = {3.0, 5.0, 1.0, 2.0};
    for (int t = 0; t < 4; ++t) g.advance(t, {{in, Value{xs[t]}}});
    CHECK(out == std::vector<double>{3.0, 3.0, 1.0, 1.0});
}

TEST_CASE("default_if_empty resolves at finalize") {
    StreamGraph g;
    auto in = g.input("x");
    std::vector<double> a, b;
    in.filter([](const Value&) { return false; })
        .default_if_empty(Value{-1.0})
        .for_each([&](const Value& v) { a.push_back(as_double(v)); });
    in.default_if_empty(Value{-1.0}).for_each([&](const Value& v) { b.push_back(as_double(v)); });
    for (int t = 0; t < 3; ++t) g.advance(t, {{in, Value{double(t)}}});
    CHECK(a.empty());
    g.finalize();
    CHECK(a == std::vector<double>{-1.0});
    CHECK(b == std::vector<double>{0.0, 1.0, 2.0});
}

TEST_CASE("named streams are logged") {
    StreamGraph g;
    auto in = g.input("x").named("x");
    in.map([](const Value& v) { return Value{as_double(v) + 1.0}; }).named("y");
    for (int t = 0; t < 2; ++t) g.advance(t, {{in, Value{double(t)}}});
    REQUIRE(g.event_log().size() == 4);
    CHECK(g.event_log()[0].stream == "x");
    CHECK(g.event_log()[1].stream == "y");
    CHECK(as_double(g.event_log()[3].value) == doctest::Approx(2.0));
    CHECK(g.event_log_jsonl().find("\"stream\":\"y\"") != std::string::npos);
}

TEST_CASE("usage errors") {
    StreamGraph g;
    auto in = g.input("x");
    g.advance(0, {{in, Value{1.0}}});
    CHECK_THROWS_AS(g.advance(0, {}), std::logic_error);  // repeated tick
    CHECK_THROWS_AS(g.advance(2, {}), std::logic_error);  // gap
    StreamGraph other;
    auto foreign = other.input("y");
    CHECK_THROWS(in.zip(foreign, [](const Value& a, const Value&) { return a; }));
    CHECK_THROWS(g.advance(1, {{in.map([](const Value& v) { return v; }), Value{1.0}}}));
}

TEST_CASE("sum path-length equivalence over random walks") {
    Rng rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(20));
        std::vector<double> pos(n);
        double x = 0.0;
        for (int i = 0; i < n; ++i) {
            x += rng.uniform(-1.0, 1.0);
            pos[i] = x;
        }
        double expect = 0.0;
        for (int i = 1; i < n; ++i) expect += std::abs(pos[i] - pos[i - 1]);

        StreamGraph g;
        auto p = g.input("pos");
        auto pold = p.take(1).concat(p);
        double got = 0.0;
        p.zip(pold, [](const Value& a, const Value& b) {
             return Value{std::abs(as_double(a) - as_double(b))};
         })
            .sum()
            .for_each([&](const Value& v) { got = as_double(v); });
        for (int t = 0; t < n; ++t) g.advance(t, {{p, Value{pos[t]}}});
        CHECK(got == doctest::Approx(expect).epsilon(1e-9));
    }
}
