#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sct/coverage.hpp"
#include "sct/sim.hpp"

namespace sct {

struct TestBlock {
    int iterations = 100;
    double duration = 15.0;
    double dt = 0.05;
    StrategyKind strategy = StrategyKind::halton;
    uint64_t seed = 1;
    std::string objective;  // monitor id for +opt strategies
    int k = 3;              // k-wise coverage parameter
};

// A loaded scenario file: parameter space plus the raw JSON from which a
// concrete Scenario is instantiated per test vector ($param: references).
struct ScenarioConfig {
    std::string name;
    ParameterSpace space;
    std::vector<MonitorSpec> monitors;
    TestBlock test;
    nlohmann::json raw;
};

ScenarioConfig parse_scenario(const nlohmann::json& j);
ScenarioConfig load_scenario(const std::string& path);

// Resolves $param references against a test vector and builds the concrete
// world. Throws on invalid networks or unresolvable references.
Scenario instantiate(const ScenarioConfig& cfg, const TestVector& v);

// Builds just the road network of a config (for export).
RoadNetwork instantiate_network(const ScenarioConfig& cfg, const TestVector& v);

struct CampaignOptions {
    std::optional<int> iterations;
    std::optional<uint64_t> seed;
    std::optional<StrategyKind> strategy;
    int jobs = 1;
};

struct ReportRow {
    int64_t index = 0;
    std::string source;  // strategy phase that produced the vector
    TestVector vector;
    IterationReport iter;
};

struct TestReport {
    std::string scenario_name;
    ParameterSpace space;
    std::vector<MonitorSpec> monitors;
    std::string strategy_name;
    uint64_t seed = 0;
    int k = 3;
    std::string config_hash;
    std::vector<ReportRow> rows;
    std::optional<KEpsilonReport> coverage;
    double fail_pct = 0.0;
    int64_t error_count = 0;
    std::map<std::string, double> max_scores;  // per quantitative monitor
};

TestReport run_campaign(const ScenarioConfig& cfg, const CampaignOptions& opts = {});

// 64-bit FNV-1a over the canonical JSON dump, hex-encoded.
std::string config_hash(const nlohmann::json& j);

std::string format_double(double v);  // fixed 6 decimals

void write_report_csv(const TestReport& report, std::ostream& out);
void write_report_json(const TestReport& report, std::ostream& out);

// Reads report.csv plus the sibling report.json back into a TestReport
// (verdict outcomes and scores only; event logs are not round-tripped).
TestReport load_report(const std::string& csv_path);

// Bucketing: "fog:0.5" splits a continuous parameter at thresholds,
// "nlanes" groups a discrete parameter by value.
struct BucketSpec {
    std::string param;
    std::vector<double> thresholds;
};

BucketSpec parse_bucket_spec(const std::string& s);

struct BucketRow {
    std::string label;
    int64_t count = 0;
    int64_t fails = 0;
    int64_t collisions = 0;
    int64_t inactive = 0;
    int64_t errored = 0;
    std::optional<double> mean_gap;  // over passing iterations, when reported
};

std::vector<BucketRow> summarize_by_bucket(const TestReport& report, const BucketSpec& spec);

void write_buckets(const std::vector<BucketRow>& rows, std::ostream& out);

}  // namespace sct
