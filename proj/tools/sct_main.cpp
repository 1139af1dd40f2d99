#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "sct/opendrive.hpp"
#include "sct/orchestrator.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_atomic(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
        out << content;
    }
    fs::rename(tmp, path);
}

// A parameter-space file: either a bare {discrete, continuous} object or a
// scenario file, whose "params" block is used.
sct::ParameterSpace load_space(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open space file '" + path + "'");
    json j;
    in >> j;
    const json& p = j.contains("params") ? j.at("params") : j;
    std::vector<sct::DiscreteParam> disc;
    std::vector<sct::ContinuousParam> cont;
    for (const auto& d : p.value("discrete", json::array()))
        disc.push_back({d.at("name").get<std::string>(),
                        d.at("values").get<std::vector<std::string>>()});
    for (const auto& c : p.value("continuous", json::array()))
        cont.push_back({c.at("name").get<std::string>(), c.at("low").get<double>(),
                        c.at("high").get<double>()});
    return sct::ParameterSpace(std::move(disc), std::move(cont));
}

std::string points_csv(const sct::SampleSet& set) {
    std::ostringstream o;
    o << "index";
    for (const auto& p : set.space.discrete()) o << "," << p.name;
    for (const auto& p : set.space.continuous()) o << "," << p.name;
    o << "\n";
    for (std::size_t i = 0; i < set.vectors.size(); ++i) {
        o << i;
        for (std::size_t d = 0; d < set.space.discrete().size(); ++d)
            o << "," << set.space.discrete()[d].values[set.vectors[i].discrete[d]];
        for (const double v : set.vectors[i].continuous) o << "," << sct::format_double(v);
        o << "\n";
    }
    return o.str();
}

sct::SampleSet load_points(const std::string& path, const sct::ParameterSpace& space) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open points file '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty points file");
    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) header.push_back(cell);
    }
    const auto col = [&](const std::string& name) {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw std::runtime_error("points file lacks column '" + name + "'");
    };
    sct::SampleSet set;
    set.space = space;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        sct::TestVector v;
        for (const auto& p : space.discrete()) {
            const std::string& sym = cells.at(col(p.name));
            const auto it = std::find(p.values.begin(), p.values.end(), sym);
            if (it == p.values.end())
                throw std::runtime_error("unknown value '" + sym + "' for " + p.name);
            v.discrete.push_back(static_cast<int>(it - p.values.begin()));
        }
        for (const auto& p : space.continuous())
            v.continuous.push_back(std::stod(cells.at(col(p.name))));
        set.vectors.push_back(std::move(v));
        set.meta.push_back({});
    }
    return set;
}

json coverage_json(const sct::KEpsilonReport& rep) {
    json j = json::object();
    if (rep.kwise) {
        const auto& k = *rep.kwise;
        json missing = json::array();
        for (const auto& [pos, pat] : k.missing) {
            std::string bits;
            for (const uint8_t b : pat) bits += b ? '1' : '0';
            missing.push_back({{"positions", pos}, {"pattern", bits}});
        }
        j["kwise"] = {{"k", k.k},
                      {"total_combinations", k.total_combinations},
                      {"covered", k.covered},
                      {"covering_family", k.is_covering_family()},
                      {"missing", missing}};
    }
    if (rep.dispersion) {
        const auto& d = *rep.dispersion;
        j["dispersion"] = {{"value", std::stod(sct::format_double(d.value))},
                           {"exact", d.exact},
                           {"witness_low", d.witness.low},
                           {"witness_high", d.witness.high}};
    }
    return j;
}

int cmd_sample(const std::string& space_path, const std::string& strategy, int n, uint64_t seed,
               const std::string& out) {
    const auto space = load_space(space_path);
    const sct::StrategyKind kind = sct::parse_strategy_kind(strategy);
    if (kind != sct::StrategyKind::random && kind != sct::StrategyKind::halton)
        throw std::runtime_error("sample supports the base strategies random and halton");
    sct::Strategy s;
    s.kind = kind;
    s.budget = s.base_count = n;
    s.top_m = s.sa_iters = 0;
    write_atomic(out, points_csv(sct::sample_mixed(space, s, seed)));
    std::cout << "wrote " << n << " samples to " << out << "\n";
    return 0;
}

int cmd_coverage(const std::string& points_path, const std::string& space_path, int k,
                 const std::string& out) {
    const auto space = load_space(space_path);
    const auto set = load_points(points_path, space);
    const auto rep = sct::k_epsilon_report(set, k);
    write_atomic(out, coverage_json(rep).dump(2) + "\n");
    std::cout << "wrote coverage report to " << out << "\n";
    return 0;
}

int cmd_run(const std::string& scenario_path, const sct::CampaignOptions& opts,
            const std::string& out_dir, bool fail_on_violation, bool export_od) {
    const auto cfg = sct::load_scenario(scenario_path);
    const auto report = sct::run_campaign(cfg, opts);

    std::ostringstream csv, js;
    sct::write_report_csv(report, csv);
    sct::write_report_json(report, js);
    write_atomic(fs::path(out_dir) / "report.csv", csv.str());
    write_atomic(fs::path(out_dir) / "report.json", js.str());

    if (export_od) {
        const fs::path od_dir = fs::path(out_dir) / "opendrive";
        fs::create_directories(od_dir);
        for (const auto& row : report.rows) {
            const auto net = sct::instantiate_network(cfg, row.vector);
            sct::export_network(net,
                                (od_dir / ("iter_" + std::to_string(row.index) + ".xodr")).string());
        }
    }

    int64_t fails = 0;
    for (const auto& row : report.rows) fails += row.iter.any_fail() ? 1 : 0;
    std::cout << "campaign " << report.scenario_name << ": " << report.rows.size()
              << " iterations, " << fails << " failing, " << report.error_count << " errored\n"
              << "report written to " << (fs::path(out_dir) / "report.csv").string() << "\n";
    if (fail_on_violation && fails > 0) return 1;
    return 0;
}

int cmd_report(const std::string& in, const std::string& buckets, const std::string& out) {
    const auto report = sct::load_report(in);
    const auto rows = sct::summarize_by_bucket(report, sct::parse_bucket_spec(buckets));
    std::ostringstream o;
    sct::write_buckets(rows, o);
    if (out.empty())
        std::cout << o.str();
    else
        write_atomic(out, o.str());
    return 0;
}

int cmd_export(const std::string& scenario_path, const std::string& vector_spec, int index,
               const std::string& out_dir) {
    const auto cfg = sct::load_scenario(scenario_path);
    sct::TestVector v;
    int64_t label = 0;
    bool is_number = !vector_spec.empty() &&
                     vector_spec.find_first_not_of("0123456789") == std::string::npos;
    if (is_number) {
        // Row index into the scenario's own base sample sequence.
        label = std::stoll(vector_spec);
        sct::Strategy s;
        s.kind = cfg.test.strategy == sct::StrategyKind::random_opt ? sct::StrategyKind::random
                 : cfg.test.strategy == sct::StrategyKind::halton_opt ? sct::StrategyKind::halton
                                                                      : cfg.test.strategy;
        s.budget = s.base_count = static_cast<int>(label) + 1;
        s.top_m = s.sa_iters = 0;
        const auto set = sct::sample_mixed(cfg.space, s, cfg.test.seed);
        v = set.vectors.at(label);
    } else {
        const auto report = sct::load_report(vector_spec);
        label = index;
        v = report.rows.at(index).vector;
    }
    const auto net = sct::instantiate_network(cfg, v);
    const fs::path out =
        fs::path(out_dir) / (cfg.name + "_" + std::to_string(label) + ".xodr");
    fs::create_directories(out_dir);
    sct::export_network(net, out.string());
    std::cout << "wrote " << out.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sct - scenario-based testing for driving controllers"};
    app.set_version_flag("--version", "sct 1.0.0 (config schema 1)");
    app.require_subcommand(1);

    // sample
    auto* sample = app.add_subcommand("sample", "draw parameter-space samples");
    std::string space_path, strategy = "halton", out_path = "points.csv";
    int n = 100;
    uint64_t seed = 1;
    sample->add_option("--space", space_path, "parameter space JSON")->required();
    sample->add_option("--strategy", strategy, "random or halton");
    sample->add_option("--n", n, "number of samples");
    sample->add_option("--seed", seed, "RNG seed");
    sample->add_option("--out", out_path, "output CSV")->required();

    // coverage
    auto* coverage = app.add_subcommand("coverage", "(k,eps) coverage of a point set");
    std::string points_path, cov_space, cov_out = "coverage.json";
    int k = 3;
    coverage->add_option("--points", points_path, "points CSV (from sample)")->required();
    coverage->add_option("--space", cov_space, "parameter space JSON")->required();
    coverage->add_option("--k", k, "k-wise interaction strength");
    coverage->add_option("--out", cov_out, "output JSON")->required();

    // run
    auto* run = app.add_subcommand("run", "run a test campaign");
    std::string scenario_path, out_dir;
    sct::CampaignOptions opts;
    int iterations = -1;
    int64_t run_seed = -1;
    std::string run_strategy;
    bool fail_on_violation = false, export_od = false;
    run->add_option("--scenario", scenario_path, "scenario JSON")->required();
    run->add_option("--iterations", iterations, "override test.iterations");
    run->add_option("--seed", run_seed, "override test.seed");
    run->add_option("--strategy", run_strategy,
                    "override strategy: random, halton, random+opt, halton+opt");
    run->add_option("--jobs", opts.jobs, "parallel iteration workers");
    run->add_option("--out-dir", out_dir, "output directory")->required();
    run->add_flag("--fail-on-violation", fail_on_violation, "exit 1 if any iteration fails");
    run->add_flag("--export-opendrive", export_od, "write one OpenDRIVE file per iteration");

    // report
    auto* report = app.add_subcommand("report", "bucketed summary of a campaign report");
    std::string report_in, buckets, report_out;
    report->add_option("--in", report_in, "report.csv path")->required();
    report->add_option("--buckets", buckets, "bucket spec, e.g. fog:0.5 or nlanes")->required();
    report->add_option("--out", report_out, "output file (default stdout)");

    // export
    auto* exp = app.add_subcommand("export", "export a road network as OpenDRIVE");
    std::string exp_scenario, vector_spec, exp_out = ".";
    int exp_index = 0;
    exp->add_option("--scenario", exp_scenario, "scenario JSON")->required();
    exp->add_option("--vector", vector_spec, "sample row index, or a report.csv path")
        ->required();
    exp->add_option("--index", exp_index, "row index when --vector is a report.csv");
    exp->add_option("--out", exp_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sample->parsed()) return cmd_sample(space_path, strategy, n, seed, out_path);
        if (coverage->parsed()) return cmd_coverage(points_path, cov_space, k, cov_out);
        if (run->parsed()) {
            if (iterations >= 0) opts.iterations = iterations;
            if (run_seed >= 0) opts.seed = static_cast<uint64_t>(run_seed);
            if (!run_strategy.empty()) opts.strategy = sct::parse_strategy_kind(run_strategy);
            return cmd_run(scenario_path, opts, out_dir, fail_on_violation, export_od);
        }
        if (report->parsed()) return cmd_report(report_in, buckets, report_out);
        if (exp->parsed()) return cmd_export(exp_scenario, vector_spec, exp_index, exp_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
