#include "sct/orchestrator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace sct {

namespace {

using nlohmann::json;

// --- $param resolution -------------------------------------------------------

struct Resolver {
    const ParameterSpace& space;
    const TestVector& vec;

    std::string symbol(const json& v, const std::string& what) const {
        if (v.is_string()) {
            const std::string s = v.get<std::string>();
            if (s.rfind("$param:", 0) == 0) return param_symbol(s.substr(7), what);
            return s;
        }
        throw std::invalid_argument(what + ": expected a string or $param reference");
    }

    double number(const json& v, const std::string& what) const {
        if (v.is_number()) return v.get<double>();
        if (v.is_string()) {
            const std::string s = v.get<std::string>();
            if (s == "inf") return std::numeric_limits<double>::infinity();
            if (s.rfind("$param:", 0) == 0) return param_number(s.substr(7), what);
        }
        throw std::invalid_argument(what + ": expected a number or $param reference");
    }

    int integer(const json& v, const std::string& what) const {
        const double d = number(v, what);
        const int i = static_cast<int>(std::llround(d));
        if (std::abs(d - i) > 1e-9) throw std::invalid_argument(what + ": expected an integer");
        return i;
    }

  private:
    double param_number(const std::string& name, const std::string& what) const {
        const auto& cont = space.continuous();
        for (std::size_t i = 0; i < cont.size(); ++i)
            if (cont[i].name == name) return vec.continuous[i];
        const std::string sym = param_symbol(name, what);
        try {
            std::size_t pos = 0;
            const double d = std::stod(sym, &pos);
            if (pos == sym.size()) return d;
        } catch (...) {
        }
        throw std::invalid_argument(what + ": discrete parameter '" + name +
                                    "' value '" + sym + "' is not numeric");
    }

    std::string param_symbol(const std::string& name, const std::string& what) const {
        const auto& disc = space.discrete();
        for (std::size_t i = 0; i < disc.size(); ++i)
            if (disc[i].name == name) return disc[i].values[vec.discrete[i]];
        const auto& cont = space.continuous();
        for (std::size_t i = 0; i < cont.size(); ++i)
            if (cont[i].name == name) return format_double(vec.continuous[i]);
        throw std::invalid_argument(what + ": unknown parameter '" + name + "'");
    }
};

int resolve_lane(const Resolver& r, const json& v, const std::string& what) {
    if (v.is_string() && !v.get<std::string>().empty()) {
        const std::string s = v.get<std::string>();
        if (s == "sidewalk") return kSidewalk;
        if (s == "-sidewalk") return -kSidewalk;
    }
    return r.integer(v, what);
}

ParameterSpace parse_space(const json& j) {
    std::vector<DiscreteParam> disc;
    std::vector<ContinuousParam> cont;
    if (j.contains("discrete"))
        for (const auto& p : j.at("discrete"))
            disc.push_back({p.at("name").get<std::string>(),
                            p.at("values").get<std::vector<std::string>>()});
    if (j.contains("continuous"))
        for (const auto& p : j.at("continuous"))
            cont.push_back({p.at("name").get<std::string>(), p.at("low").get<double>(),
                            p.at("high").get<double>()});
    return ParameterSpace(std::move(disc), std::move(cont));
}

TestVector probe_vector(const ParameterSpace& space) {
    TestVector v;
    for (std::size_t i = 0; i < space.discrete().size(); ++i) v.discrete.push_back(0);
    for (const auto& p : space.continuous()) v.continuous.push_back(0.5 * (p.low + p.high));
    return v;
}

bool monitor_quantitative(MonitorKind k) { return k != MonitorKind::collision; }

}  // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::string config_hash(const json& j) {
    const std::string s = j.dump();
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ScenarioConfig parse_scenario(const json& j) {
    ScenarioConfig cfg;
    cfg.raw = j;
    cfg.name = j.value("name", "scenario");
    cfg.space = parse_space(j.value("params", json::object()));

    for (const auto& m : j.value("monitors", json::array())) {
        MonitorSpec spec;
        spec.id = m.at("id").get<std::string>();
        spec.kind = parse_monitor_kind(m.at("kind").get<std::string>());
        spec.vehicle = m.at("vehicle").get<std::string>();
        spec.other = m.value("other", "");
        spec.min_d = m.value("min_d", 5.0);
        cfg.monitors.push_back(std::move(spec));
    }

    const json t = j.value("test", json::object());
    cfg.test.iterations = t.value("iterations", 100);
    cfg.test.duration = t.value("duration", 15.0);
    cfg.test.dt = t.value("dt", 0.05);
    cfg.test.strategy = parse_strategy_kind(t.value("strategy", "halton"));
    cfg.test.seed = t.value("seed", uint64_t{1});
    cfg.test.objective = t.value("objective", "");
    cfg.test.k = t.value("k", 3);
    if (cfg.test.iterations < 0) throw std::invalid_argument("test.iterations must be >= 0");
    if (cfg.test.dt <= 0.0 || cfg.test.duration <= 0.0)
        throw std::invalid_argument("test.duration and test.dt must be > 0");

    // Shake out unresolvable references and invalid geometry up front.
    instantiate(cfg, probe_vector(cfg.space));
    return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file '" + path + "'");
    json j;
    in >> j;
    return parse_scenario(j);
}

RoadNetwork instantiate_network(const ScenarioConfig& cfg, const TestVector& v) {
    validate_vector(cfg.space, v);
    const Resolver r{cfg.space, v};
    const json& j = cfg.raw;

    std::map<std::string, RoadElement> elems;
    std::vector<std::string> order;
    for (const auto& rj : j.value("roads", json::array())) {
        RoadElement e;
        e.id = rj.at("id").get<std::string>();
        e.kind = parse_road_kind(rj.at("kind").get<std::string>());
        e.nlanes = r.integer(rj.at("nlanes"), "road '" + e.id + "' nlanes");
        if (e.kind == RoadKind::straight)
            e.length = r.number(rj.at("length"), "road '" + e.id + "' length");
        if (rj.contains("lane_width"))
            e.lane_width = r.number(rj.at("lane_width"), "road '" + e.id + "' lane_width");
        e.validate();
        if (elems.count(e.id)) throw std::invalid_argument("duplicate road id '" + e.id + "'");
        order.push_back(e.id);
        elems.emplace(e.id, std::move(e));
    }
    if (order.empty()) throw std::invalid_argument("scenario needs at least one road");

    RoadNetwork net = RoadNetwork::single(elems.at(order[0]));
    std::map<std::string, bool> placed{{order[0], true}};
    for (const auto& cj : j.value("connections", json::array())) {
        if (!cj.is_array() || cj.size() != 4)
            throw std::invalid_argument("connection entries are [parent, port, child, port]");
        const std::string pid = cj[0].get<std::string>(), pport = cj[1].get<std::string>();
        const std::string cid = cj[2].get<std::string>(), cport = cj[3].get<std::string>();
        if (!placed.count(pid))
            throw std::invalid_argument("connection parent '" + pid + "' is not placed yet");
        if (placed.count(cid))
            throw std::invalid_argument("connection child '" + cid +
                                        "' is already placed (connections must form a tree)");
        if (!elems.count(cid)) throw std::invalid_argument("unknown road '" + cid + "'");
        net = connect(net, {{pid + "." + pport, RoadNetwork::single(elems.at(cid)), cport}});
        placed[cid] = true;
    }

    const auto violations = validate_network(net);
    if (!violations.empty()) {
        std::string msg = "invalid road network:";
        for (const auto& v2 : violations) msg += "\n  " + v2.what;
        throw std::invalid_argument(msg);
    }
    return net;
}

Scenario instantiate(const ScenarioConfig& cfg, const TestVector& v) {
    validate_vector(cfg.space, v);
    const Resolver r{cfg.space, v};
    const json& j = cfg.raw;

    Scenario s;
    s.network = instantiate_network(cfg, v);
    s.monitors = cfg.monitors;
    s.sim.dt = cfg.test.dt;
    s.sim.duration = cfg.test.duration;

    const json w = j.value("world", json::object());
    if (w.contains("light")) s.world.light = r.number(w.at("light"), "world.light");
    if (w.contains("fog")) s.world.fog = r.number(w.at("fog"), "world.fog");
    if (s.world.light < 0.0 || s.world.light > 1.0 || s.world.fog < 0.0 || s.world.fog > 1.0)
        throw std::invalid_argument("world.light and world.fog must be in [0,1]");

    int autonomous = 0;
    for (const auto& aj : j.value("actors", json::array())) {
        ActorSpec a;
        a.id = aj.at("id").get<std::string>();
        const std::string ctx = "actor '" + a.id + "' ";
        a.kind = parse_actor_kind(aj.at("kind").get<std::string>());
        a.road = aj.at("road").get<std::string>();
        a.lane = resolve_lane(r, aj.at("lane"), ctx + "lane");
        a.fraction = r.number(aj.at("fraction"), ctx + "fraction");
        if (aj.contains("advance_m")) a.advance = r.number(aj.at("advance_m"), ctx + "advance_m");
        if (aj.contains("length")) a.length = r.number(aj.at("length"), ctx + "length");
        if (aj.contains("width")) a.width = r.number(aj.at("width"), ctx + "width");
        if (a.length <= 0.0 || a.width <= 0.0)
            throw std::invalid_argument(ctx + "geometry must be positive");
        if (aj.contains("color")) a.color = r.symbol(aj.at("color"), ctx + "color");
        switch (a.kind) {
            case ActorKind::autonomous_vehicle:
                ++autonomous;
                a.controller = aj.at("controller").get<std::string>();
                a.cruise_speed = r.number(aj.at("cruise_speed"), ctx + "cruise_speed");
                a.init_speed = aj.contains("init_speed")
                                   ? r.number(aj.at("init_speed"), ctx + "init_speed")
                                   : 0.0;
                if (aj.contains("perception_range"))
                    a.perception_range =
                        r.number(aj.at("perception_range"), ctx + "perception_range");
                if (aj.contains("reaction_delay"))
                    a.reaction_delay = r.number(aj.at("reaction_delay"), ctx + "reaction_delay");
                break;
            case ActorKind::scripted_vehicle:
                a.cruise_speed = r.number(aj.at("cruise_speed"), ctx + "cruise_speed");
                a.init_speed = aj.contains("init_speed")
                                   ? r.number(aj.at("init_speed"), ctx + "init_speed")
                                   : 0.0;
                break;
            case ActorKind::pedestrian:
                a.speed = r.number(aj.at("speed"), ctx + "speed");
                a.trigger_dist = r.number(aj.at("trigger_dist"), ctx + "trigger_dist");
                a.target_lane = resolve_lane(r, aj.at("target_lane"), ctx + "target_lane");
                break;
        }
        s.actors.push_back(std::move(a));
    }
    if (autonomous != 1)
        throw std::invalid_argument("scenario must have exactly one autonomous vehicle");

    for (const auto& m : s.monitors) {
        const auto known = [&](const std::string& id) {
            return std::any_of(s.actors.begin(), s.actors.end(),
                               [&](const ActorSpec& a) { return a.id == id; });
        };
        if (!known(m.vehicle))
            throw std::invalid_argument("monitor '" + m.id + "' references unknown actor '" +
                                        m.vehicle + "'");
        if ((m.kind == MonitorKind::almost_failing || m.kind == MonitorKind::mean_gap) &&
            !known(m.other))
            throw std::invalid_argument("monitor '" + m.id + "' references unknown actor '" +
                                        m.other + "'");
    }
    return s;
}

TestReport run_campaign(const ScenarioConfig& cfg, const CampaignOptions& opts) {
    TestReport report;
    report.scenario_name = cfg.name;
    report.space = cfg.space;
    report.monitors = cfg.monitors;
    report.seed = opts.seed.value_or(cfg.test.seed);
    report.k = cfg.test.k;
    report.config_hash = config_hash(cfg.raw);

    Strategy strat;
    strat.kind = opts.strategy.value_or(cfg.test.strategy);
    strat.objective = OptObjective::maximize;
    strat.budget = opts.iterations.value_or(cfg.test.iterations);
    if (strat.has_opt()) {
        strat.top_m = 5;
        strat.sa_iters = 3;
        strat.base_count = strat.budget - strat.top_m * strat.sa_iters;
        if (strat.base_count < 1)
            throw std::invalid_argument("+opt strategies need more than " +
                                        std::to_string(strat.top_m * strat.sa_iters) +
                                        " iterations");
        if (cfg.test.objective.empty())
            throw std::invalid_argument("+opt strategies require test.objective");
    } else {
        strat.top_m = 0;
        strat.sa_iters = 0;
        strat.base_count = strat.budget;
    }
    strat.validate();
    report.strategy_name = strategy_kind_name(strat.kind);

    if (!cfg.test.objective.empty()) {
        const bool known = std::any_of(
            cfg.monitors.begin(), cfg.monitors.end(), [&](const MonitorSpec& m) {
                return m.id == cfg.test.objective && monitor_quantitative(m.kind);
            });
        if (!known)
            throw std::invalid_argument("test.objective '" + cfg.test.objective +
                                        "' is not a quantitative monitor");
    }

    if (strat.budget == 0) return report;

    const auto evaluate = [&](const TestVector& v) -> IterationReport {
        try {
            return run_iteration(instantiate(cfg, v));
        } catch (const std::exception& e) {
            IterationReport r;
            r.errored = true;
            r.error = e.what();
            for (const auto& m : cfg.monitors)
                r.verdicts.push_back({m.id, m.kind, Outcome::errored, std::nullopt, e.what()});
            return r;
        }
    };

    Strategy base_strat = strat;
    base_strat.kind = strat.base_kind();
    base_strat.budget = base_strat.base_count = strat.base_count;
    base_strat.top_m = base_strat.sa_iters = 0;
    SampleSet set = sample_mixed(cfg.space, base_strat, report.seed);

    std::vector<IterationReport> reports(set.vectors.size());
    const std::size_t n = set.vectors.size();
    const int jobs = std::max(1, opts.jobs);
    if (jobs == 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) reports[i] = evaluate(set.vectors[i]);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t)
            pool.emplace_back([&] {
                for (std::size_t i; (i = next.fetch_add(1)) < n;)
                    reports[i] = evaluate(set.vectors[i]);
            });
        for (auto& th : pool) th.join();
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (reports[i].errored)
            set.meta[i].eval_failed = true;
        else
            set.meta[i].score =
                cfg.test.objective.empty() ? 0.0 : reports[i].score(cfg.test.objective);
    }

    if (strat.has_opt()) {
        std::vector<IterationReport> sa_reports;
        const auto score_of = [&](const TestVector& v) -> double {
            IterationReport r = evaluate(v);
            sa_reports.push_back(r);
            if (r.errored) throw std::runtime_error(r.error);
            return r.score(cfg.test.objective);
        };
        set = local_search(set, score_of, strat, report.seed);
        reports.insert(reports.end(), sa_reports.begin(), sa_reports.end());
    }

    for (std::size_t i = 0; i < set.vectors.size(); ++i) {
        ReportRow row;
        row.index = static_cast<int64_t>(i);
        row.source = strategy_kind_name(set.meta[i].source);
        row.vector = set.vectors[i];
        row.iter = std::move(reports[i]);
        report.rows.push_back(std::move(row));
    }

    int64_t fails = 0;
    for (const auto& row : report.rows) {
        if (row.iter.errored) {
            ++report.error_count;
            continue;
        }
        if (row.iter.any_fail()) ++fails;
        for (const auto& v : row.iter.verdicts)
            if (v.score) {
                auto [it, fresh] = report.max_scores.emplace(v.id, *v.score);
                if (!fresh) it->second = std::max(it->second, *v.score);
            }
    }
    report.fail_pct = 100.0 * double(fails) / double(report.rows.size());
    report.coverage = k_epsilon_report(set, cfg.test.k);
    return report;
}

// --- serialization -----------------------------------------------------------

void write_report_csv(const TestReport& report, std::ostream& out) {
    out << "index,source";
    for (const auto& p : report.space.discrete()) out << "," << p.name;
    for (const auto& p : report.space.continuous()) out << "," << p.name;
    for (const auto& m : report.monitors) {
        out << "," << m.id << ".outcome";
        if (monitor_quantitative(m.kind)) out << "," << m.id << ".score";
    }
    out << ",duration_ticks\n";
    for (const auto& row : report.rows) {
        out << row.index << "," << row.source;
        for (std::size_t i = 0; i < report.space.discrete().size(); ++i)
            out << "," << report.space.discrete()[i].values[row.vector.discrete[i]];
        for (const double v : row.vector.continuous) out << "," << format_double(v);
        for (const auto& m : report.monitors) {
            const auto it = std::find_if(row.iter.verdicts.begin(), row.iter.verdicts.end(),
                                         [&](const MonitorVerdict& v) { return v.id == m.id; });
            if (it == row.iter.verdicts.end()) {
                out << ",errored";
                if (monitor_quantitative(m.kind)) out << ",";
            } else {
                out << "," << outcome_name(it->outcome);
                if (monitor_quantitative(m.kind))
                    out << "," << (it->score ? format_double(*it->score) : "");
            }
        }
        out << "," << row.iter.duration_ticks << "\n";
    }
}

void write_report_json(const TestReport& report, std::ostream& out) {
    json j;
    j["scenario"] = report.scenario_name;
    j["strategy"] = report.strategy_name;
    j["seed"] = report.seed;
    j["k"] = report.k;
    j["config_hash"] = report.config_hash;
    j["iterations"] = report.rows.size();
    j["no_data"] = report.rows.empty();
    j["fail_pct"] = report.rows.empty() ? 0.0 : std::stod(format_double(report.fail_pct));
    j["error_count"] = report.error_count;
    j["max_scores"] = json::object();
    for (const auto& [id, s] : report.max_scores)
        j["max_scores"][id] = std::stod(format_double(s));

    j["params"] = json::object();
    j["params"]["discrete"] = json::array();
    for (const auto& p : report.space.discrete())
        j["params"]["discrete"].push_back({{"name", p.name}, {"values", p.values}});
    j["params"]["continuous"] = json::array();
    for (const auto& p : report.space.continuous())
        j["params"]["continuous"].push_back(
            {{"name", p.name}, {"low", p.low}, {"high", p.high}});

    j["monitors"] = json::array();
    for (const auto& m : report.monitors)
        j["monitors"].push_back({{"id", m.id}, {"kind", monitor_kind_name(m.kind)}});

    j["coverage"] = json::object();
    if (report.coverage) {
        if (report.coverage->kwise) {
            const auto& k = *report.coverage->kwise;
            j["coverage"]["kwise"] = {{"k", k.k},
                                      {"total_combinations", k.total_combinations},
                                      {"covered", k.covered},
                                      {"covering_family", k.is_covering_family()},
                                      {"missing_count", k.missing.size()}};
        }
        if (report.coverage->dispersion) {
            const auto& d = *report.coverage->dispersion;
            j["coverage"]["dispersion"] = {{"value", std::stod(format_double(d.value))},
                                           {"exact", d.exact}};
        }
    }
    out << j.dump(2) << "\n";
}

TestReport load_report(const std::string& csv_path) {
    namespace fs = std::filesystem;
    fs::path jp = fs::path(csv_path);
    jp.replace_extension(".json");
    std::ifstream jin(jp);
    if (!jin) throw std::runtime_error("cannot open report summary '" + jp.string() + "'");
    json j;
    jin >> j;

    TestReport report;
    report.scenario_name = j.value("scenario", "");
    report.strategy_name = j.value("strategy", "");
    report.seed = j.value("seed", uint64_t{0});
    report.k = j.value("k", 3);
    report.config_hash = j.value("config_hash", "");
    report.fail_pct = j.value("fail_pct", 0.0);
    report.error_count = j.value("error_count", 0);
    report.space = parse_space(j.value("params", json::object()));
    for (const auto& m : j.value("monitors", json::array()))
        report.monitors.push_back({m.at("id").get<std::string>(),
                                   parse_monitor_kind(m.at("kind").get<std::string>()),
                                   "", "", 0.0});

    std::ifstream in(csv_path);
    if (!in) throw std::runtime_error("cannot open report '" + csv_path + "'");
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty report CSV");
    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) header.push_back(cell);
    }
    const auto col = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw std::runtime_error("report CSV lacks column " + name);
        return static_cast<std::size_t>(it - header.begin());
    };

    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        while (cells.size() < header.size()) cells.push_back("");

        ReportRow row;
        row.index = std::stoll(cells[col("index")]);
        row.source = cells[col("source")];
        for (const auto& p : report.space.discrete()) {
            const std::string& sym = cells[col(p.name)];
            const auto it = std::find(p.values.begin(), p.values.end(), sym);
            if (it == p.values.end())
                throw std::runtime_error("unknown value '" + sym + "' for parameter " + p.name);
            row.vector.discrete.push_back(static_cast<int>(it - p.values.begin()));
        }
        for (const auto& p : report.space.continuous())
            row.vector.continuous.push_back(std::stod(cells[col(p.name)]));
        for (const auto& m : report.monitors) {
            MonitorVerdict v;
            v.id = m.id;
            v.kind = m.kind;
            const std::string oc = cells[col(m.id + ".outcome")];
            v.outcome = oc == "pass" ? Outcome::pass
                      : oc == "fail" ? Outcome::fail
                                     : Outcome::errored;
            if (monitor_quantitative(m.kind)) {
                const std::string& sc = cells[col(m.id + ".score")];
                if (!sc.empty()) v.score = std::stod(sc);
            }
            row.iter.verdicts.push_back(std::move(v));
        }
        row.iter.duration_ticks = std::stoll(cells[col("duration_ticks")]);
        row.iter.errored = std::any_of(
            row.iter.verdicts.begin(), row.iter.verdicts.end(),
            [](const MonitorVerdict& v) { return v.outcome == Outcome::errored; });
        report.rows.push_back(std::move(row));
    }
    return report;
}

// --- buckets -----------------------------------------------------------------

BucketSpec parse_bucket_spec(const std::string& s) {
    BucketSpec spec;
    const auto colon = s.find(':');
    spec.param = s.substr(0, colon == std::string::npos ? s.size() : colon);
    if (spec.param.empty()) throw std::invalid_argument("empty bucket spec");
    if (colon != std::string::npos) {
        std::stringstream ss(s.substr(colon + 1));
        std::string cell;
        while (std::getline(ss, cell, ',')) spec.thresholds.push_back(std::stod(cell));
        if (spec.thresholds.empty())
            throw std::invalid_argument("bucket spec '" + s + "' has no thresholds");
        if (!std::is_sorted(spec.thresholds.begin(), spec.thresholds.end()))
            throw std::invalid_argument("bucket thresholds must be ascending");
    }
    return spec;
}

std::vector<BucketRow> summarize_by_bucket(const TestReport& report, const BucketSpec& spec) {
    // Locate the parameter.
    int disc_idx = -1, cont_idx = -1;
    for (std::size_t i = 0; i < report.space.discrete().size(); ++i)
        if (report.space.discrete()[i].name == spec.param) disc_idx = static_cast<int>(i);
    for (std::size_t i = 0; i < report.space.continuous().size(); ++i)
        if (report.space.continuous()[i].name == spec.param) cont_idx = static_cast<int>(i);
    if (disc_idx < 0 && cont_idx < 0)
        throw std::invalid_argument("unknown parameter '" + spec.param + "'");
    if (cont_idx >= 0 && spec.thresholds.empty())
        throw std::invalid_argument("continuous parameter '" + spec.param +
                                    "' needs thresholds, e.g. " + spec.param + ":0.5");

    std::vector<BucketRow> rows;
    if (disc_idx >= 0) {
        for (const auto& v : report.space.discrete()[disc_idx].values)
            rows.push_back({spec.param + "=" + v});
    } else {
        const auto& th = spec.thresholds;
        rows.push_back({spec.param + "<" + format_double(th[0])});
        for (std::size_t i = 1; i < th.size(); ++i)
            rows.push_back({format_double(th[i - 1]) + "<=" + spec.param + "<" +
                            format_double(th[i])});
        rows.push_back({spec.param + ">=" + format_double(th.back())});
    }

    std::vector<double> gap_sum(rows.size(), 0.0);
    std::vector<int64_t> gap_count(rows.size(), 0);
    for (const auto& row : report.rows) {
        std::size_t b;
        if (disc_idx >= 0) {
            b = static_cast<std::size_t>(row.vector.discrete[disc_idx]);
        } else {
            const double x = row.vector.continuous[cont_idx];
            b = 0;
            while (b < spec.thresholds.size() && x >= spec.thresholds[b]) ++b;
        }
        auto& br = rows[b];
        ++br.count;
        if (row.iter.errored) {
            ++br.errored;
            continue;
        }
        bool failed = false;
        for (const auto& v : row.iter.verdicts) {
            if (v.outcome != Outcome::fail) continue;
            failed = true;
            if (v.kind == MonitorKind::collision) ++br.collisions;
            if (v.kind == MonitorKind::distance) ++br.inactive;
        }
        if (failed) {
            ++br.fails;
        } else {
            for (const auto& v : row.iter.verdicts)
                if (v.kind == MonitorKind::mean_gap && v.score) {
                    gap_sum[b] += *v.score;
                    ++gap_count[b];
                }
        }
    }
    for (std::size_t b = 0; b < rows.size(); ++b)
        if (gap_count[b] > 0) rows[b].mean_gap = gap_sum[b] / double(gap_count[b]);
    return rows;
}

void write_buckets(const std::vector<BucketRow>& rows, std::ostream& out) {
    out << "bucket,count,fails,collisions,inactive,errored,mean_gap\n";
    for (const auto& r : rows) {
        out << r.label << "," << r.count << "," << r.fails << "," << r.collisions << ","
            << r.inactive << "," << r.errored << ","
            << (r.mean_gap ? format_double(*r.mean_gap) : "") << "\n";
    }
}

}  // namespace sct
