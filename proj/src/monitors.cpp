#include "sct/monitors.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "sct/geometry.hpp"

namespace sct {

MonitorKind parse_monitor_kind(const std::string& s) {
    if (s == "collision") return MonitorKind::collision;
    if (s == "distance") return MonitorKind::distance;
    if (s == "collision_speed") return MonitorKind::collision_speed;
    if (s == "almost_failing") return MonitorKind::almost_failing;
    if (s == "mean_gap") return MonitorKind::mean_gap;
    throw std::invalid_argument("unknown monitor kind: " + s);
}

std::string monitor_kind_name(MonitorKind k) {
    switch (k) {
        case MonitorKind::collision: return "collision";
        case MonitorKind::distance: return "distance";
        case MonitorKind::collision_speed: return "collision_speed";
        case MonitorKind::almost_failing: return "almost_failing";
        case MonitorKind::mean_gap: return "mean_gap";
    }
    throw std::logic_error("bad monitor kind");
}

std::string outcome_name(Outcome o) {
    switch (o) {
        case Outcome::pass: return "pass";
        case Outcome::fail: return "fail";
        case Outcome::errored: return "errored";
    }
    throw std::logic_error("bad outcome");
}

struct MonitorSet::Entry {
    MonitorSpec spec;
    // Observed facts, filled by stream actions during the run.
    bool collided = false;
    int64_t collision_tick = -1;
    double collision_rel_speed = 0.0;
    std::optional<double> collision_own_speed;
    double path_length = 0.0;
    std::optional<double> min_gap;
    double gap_sum = 0.0;
    int64_t gap_count = 0;

    MonitorVerdict verdict() const {
        MonitorVerdict v{spec.id, spec.kind, Outcome::pass, std::nullopt, ""};
        std::ostringstream ev;
        switch (spec.kind) {
            case MonitorKind::collision:
                if (collided) {
                    v.outcome = Outcome::fail;
                    ev << "collision at tick " << collision_tick << ", relative speed "
                       << collision_rel_speed << " m/s";
                    v.evidence = ev.str();
                }
                break;
            case MonitorKind::distance:
                if (path_length < spec.min_d) {
                    v.outcome = Outcome::fail;
                    ev << "distance moved " << path_length << " m < " << spec.min_d << " m";
                    v.evidence = ev.str();
                }
                v.score = path_length;
                break;
            case MonitorKind::collision_speed:
                v.score = collision_own_speed.value_or(0.0);
                if (collided) {
                    ev << "collision at tick " << collision_tick;
                    v.evidence = ev.str();
                }
                break;
            case MonitorKind::almost_failing:
                v.score = collided ? 0.0 : (min_gap && *min_gap > 0.0 ? 1.0 / *min_gap : 0.0);
                if (min_gap) {
                    ev << "min gap " << *min_gap << " m";
                    v.evidence = ev.str();
                }
                break;
            case MonitorKind::mean_gap:
                v.score = gap_count > 0 ? gap_sum / double(gap_count) : 0.0;
                break;
        }
        return v;
    }
};

namespace {

const ActorStreams& actor_of(const std::map<std::string, ActorStreams>& actors,
                             const std::string& id, const std::string& monitor) {
    const auto it = actors.find(id);
    if (it == actors.end())
        throw std::invalid_argument("monitor '" + monitor + "' references unknown actor '" + id +
                                    "'");
    return it->second;
}

Value vec_distance(const Value& a, const Value& b) {
    return Value{distance(std::get<Vec2>(a), std::get<Vec2>(b))};
}

}  // namespace

MonitorSet::MonitorSet(const std::vector<MonitorSpec>& specs,
                       const std::map<std::string, ActorStreams>& actors) {
    for (const auto& spec : specs) {
        auto e = std::make_shared<Entry>();
        e->spec = spec;
        const ActorStreams& veh = actor_of(actors, spec.vehicle, spec.id);
        switch (spec.kind) {
            case MonitorKind::collision:
                veh.collider.for_each([e, g = veh.collider.graph()](const Value& v) {
                    if (e->collided) return;
                    e->collided = true;
                    e->collision_tick = g->current_tick();
                    e->collision_rel_speed = as_double(v);
                });
                break;
            case MonitorKind::distance: {
                auto pold = veh.pos.take(1).concat(veh.pos);
                veh.pos.zip(pold, vec_distance).sum().for_each([e](const Value& v) {
                    e->path_length = as_double(v);
                });
                break;
            }
            case MonitorKind::collision_speed:
                veh.collider.for_each([e, g = veh.collider.graph()](const Value&) {
                    if (!e->collided) {
                        e->collided = true;
                        e->collision_tick = g->current_tick();
                    }
                });
                veh.speed
                    .combine_latest(veh.collider,
                                    [](const Value& s, const Value&) { return s; })
                    .first()
                    .for_each([e](const Value& v) { e->collision_own_speed = as_double(v); });
                break;
            case MonitorKind::almost_failing: {
                const ActorStreams& other = actor_of(actors, spec.other, spec.id);
                veh.pos.zip(other.pos, vec_distance).min().for_each([e](const Value& v) {
                    e->min_gap = as_double(v);
                });
                veh.collider.for_each([e](const Value&) { e->collided = true; });
                break;
            }
            case MonitorKind::mean_gap: {
                const ActorStreams& other = actor_of(actors, spec.other, spec.id);
                veh.pos.zip(other.pos, vec_distance).for_each([e](const Value& v) {
                    e->gap_sum += as_double(v);
                    e->gap_count += 1;
                });
                break;
            }
        }
        entries_.push_back(std::move(e));
    }
}

bool MonitorSet::terminated() const {
    for (const auto& e : entries_)
        if (e->spec.kind == MonitorKind::collision && e->collided) return true;
    return false;
}

std::vector<MonitorVerdict> MonitorSet::verdicts() const {
    std::vector<MonitorVerdict> out;
    for (const auto& e : entries_) out.push_back(e->verdict());
    return out;
}

double MonitorSet::score(const std::string& monitor_id) const {
    for (const auto& e : entries_)
        if (e->spec.id == monitor_id) return e->verdict().score.value_or(0.0);
    throw std::invalid_argument("no monitor '" + monitor_id + "'");
}

}  // namespace sct
