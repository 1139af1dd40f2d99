#include "sct/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sct {

namespace {

constexpr double kCorridorLat = 2.0;  // lateral half-width for obstacle relevance, m

double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

class ProximityBrake : public Controller {
  public:
    ProximityBrake(double cruise, double tau, double dt, double creep, double b_max, double a_max)
        : cruise_(cruise), tau_(tau), dt_(dt), creep_(creep), b_max_(b_max), a_max_(a_max) {}

    Controls step(const ControllerInputs& in) override {
        if (in.visibility < creep_) return {0.0, 0.0};  // can't see far enough to drive
        const bool ped_threat = in.pedestrian_gap && *in.pedestrian_gap <= in.visibility;
        const bool lead_threat = in.lead_gap && *in.lead_gap <= in.visibility &&
                                 *in.lead_gap < in.own_speed * in.own_speed / (2.0 * b_max_);
        if (ped_threat || lead_threat)
            timer_ += dt_;
        else
            timer_ = 0.0;
        if (timer_ >= tau_ - 1e-12 && timer_ > 0.0) return {-1.0, 0.0};
        // Hold cruise speed without overshooting in one Euler step.
        return {clamp((cruise_ - in.own_speed) / (a_max_ * dt_), 0.0, 1.0), 0.0};
    }

  private:
    double cruise_, tau_, dt_, creep_, b_max_, a_max_;
    double timer_ = 0.0;
};

class CruiseHold : public Controller {
  public:
    CruiseHold(double cruise, double a_max, double dt) : cruise_(cruise), a_max_(a_max), dt_(dt) {}

    Controls step(const ControllerInputs& in) override {
        return {clamp((cruise_ - in.own_speed) / (a_max_ * dt_), 0.0, 1.0), 0.0};
    }

  private:
    double cruise_, a_max_, dt_;
};

}  // namespace

ActorKind parse_actor_kind(const std::string& s) {
    if (s == "autonomous_vehicle") return ActorKind::autonomous_vehicle;
    if (s == "scripted_vehicle") return ActorKind::scripted_vehicle;
    if (s == "pedestrian") return ActorKind::pedestrian;
    throw std::invalid_argument("unknown actor kind: " + s);
}

std::string actor_kind_name(ActorKind k) {
    switch (k) {
        case ActorKind::autonomous_vehicle: return "autonomous_vehicle";
        case ActorKind::scripted_vehicle: return "scripted_vehicle";
        case ActorKind::pedestrian: return "pedestrian";
    }
    throw std::logic_error("bad actor kind");
}

std::unique_ptr<Controller> proximity_brake_controller(double cruise_speed, double reaction_delay,
                                                       double dt, double creep_threshold,
                                                       double b_max, double a_max) {
    if (reaction_delay < 0.0) throw std::invalid_argument("reaction delay must be >= 0");
    return std::make_unique<ProximityBrake>(cruise_speed, reaction_delay, dt, creep_threshold,
                                            b_max, a_max);
}

std::unique_ptr<Controller> make_controller(const std::string& name, const ActorSpec& spec,
                                            const SimParams& sim) {
    if (name == "proximity_brake")
        return proximity_brake_controller(spec.cruise_speed, spec.reaction_delay, sim.dt, 30.0,
                                          sim.b_max, sim.a_max);
    throw std::invalid_argument("unknown controller '" + name + "'");
}

ActorState step_physics(const ActorState& s, const Controls& c, const SimParams& p) {
    if (std::isnan(c.throttle) || std::isnan(c.steering))
        throw std::runtime_error("NaN in controls");
    const double throttle = clamp(c.throttle, -1.0, 1.0);
    const double steering = clamp(c.steering, -1.0, 1.0);
    const double accel = throttle >= 0.0 ? throttle * p.a_max : throttle * p.b_max;
    ActorState out = s;
    out.velocity = s.pose.forward() * s.speed;
    out.pose.position = s.pose.position + out.velocity * p.dt;
    out.pose.heading = wrap_angle(s.pose.heading + steering * p.omega_max * p.dt);
    out.speed = clamp(s.speed + accel * p.dt, 0.0, p.v_max);
    return out;
}

std::vector<CollisionEvent> detect_collisions(
    const std::vector<ActorSpec>& specs, const std::vector<ActorState>& states, int64_t tick,
    std::vector<std::pair<std::size_t, std::size_t>>& seen) {
    std::vector<CollisionEvent> out;
    for (std::size_t i = 0; i < states.size(); ++i)
        for (std::size_t j = i + 1; j < states.size(); ++j) {
            if (std::find(seen.begin(), seen.end(), std::make_pair(i, j)) != seen.end()) continue;
            const OrientedRect ri{states[i].pose, specs[i].length, specs[i].width};
            const OrientedRect rj{states[j].pose, specs[j].length, specs[j].width};
            if (!rects_overlap(ri, rj)) continue;
            seen.emplace_back(i, j);
            out.push_back({i, j, (states[i].velocity - states[j].velocity).norm(), tick});
        }
    return out;
}

bool IterationReport::any_fail() const {
    for (const auto& v : verdicts)
        if (v.outcome == Outcome::fail) return true;
    return false;
}

double IterationReport::score(const std::string& monitor_id) const {
    for (const auto& v : verdicts)
        if (v.id == monitor_id) return v.score.value_or(0.0);
    throw std::invalid_argument("no monitor '" + monitor_id + "'");
}

IterationReport run_iteration(const Scenario& scenario, bool keep_event_log) {
    IterationReport out;
    try {
        const auto& sp = scenario.sim;
        if (sp.dt <= 0.0 || sp.duration <= 0.0) throw std::invalid_argument("bad sim params");
        const int64_t duration_ticks = static_cast<int64_t>(std::ceil(sp.duration / sp.dt));

        const auto& actors = scenario.actors;
        std::vector<ActorState> states(actors.size());
        std::vector<std::unique_ptr<Controller>> controllers(actors.size());
        std::size_t av = actors.size();
        for (std::size_t i = 0; i < actors.size(); ++i) {
            const auto& a = actors[i];
            states[i].pose = scenario.network.on_lane(a.road, a.lane, a.fraction);
            states[i].pose.position =
                states[i].pose.position + states[i].pose.forward() * a.advance;
            switch (a.kind) {
                case ActorKind::autonomous_vehicle:
                    if (av != actors.size())
                        throw std::invalid_argument("more than one autonomous vehicle");
                    av = i;
                    states[i].speed = a.init_speed;
                    controllers[i] = make_controller(a.controller, a, sp);
                    break;
                case ActorKind::scripted_vehicle:
                    states[i].speed = a.init_speed;
                    controllers[i] = std::make_unique<CruiseHold>(a.cruise_speed, sp.a_max, sp.dt);
                    break;
                case ActorKind::pedestrian:
                    break;
            }
        }

        StreamGraph graph;
        std::map<std::string, ActorStreams> streams;
        std::vector<std::size_t> ped_idx;
        for (std::size_t i = 0; i < actors.size(); ++i) {
            const auto& a = actors[i];
            ActorStreams s;
            s.speed = graph.input(a.id + ".speed").named(a.id + ".speed");
            s.collider = graph.input(a.id + ".collider").named(a.id + ".collider");
            if (a.kind == ActorKind::pedestrian) ped_idx.push_back(i);
            s.pos = graph.input(a.id + ".pos").named(a.id + ".pos");
            streams.emplace(a.id, s);
        }
        // Pedestrian positions are derived streams driven by the autonomous
        // vehicle's position; replace their pos handles.
        std::map<std::size_t, Stream> ped_streams;
        for (const std::size_t i : ped_idx) {
            if (av == actors.size())
                throw std::invalid_argument("pedestrian behavior needs an autonomous vehicle");
            const auto& a = actors[i];
            PedestrianSpec ps;
            ps.start = states[i].pose.position;
            const double tf = (a.lane > 0) == (a.target_lane > 0) ? a.fraction : 1.0 - a.fraction;
            ps.target = scenario.network.on_lane(a.road, a.target_lane, tf).position;
            ps.trigger_dist = a.trigger_dist;
            ps.speed = a.speed;
            ps.dt = sp.dt;
            Stream walk = pedestrian_behavior(ps, streams.at(actors[av].id).pos,
                                              graph.tick_stream())
                              .named(a.id + ".pos");
            ped_streams.emplace(i, walk);
            streams.at(a.id).pos = walk;
        }

        MonitorSet monitors(scenario.monitors, streams);

        const double r_eff_scale =
            (1.0 - scenario.world.fog) * (0.5 + 0.5 * scenario.world.light);

        std::vector<std::pair<std::size_t, std::size_t>> seen;
        std::vector<CollisionEvent> pending;
        int64_t t = 0;
        while (true) {
            std::vector<std::pair<Stream, Value>> inputs;
            for (std::size_t i = 0; i < actors.size(); ++i) {
                if (actors[i].kind != ActorKind::pedestrian)
                    inputs.push_back({streams.at(actors[i].id).pos,
                                      Value{states[i].pose.position}});
                inputs.push_back({streams.at(actors[i].id).speed, Value{states[i].speed}});
            }
            const bool delivering = !pending.empty();
            for (const auto& ev : pending) {
                inputs.push_back({streams.at(actors[ev.a].id).collider, Value{ev.relative_speed}});
                inputs.push_back({streams.at(actors[ev.b].id).collider, Value{ev.relative_speed}});
            }
            pending.clear();
            graph.advance(t, inputs);

            // Adopt pedestrian positions computed by their behavior streams.
            for (const auto& [i, s] : ped_streams) {
                const Vec2 np = std::get<Vec2>(*s.event());
                states[i].velocity = (np - states[i].pose.position) * (1.0 / sp.dt);
                states[i].pose.position = np;
            }

            if (delivering && monitors.terminated()) {
                ++t;
                break;
            }

            const auto events = detect_collisions(actors, states, t, seen);
            if (!events.empty()) {
                pending = events;
                if (!out.collision) {
                    out.collision = true;
                    if (av != actors.size()) out.collision_speed = states[av].speed;
                }
                ++t;
                continue;  // freeze one tick to deliver the collider events
            }

            if (t + 1 >= duration_ticks) {
                ++t;
                break;
            }

            // Controls and physics for the next tick.
            std::vector<ActorState> next = states;
            for (std::size_t i = 0; i < actors.size(); ++i) {
                if (!controllers[i]) continue;
                ControllerInputs in;
                in.own_speed = states[i].speed;
                in.visibility = actors[i].perception_range * r_eff_scale;
                const Vec2 fwd = states[i].pose.forward();
                const Vec2 left{-fwd.y, fwd.x};
                for (std::size_t j = 0; j < actors.size(); ++j) {
                    if (j == i) continue;
                    const Vec2 d = states[j].pose.position - states[i].pose.position;
                    const double dx = d.dot(fwd);
                    if (dx <= 0.0 || std::abs(d.dot(left)) > kCorridorLat) continue;
                    const double gap = dx - 0.5 * (actors[i].length + actors[j].length);
                    if (actors[j].kind == ActorKind::pedestrian) {
                        if (!in.pedestrian_gap || gap < *in.pedestrian_gap)
                            in.pedestrian_gap = gap;
                    } else {
                        if (!in.lead_gap || gap < *in.lead_gap) in.lead_gap = gap;
                    }
                }
                next[i] = step_physics(states[i], controllers[i]->step(in), sp);
            }
            states = std::move(next);
            ++t;
        }

        graph.finalize();
        out.duration_ticks = t;
        out.verdicts = monitors.verdicts();
        if (keep_event_log) out.event_log = graph.event_log_jsonl();
    } catch (const std::exception& e) {
        out.errored = true;
        out.error = e.what();
        out.verdicts.clear();
        for (const auto& m : scenario.monitors)
            out.verdicts.push_back({m.id, m.kind, Outcome::errored, std::nullopt, e.what()});
    }
    return out;
}

}  // namespace sct
