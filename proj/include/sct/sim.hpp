#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sct/monitors.hpp"
#include "sct/scene.hpp"

namespace sct {

enum class ActorKind { autonomous_vehicle, scripted_vehicle, pedestrian };

ActorKind parse_actor_kind(const std::string& s);
std::string actor_kind_name(ActorKind k);

struct ActorSpec {
    std::string id;
    ActorKind kind = ActorKind::scripted_vehicle;
    std::string road;
    int lane = 1;
    double fraction = 0.0;
    double advance = 0.0;  // extra meters along the travel direction
    double length = 4.5;
    double width = 1.8;
    std::string color;  // inert metadata

    // Vehicles.
    double cruise_speed = 0.0;  // desired speed, m/s (scripted: max speed)
    double init_speed = 0.0;
    std::string controller;         // autonomous only, registry key
    double perception_range = 60.0;  // R before fog/light degradation, m
    double reaction_delay = 0.5;     // seconds between sighting and braking

    // Pedestrians.
    double speed = 0.0;
    double trigger_dist = 0.0;
    int target_lane = 0;  // crossing destination lane index
};

struct WorldParams {
    double light = 1.0;
    double fog = 0.0;
};

struct SimParams {
    double dt = 0.05;
    double duration = 15.0;
    double a_max = 4.0;      // m/s^2 forward
    double b_max = 8.0;      // m/s^2 braking
    double omega_max = 0.5;  // rad/s at full steering
    double v_max = 30.0;
};

struct Controls {
    double throttle = 0.0;  // [-1, 1]
    double steering = 0.0;  // [-1, 1]
};

struct ControllerInputs {
    double own_speed = 0.0;
    std::optional<double> lead_gap;        // bumper gap to lead in lane, m
    std::optional<double> pedestrian_gap;  // bumper gap to pedestrian in corridor, m
    double visibility = 0.0;               // R_eff = R*(1-fog)*(0.5+0.5*light)
};

struct Controller {
    virtual ~Controller() = default;
    virtual Controls step(const ControllerInputs& in) = 0;
};

// Scripted surrogate SUT: holds cruise_speed; brakes fully after a reaction
// delay when a pedestrian is in the corridor within visibility, or when the
// lead gap falls below the own-speed stopping distance v^2/(2 b_max). Refuses
// to drive (creep mode) when visibility < creep_threshold.
std::unique_ptr<Controller> proximity_brake_controller(double cruise_speed, double reaction_delay,
                                                       double dt, double creep_threshold = 30.0,
                                                       double b_max = 8.0, double a_max = 4.0);

// Registry lookup by the scenario config's controller id.
std::unique_ptr<Controller> make_controller(const std::string& name, const ActorSpec& spec,
                                            const SimParams& sim);

struct ActorState {
    Pose pose;
    double speed = 0.0;
    Vec2 velocity;  // actual displacement rate, for relative-speed reports
};

struct CollisionEvent {
    std::size_t a = 0, b = 0;  // actor indices
    double relative_speed = 0.0;
    int64_t tick = 0;
};

// Forward-Euler step for one vehicle. Throws on NaN controls.
ActorState step_physics(const ActorState& s, const Controls& c, const SimParams& p);

// First-overlap events for actor pairs not already in `seen`.
std::vector<CollisionEvent> detect_collisions(const std::vector<ActorSpec>& specs,
                                              const std::vector<ActorState>& states, int64_t tick,
                                              std::vector<std::pair<std::size_t, std::size_t>>& seen);

struct Scenario {
    RoadNetwork network;
    WorldParams world;
    std::vector<ActorSpec> actors;
    std::vector<MonitorSpec> monitors;
    SimParams sim;
};

struct IterationReport {
    std::vector<MonitorVerdict> verdicts;
    int64_t duration_ticks = 0;
    bool collision = false;
    double collision_speed = 0.0;  // autonomous vehicle speed at collision
    bool errored = false;
    std::string error;
    std::string event_log;  // JSON lines, only when requested

    bool any_fail() const;
    double score(const std::string& monitor_id) const;
};

IterationReport run_iteration(const Scenario& scenario, bool keep_event_log = false);

}  // namespace sct
