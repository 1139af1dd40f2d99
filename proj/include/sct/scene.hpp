#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sct/geometry.hpp"
#include "sct/reactive.hpp"

namespace sct {

enum class RoadKind { straight, t_intersection, cross_intersection };

RoadKind parse_road_kind(const std::string& s);
std::string road_kind_name(RoadKind k);

struct Port {
    std::string name;  // "ONE", "TWO", ...
    Pose local;        // heading points outward
};

// A single road element in its local frame. Straight segments run from (0,0)
// to (length,0); intersections are squares of side nlanes*lane_width centered
// at the origin with ports at edge midpoints.
struct RoadElement {
    std::string id;
    RoadKind kind = RoadKind::straight;
    int nlanes = 2;
    double length = 0.0;  // straight only
    double lane_width = 3.5;

    double footprint_length() const;
    double footprint_width() const;
    std::vector<Port> ports() const;
    const Port& port(const std::string& name) const;

    void validate() const;
};

// Signed lane index sentinel: one lane-width band beyond the outermost lane.
inline constexpr int kSidewalk = 1000;

// Pose on lane centerline of a straight element, local frame. Positive lanes
// run with the segment (+x), negative against it; lane i sits at
// y = -(i - 0.5) * lane_width, mirrored for negative lanes.
Pose on_lane_local(const RoadElement& element, int lane, double fraction);

struct PlacedElement {
    RoadElement element;
    Pose pose;  // local->world

    Pose port_world(const std::string& port_name) const;
    OrientedRect footprint() const;
};

struct Connection {
    std::size_t parent;  // element indices
    std::string parent_port;
    std::size_t child;
    std::string child_port;
};

struct Violation {
    std::string what;
};

class RoadNetwork {
  public:
    static RoadNetwork single(RoadElement element);

    const std::vector<PlacedElement>& elements() const { return elements_; }
    const std::vector<Connection>& connections() const { return connections_; }

    const PlacedElement& element(const std::string& id) const;
    std::size_t index_of(const std::string& id) const;
    bool port_bound(std::size_t element, const std::string& port_name) const;

    // World pose on a lane of a straight element.
    Pose on_lane(const std::string& element_id, int lane, double fraction) const;

  private:
    friend RoadNetwork connect(const RoadNetwork&,
                               const std::vector<struct ConnectBinding>&);
    std::vector<PlacedElement> elements_;
    std::vector<Connection> connections_;
};

// One binding: parent port (as "elem.PORT", or bare "PORT" when unambiguous)
// to a port of a child network, which is rigidly posed to fit.
struct ConnectBinding {
    std::string parent_port;
    RoadNetwork child;
    std::string child_port;
};

RoadNetwork connect(const RoadNetwork& parent, const std::vector<ConnectBinding>& bindings);

inline RoadNetwork connect(const RoadElement& parent, const std::vector<ConnectBinding>& bindings) {
    return connect(RoadNetwork::single(parent), bindings);
}

// Lane mismatches, port pose mismatches, footprint overlaps. Empty == valid.
std::vector<Violation> validate_network(const RoadNetwork& net);

// Lane-level routing overlay: nodes are directed lane endpoints, edges run
// along lanes and all-to-all through intersections.
struct OverlayNode {
    std::size_t element;
    int lane;
    Vec2 entry;
    Vec2 exit;
};

struct OverlayGraph {
    std::vector<OverlayNode> nodes;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
};

OverlayGraph build_overlay(const RoadNetwork& net);

// Pedestrian: stand at `start` until the car first comes within `trigger_dist`
// of it, then walk toward `target` at `speed`, stopping on arrival (tolerance
// speed*dt/2). Returns the Vec2 position stream, one event per tick.
struct PedestrianSpec {
    Vec2 start;
    Vec2 target;
    double trigger_dist = 0.0;  // infinity => walk immediately
    double speed = 0.0;
    double dt = 0.05;
};

Stream pedestrian_behavior(const PedestrianSpec& spec, const Stream& car_pos, const Stream& tick);

}  // namespace sct
