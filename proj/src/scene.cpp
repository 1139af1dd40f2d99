#include "sct/scene.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

namespace sct {

namespace {

constexpr double kPosTol = 1e-6;
constexpr double kAngTol = 1e-9;

}  // namespace

RoadKind parse_road_kind(const std::string& s) {
    if (s == "straight") return RoadKind::straight;
    if (s == "t_intersection") return RoadKind::t_intersection;
    if (s == "cross_intersection") return RoadKind::cross_intersection;
    throw std::invalid_argument("unknown road kind: " + s);
}

std::string road_kind_name(RoadKind k) {
    switch (k) {
        case RoadKind::straight: return "straight";
        case RoadKind::t_intersection: return "t_intersection";
        case RoadKind::cross_intersection: return "cross_intersection";
    }
    throw std::logic_error("bad road kind");
}

double RoadElement::footprint_length() const {
    return kind == RoadKind::straight ? length : nlanes * lane_width;
}

double RoadElement::footprint_width() const { return nlanes * lane_width; }

std::vector<Port> RoadElement::ports() const {
    const double h = 0.5 * nlanes * lane_width;
    switch (kind) {
        case RoadKind::straight:
            return {{"ONE", {{0.0, 0.0}, M_PI}}, {"TWO", {{length, 0.0}, 0.0}}};
        case RoadKind::t_intersection:
            return {{"ONE", {{h, 0.0}, 0.0}},
                    {"TWO", {{0.0, -h}, -M_PI / 2}},
                    {"THREE", {{-h, 0.0}, M_PI}}};
        case RoadKind::cross_intersection:
            return {{"ONE", {{h, 0.0}, 0.0}},
                    {"TWO", {{0.0, -h}, -M_PI / 2}},
                    {"THREE", {{-h, 0.0}, M_PI}},
                    {"FOUR", {{0.0, h}, M_PI / 2}}};
    }
    throw std::logic_error("bad road kind");
}

const Port& RoadElement::port(const std::string& name) const {
    static thread_local std::vector<Port> cache;
    cache = ports();
    for (const auto& p : cache)
        if (p.name == name) return p;
    throw std::invalid_argument("element '" + id + "' has no port '" + name + "'");
}

void RoadElement::validate() const {
    if (id.empty()) throw std::invalid_argument("road element needs an id");
    if (nlanes != 2 && nlanes != 4 && nlanes != 6)
        throw std::invalid_argument("element '" + id + "': nlanes must be 2, 4 or 6");
    if (lane_width <= 0.0) throw std::invalid_argument("element '" + id + "': lane_width <= 0");
    if (kind == RoadKind::straight && length <= 0.0)
        throw std::invalid_argument("element '" + id + "': straight segment needs length > 0");
}

Pose on_lane_local(const RoadElement& element, int lane, double fraction) {
    if (element.kind != RoadKind::straight)
        throw std::domain_error("on_lane: element '" + element.id + "' is not straight");
    if (fraction < 0.0 || fraction > 1.0)
        throw std::domain_error("on_lane: fraction out of [0,1]");
    const int mag = std::abs(lane);
    const bool sidewalk = mag == kSidewalk;
    if (lane == 0 || (!sidewalk && mag > element.nlanes / 2))
        throw std::domain_error("on_lane: lane " + std::to_string(lane) + " out of range for " +
                                std::to_string(element.nlanes) + " lanes");
    const double off = sidewalk ? (element.nlanes / 2 + 0.5) * element.lane_width
                                : (mag - 0.5) * element.lane_width;
    if (lane > 0)  // travels +x, offset to the right of travel
        return {{fraction * element.length, -off}, 0.0};
    // Negative lanes travel -x; fraction runs along the direction of travel.
    return {{(1.0 - fraction) * element.length, off}, M_PI};
}

Pose PlacedElement::port_world(const std::string& port_name) const {
    const Port& p = element.port(port_name);
    return {pose.to_world(p.local.position), wrap_angle(pose.heading + p.local.heading)};
}

OrientedRect PlacedElement::footprint() const {
    const Vec2 center_local = element.kind == RoadKind::straight
                                  ? Vec2{0.5 * element.length, 0.0}
                                  : Vec2{0.0, 0.0};
    return {{pose.to_world(center_local), pose.heading}, element.footprint_length(),
            element.footprint_width()};
}

RoadNetwork RoadNetwork::single(RoadElement element) {
    element.validate();
    RoadNetwork net;
    net.elements_.push_back({std::move(element), Pose{}});
    return net;
}

const PlacedElement& RoadNetwork::element(const std::string& id) const {
    return elements_[index_of(id)];
}

std::size_t RoadNetwork::index_of(const std::string& id) const {
    for (std::size_t i = 0; i < elements_.size(); ++i)
        if (elements_[i].element.id == id) return i;
    throw std::invalid_argument("no road element '" + id + "'");
}

bool RoadNetwork::port_bound(std::size_t element, const std::string& port_name) const {
    for (const auto& c : connections_) {
        if (c.parent == element && c.parent_port == port_name) return true;
        if (c.child == element && c.child_port == port_name) return true;
    }
    return false;
}

Pose RoadNetwork::on_lane(const std::string& element_id, int lane, double fraction) const {
    const PlacedElement& pe = element(element_id);
    const Pose local = on_lane_local(pe.element, lane, fraction);
    return {pe.pose.to_world(local.position), wrap_angle(pe.pose.heading + local.heading)};
}

namespace {

// "elem.PORT" or bare "PORT" when the network has a single element.
std::pair<std::size_t, std::string> resolve_port_ref(const RoadNetwork& net,
                                                     const std::string& ref) {
    const auto dot = ref.find('.');
    if (dot == std::string::npos) {
        if (net.elements().size() != 1)
            throw std::invalid_argument("port reference '" + ref +
                                        "' is ambiguous; use elem.PORT");
        net.elements()[0].element.port(ref);  // existence check
        return {0, ref};
    }
    const std::size_t idx = net.index_of(ref.substr(0, dot));
    const std::string port = ref.substr(dot + 1);
    net.elements()[idx].element.port(port);
    return {idx, port};
}

}  // namespace

RoadNetwork connect(const RoadNetwork& parent, const std::vector<ConnectBinding>& bindings) {
    RoadNetwork net = parent;
    for (const auto& b : bindings) {
        const auto [pidx, pport] = resolve_port_ref(net, b.parent_port);
        if (net.port_bound(pidx, pport))
            throw std::invalid_argument("port '" + b.parent_port + "' is already bound");

        const auto [cidx_local, cport] = resolve_port_ref(b.child, b.child_port);
        if (b.child.port_bound(cidx_local, cport))
            throw std::invalid_argument("child port '" + b.child_port + "' is already bound");

        const auto& pelem = net.elements()[pidx].element;
        const auto& celem = b.child.elements()[cidx_local].element;
        if (pelem.nlanes != celem.nlanes)
            throw std::invalid_argument(
                "lane count mismatch: '" + pelem.id + "' has " + std::to_string(pelem.nlanes) +
                " lanes, '" + celem.id + "' has " + std::to_string(celem.nlanes));

        // Rigid transform posing the child so its port coincides with the
        // parent port, headings opposite.
        const Pose pw = net.elements()[pidx].port_world(pport);
        const Pose cw = b.child.elements()[cidx_local].port_world(cport);
        const double theta = wrap_angle(pw.heading + M_PI - cw.heading);
        const double ct = std::cos(theta), st = std::sin(theta);
        const auto xform = [&](const Vec2& v) -> Vec2 {
            return {ct * v.x - st * v.y, st * v.x + ct * v.y};
        };
        const Vec2 t = pw.position - xform(cw.position);

        const std::size_t base = net.elements_.size();
        for (const auto& pe : b.child.elements()) {
            for (const auto& existing : net.elements_)
                if (existing.element.id == pe.element.id)
                    throw std::invalid_argument("duplicate road element id '" + pe.element.id +
                                                "'");
            Pose world{xform(pe.pose.position) + t, wrap_angle(pe.pose.heading + theta)};
            net.elements_.push_back({pe.element, world});
        }
        for (const auto& c : b.child.connections())
            net.connections_.push_back(
                {c.parent + base, c.parent_port, c.child + base, c.child_port});
        net.connections_.push_back({pidx, pport, base + cidx_local, cport});
    }
    return net;
}

std::vector<Violation> validate_network(const RoadNetwork& net) {
    std::vector<Violation> out;
    const auto& els = net.elements();
    for (const auto& c : net.connections()) {
        const auto& a = els[c.parent];
        const auto& b = els[c.child];
        if (a.element.nlanes != b.element.nlanes)
            out.push_back({"lane count mismatch between '" + a.element.id + "' (" +
                           std::to_string(a.element.nlanes) + ") and '" + b.element.id + "' (" +
                           std::to_string(b.element.nlanes) + ")"});
        const Pose pa = a.port_world(c.parent_port);
        const Pose pb = b.port_world(c.child_port);
        if (distance(pa.position, pb.position) > kPosTol)
            out.push_back({"port position mismatch at '" + a.element.id + "." + c.parent_port +
                           "' / '" + b.element.id + "." + c.child_port + "'"});
        if (std::abs(wrap_angle(pa.heading - pb.heading - M_PI)) > kAngTol)
            out.push_back({"port heading mismatch at '" + a.element.id + "." + c.parent_port +
                           "' / '" + b.element.id + "." + c.child_port + "'"});
    }
    for (std::size_t i = 0; i < els.size(); ++i)
        for (std::size_t j = i + 1; j < els.size(); ++j)
            if (rects_overlap(els[i].footprint(), els[j].footprint(), kPosTol))
                out.push_back({"footprint overlap between '" + els[i].element.id + "' and '" +
                               els[j].element.id + "'"});
    return out;
}

OverlayGraph build_overlay(const RoadNetwork& net) {
    OverlayGraph g;
    const auto& els = net.elements();
    // Nodes: one directed run per lane of each straight segment.
    std::map<std::pair<std::size_t, int>, std::size_t> node_of;
    for (std::size_t i = 0; i < els.size(); ++i) {
        const auto& e = els[i].element;
        if (e.kind != RoadKind::straight) continue;
        for (int mag = 1; mag <= e.nlanes / 2; ++mag)
            for (int lane : {mag, -mag}) {
                const Pose a = net.on_lane(e.id, lane, 0.0);
                const Pose b = net.on_lane(e.id, lane, 1.0);
                node_of[{i, lane}] = g.nodes.size();
                g.nodes.push_back({i, lane, a.position, b.position});
            }
    }
    // A lane exits a straight segment at port TWO when positive, ONE when
    // negative (and enters at the opposite one).
    const auto exits_at = [](int lane, const std::string& port) {
        return (lane > 0) == (port == "TWO");
    };
    // Incident connections per intersection, for all-to-all turning edges.
    std::map<std::size_t, std::vector<const Connection*>> at_junction;
    for (const auto& c : net.connections()) {
        const bool pj = els[c.parent].element.kind != RoadKind::straight;
        const bool cj = els[c.child].element.kind != RoadKind::straight;
        if (pj == cj) {
            if (pj) continue;  // intersection-to-intersection: no lane runs
            // straight-to-straight: continue each lane across the joint, in
            // both travel directions.
            const std::pair<std::pair<std::size_t, std::string>,
                            std::pair<std::size_t, std::string>>
                dirs[] = {{{c.parent, c.parent_port}, {c.child, c.child_port}},
                          {{c.child, c.child_port}, {c.parent, c.parent_port}}};
            for (const auto& [from, to] : dirs) {
                for (const auto& [key, n] : node_of) {
                    const auto [ei, lane] = key;
                    if (ei != from.first || !exits_at(lane, from.second)) continue;
                    // The target frame either continues or flips; either way
                    // the continuing lane is the one entering at the bound port.
                    for (const auto& [key2, n2] : node_of) {
                        const auto [ej, lane2] = key2;
                        if (ej != to.first || exits_at(lane2, to.second)) continue;
                        if (std::abs(lane2) != std::abs(lane)) continue;
                        if (distance(g.nodes[n].exit, g.nodes[n2].entry) < 1e-6)
                            g.edges.push_back({n, n2});
                    }
                }
            }
        } else {
            at_junction[pj ? c.parent : c.child].push_back(&c);
        }
    }
    for (const auto& [ji, conns] : at_junction)
        for (const auto* cin : conns)
            for (const auto* cout : conns) {
                if (cin == cout) continue;
                const std::size_t road_in = cin->parent == ji ? cin->child : cin->parent;
                const std::string& port_in = cin->parent == ji ? cin->child_port : cin->parent_port;
                const std::size_t road_out = cout->parent == ji ? cout->child : cout->parent;
                const std::string& port_out =
                    cout->parent == ji ? cout->child_port : cout->parent_port;
                for (const auto& [key, n] : node_of) {
                    const auto [ei, lane] = key;
                    if (ei != road_in || !exits_at(lane, port_in)) continue;
                    for (const auto& [key2, n2] : node_of) {
                        const auto [ej, lane2] = key2;
                        if (ej != road_out || exits_at(lane2, port_out)) continue;
                        g.edges.push_back({n, n2});
                    }
                }
            }
    return g;
}

Stream pedestrian_behavior(const PedestrianSpec& spec, const Stream& car_pos,
                           const Stream& tick) {
    if (spec.speed <= 0.0) throw std::invalid_argument("pedestrian speed must be > 0");
    if (spec.dt <= 0.0) throw std::invalid_argument("pedestrian dt must be > 0");
    const Vec2 start = spec.start, target = spec.target;
    const double trig = spec.trigger_dist;
    Stream trigger = car_pos
                         .filter([start, trig](const Value& v) {
                             return distance(std::get<Vec2>(v), start) < trig;
                         })
                         .first();
    struct State {
        Vec2 pos;
        bool done = false;
    };
    auto st = std::make_shared<State>(State{start});
    const double step = spec.speed * spec.dt;
    const double tol = 0.5 * step;
    // The trigger node precedes this map in creation order, so its state is
    // current for the tick; walking starts the tick after the trigger fires.
    return tick.map([st, trigger, target, step, tol](const Value&) -> Value {
        const bool armed = trigger.ever_fired() && !trigger.event().has_value();
        if (armed && !st->done) {
            const Vec2 d = target - st->pos;
            const double n = d.norm();
            if (n <= tol) {
                st->pos = target;
                st->done = true;
            } else {
                const double adv = std::min(step, n);
                st->pos = st->pos + d * (adv / n);
                if (distance(st->pos, target) <= tol) {
                    st->pos = target;
                    st->done = true;
                }
            }
        }
        return Value{st->pos};
    });
}

}  // namespace sct
