#include "sct/opendrive.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sct {

namespace {

std::string f6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

// Headings carry 12 decimals so endpoints recomputed from a re-parsed file
// stay within 1e-6 m of the written coordinates.
std::string f12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12f", v);
    return buf;
}

Vec2 geometry_end(const OdGeometry& g) {
    return {g.x + g.length * std::cos(g.hdg), g.y + g.length * std::sin(g.hdg)};
}

const OdRoad* find_road(const OpenDriveDocument& doc, const std::string& id) {
    for (const auto& r : doc.roads)
        if (r.id == id) return &r;
    return nullptr;
}

// --- tiny scanner for the exact subset serialize() emits ---------------------

std::string attr(const std::string& tag, const std::string& name) {
    const std::string key = name + "=\"";
    const auto pos = tag.find(key);
    if (pos == std::string::npos)
        throw std::runtime_error("OpenDRIVE parse: missing attribute '" + name + "'");
    const auto end = tag.find('"', pos + key.size());
    return tag.substr(pos + key.size(), end - pos - key.size());
}

// Returns the full text of each top-level <name ...>...</name> or <name .../>
// block within `body`.
std::vector<std::string> blocks(const std::string& body, const std::string& name) {
    std::vector<std::string> out;
    const std::string open = "<" + name;
    const std::string close = "</" + name + ">";
    std::size_t pos = 0;
    while ((pos = body.find(open, pos)) != std::string::npos) {
        const char next = body[pos + open.size()];
        if (next != ' ' && next != '>' && next != '/') {  // e.g. <lane vs <laneSection
            pos += open.size();
            continue;
        }
        const auto tag_end = body.find('>', pos);
        if (body[tag_end - 1] == '/') {
            out.push_back(body.substr(pos, tag_end - pos + 1));
            pos = tag_end + 1;
        } else {
            const auto end = body.find(close, tag_end);
            if (end == std::string::npos)
                throw std::runtime_error("OpenDRIVE parse: unterminated <" + name + ">");
            out.push_back(body.substr(pos, end - pos + close.size()));
            pos = end + close.size();
        }
    }
    return out;
}

std::string first_tag(const std::string& block) {
    return block.substr(0, block.find('>') + 1);
}

std::string body_of(const std::string& block, const std::string& name) {
    const auto tag_end = block.find('>');
    const auto close = block.rfind("</" + name + ">");
    if (close == std::string::npos || close < tag_end) return "";
    return block.substr(tag_end + 1, close - tag_end - 1);
}

std::vector<OdLane> parse_lane_group(const std::string& group_body, const std::string& group) {
    std::vector<OdLane> out;
    for (const auto& lb : blocks(group_body, "lane")) {
        const std::string tag = first_tag(lb);
        OdLane lane;
        lane.id = std::stoi(attr(tag, "id"));
        lane.type = attr(tag, "type");
        const auto widths = blocks(body_of(lb, "lane"), "width");
        if (!widths.empty()) lane.width = std::stod(attr(widths[0], "a"));
        out.push_back(lane);
    }
    (void)group;
    return out;
}

}  // namespace

OpenDriveDocument build_document(const RoadNetwork& net) {
    OpenDriveDocument doc;
    const auto& els = net.elements();

    int next_id = 1;
    std::vector<std::string> road_id_of(els.size());
    for (std::size_t i = 0; i < els.size(); ++i) {
        if (els[i].element.kind != RoadKind::straight) continue;
        const auto& e = els[i].element;
        OdRoad r;
        r.id = std::to_string(next_id++);
        road_id_of[i] = r.id;
        r.name = e.id;
        r.length = e.length;
        r.geometry.push_back(
            {0.0, els[i].pose.position.x, els[i].pose.position.y, els[i].pose.heading, e.length});
        for (int l = e.nlanes / 2; l >= 1; --l) r.left.push_back({l, "driving", e.lane_width});
        for (int l = 1; l <= e.nlanes / 2; ++l) r.right.push_back({-l, "driving", e.lane_width});
        doc.roads.push_back(std::move(r));
    }

    for (std::size_t i = 0; i < els.size(); ++i) {
        if (els[i].element.kind == RoadKind::straight) continue;
        OdJunction junction;
        junction.id = std::to_string(next_id++);
        junction.name = els[i].element.id;

        // Incident straight roads, with the junction-side port pose of each.
        struct Incident {
            std::size_t element;
            Pose port;
        };
        std::vector<Incident> incident;
        for (const auto& c : net.connections()) {
            if (c.parent == i && els[c.child].element.kind == RoadKind::straight)
                incident.push_back({c.child, els[i].port_world(c.parent_port)});
            else if (c.child == i && els[c.parent].element.kind == RoadKind::straight)
                incident.push_back({c.parent, els[i].port_world(c.child_port)});
        }

        int conn_idx = 0;
        for (const auto& in : incident)
            for (const auto& out : incident) {
                if (in.element == out.element) continue;
                OdRoad link;
                link.id = std::to_string(next_id++);
                link.name = junction.name + "_" + std::to_string(conn_idx);
                const Vec2 a = in.port.position, b = out.port.position;
                link.length = distance(a, b);
                link.junction = junction.id;
                link.geometry.push_back(
                    {0.0, a.x, a.y, std::atan2(b.y - a.y, b.x - a.x), link.length});
                link.right.push_back({-1, "driving", els[i].element.lane_width});
                doc.roads.push_back(link);

                OdConnection conn;
                conn.id = std::to_string(conn_idx++);
                conn.incoming_road = road_id_of[in.element];
                conn.connecting_road = link.id;
                conn.contact_point = "start";
                conn.links.push_back({-1, -1});
                junction.connections.push_back(std::move(conn));
            }
        doc.junctions.push_back(std::move(junction));
    }
    return doc;
}

std::string serialize(const OpenDriveDocument& doc) {
    std::ostringstream o;
    o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    o << "<OpenDRIVE>\n";
    o << "  <header revMajor=\"1\" revMinor=\"4\" name=\"\" version=\"1.00\"/>\n";
    for (const auto& r : doc.roads) {
        o << "  <road name=\"" << r.name << "\" length=\"" << f6(r.length) << "\" id=\"" << r.id
          << "\" junction=\"" << r.junction << "\">\n";
        o << "    <planView>\n";
        for (const auto& g : r.geometry) {
            o << "      <geometry s=\"" << f6(g.s) << "\" x=\"" << f6(g.x) << "\" y=\"" << f6(g.y)
              << "\" hdg=\"" << f12(g.hdg) << "\" length=\"" << f6(g.length) << "\">\n";
            o << "        <line/>\n";
            o << "      </geometry>\n";
        }
        o << "    </planView>\n";
        o << "    <lanes>\n";
        o << "      <laneSection s=\"0.000000\">\n";
        const auto group = [&](const char* name, const std::vector<OdLane>& lanes) {
            if (lanes.empty()) return;
            o << "        <" << name << ">\n";
            for (const auto& l : lanes) {
                o << "          <lane id=\"" << l.id << "\" type=\"" << l.type
                  << "\" level=\"false\">\n";
                o << "            <width sOffset=\"0.000000\" a=\"" << f6(l.width)
                  << "\" b=\"0.000000\" c=\"0.000000\" d=\"0.000000\"/>\n";
                o << "          </lane>\n";
            }
            o << "        </" << name << ">\n";
        };
        group("left", r.left);
        o << "        <center>\n";
        o << "          <lane id=\"0\" type=\"none\" level=\"false\"/>\n";
        o << "        </center>\n";
        group("right", r.right);
        o << "      </laneSection>\n";
        o << "    </lanes>\n";
        o << "  </road>\n";
    }
    for (const auto& j : doc.junctions) {
        o << "  <junction id=\"" << j.id << "\" name=\"" << j.name << "\">\n";
        for (const auto& c : j.connections) {
            o << "    <connection id=\"" << c.id << "\" incomingRoad=\"" << c.incoming_road
              << "\" connectingRoad=\"" << c.connecting_road << "\" contactPoint=\""
              << c.contact_point << "\">\n";
            for (const auto& l : c.links)
                o << "      <laneLink from=\"" << l.from << "\" to=\"" << l.to << "\"/>\n";
            o << "    </connection>\n";
        }
        o << "  </junction>\n";
    }
    o << "</OpenDRIVE>\n";
    return o.str();
}

OpenDriveDocument parse_opendrive(const std::string& xml) {
    OpenDriveDocument doc;
    for (const auto& rb : blocks(xml, "road")) {
        const std::string tag = first_tag(rb);
        OdRoad r;
        r.name = attr(tag, "name");
        r.length = std::stod(attr(tag, "length"));
        r.id = attr(tag, "id");
        r.junction = attr(tag, "junction");
        const std::string body = body_of(rb, "road");
        for (const auto& gb : blocks(body, "geometry")) {
            const std::string gt = first_tag(gb);
            r.geometry.push_back({std::stod(attr(gt, "s")), std::stod(attr(gt, "x")),
                                  std::stod(attr(gt, "y")), std::stod(attr(gt, "hdg")),
                                  std::stod(attr(gt, "length"))});
        }
        const auto lefts = blocks(body, "left");
        const auto rights = blocks(body, "right");
        if (!lefts.empty()) r.left = parse_lane_group(body_of(lefts[0], "left"), "left");
        if (!rights.empty()) r.right = parse_lane_group(body_of(rights[0], "right"), "right");
        doc.roads.push_back(std::move(r));
    }
    for (const auto& jb : blocks(xml, "junction")) {
        const std::string tag = first_tag(jb);
        OdJunction j;
        j.id = attr(tag, "id");
        j.name = attr(tag, "name");
        for (const auto& cb : blocks(body_of(jb, "junction"), "connection")) {
            const std::string ct = first_tag(cb);
            OdConnection c;
            c.id = attr(ct, "id");
            c.incoming_road = attr(ct, "incomingRoad");
            c.connecting_road = attr(ct, "connectingRoad");
            c.contact_point = attr(ct, "contactPoint");
            for (const auto& lb : blocks(body_of(cb, "connection"), "laneLink"))
                c.links.push_back({std::stoi(attr(lb, "from")), std::stoi(attr(lb, "to"))});
            j.connections.push_back(std::move(c));
        }
        doc.junctions.push_back(std::move(j));
    }
    return doc;
}

std::vector<std::string> check_document(const OpenDriveDocument& doc, double tol) {
    std::vector<std::string> out;
    for (const auto& r : doc.roads) {
        double sum = 0.0;
        for (const auto& g : r.geometry) sum += g.length;
        if (std::abs(sum - r.length) > tol)
            out.push_back("road " + r.id + ": length " + f6(r.length) +
                          " != geometry sum " + f6(sum));
        if (r.geometry.empty()) out.push_back("road " + r.id + ": no geometry");
    }
    for (const auto& j : doc.junctions)
        for (const auto& c : j.connections) {
            const OdRoad* in = find_road(doc, c.incoming_road);
            const OdRoad* link = find_road(doc, c.connecting_road);
            if (!in || !link) {
                out.push_back("junction " + j.id + " connection " + c.id +
                              ": unresolvable road reference");
                continue;
            }
            if (link->junction != j.id)
                out.push_back("junction " + j.id + ": connecting road " + link->id +
                              " not owned by it");
            for (const auto& l : c.links) {
                const auto has_lane = [](const OdRoad& r2, int id) {
                    for (const auto& ln : r2.left)
                        if (ln.id == id) return true;
                    for (const auto& ln : r2.right)
                        if (ln.id == id) return true;
                    return false;
                };
                if (!has_lane(*in, l.from) || !has_lane(*link, l.to))
                    out.push_back("junction " + j.id + " connection " + c.id +
                                  ": unresolvable lane link");
            }
            if (link->geometry.empty() || in->geometry.empty()) continue;
            const Vec2 cp = c.contact_point == "start"
                                ? Vec2{link->geometry.front().x, link->geometry.front().y}
                                : geometry_end(link->geometry.back());
            const Vec2 in_start{in->geometry.front().x, in->geometry.front().y};
            const Vec2 in_end = geometry_end(in->geometry.back());
            if (distance(cp, in_start) > tol && distance(cp, in_end) > tol)
                out.push_back("junction " + j.id + " connection " + c.id +
                              ": connecting road does not touch incoming road");
        }
    return out;
}

void export_network(const RoadNetwork& net, const std::string& path) {
    const auto violations = validate_network(net);
    if (!violations.empty()) {
        std::string msg = "refusing to export invalid network:";
        for (const auto& v : violations) msg += "\n  " + v.what;
        throw std::invalid_argument(msg);
    }
    const std::string xml = serialize(build_document(net));
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write '" + tmp + "'");
        out << xml;
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace sct
