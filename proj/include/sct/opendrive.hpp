#pragma once

#include <string>
#include <vector>

#include "sct/scene.hpp"

namespace sct {

// Minimal OpenDRIVE 1.4 document model: line geometries, one lane section per
// road, junctions with connecting roads. This is both the writer's input and
// the re-parser's output, so export -> parse -> export is byte-stable.
struct OdGeometry {
    double s = 0.0;
    double x = 0.0;
    double y = 0.0;
    double hdg = 0.0;
    double length = 0.0;
};

struct OdLane {
    int id = 0;
    std::string type = "driving";
    double width = 3.5;
};

struct OdRoad {
    std::string id;
    std::string name;
    double length = 0.0;
    std::string junction = "-1";  // owning junction id, or -1
    std::vector<OdGeometry> geometry;
    std::vector<OdLane> left;   // positive ids, descending in output
    std::vector<OdLane> right;  // negative ids, descending in output
};

struct OdLaneLink {
    int from = 0;
    int to = 0;
};

struct OdConnection {
    std::string id;
    std::string incoming_road;
    std::string connecting_road;
    std::string contact_point = "start";
    std::vector<OdLaneLink> links;
};

struct OdJunction {
    std::string id;
    std::string name;
    std::vector<OdConnection> connections;
};

struct OpenDriveDocument {
    std::vector<OdRoad> roads;
    std::vector<OdJunction> junctions;
};

// Network -> document. Straight segments become roads; intersections become
// junctions whose connecting roads run between incident road endpoints.
OpenDriveDocument build_document(const RoadNetwork& net);

std::string serialize(const OpenDriveDocument& doc);

// Parses exactly the subset serialize() emits.
OpenDriveDocument parse_opendrive(const std::string& xml);

// Refuses invalid networks with their validation report. Writes UTF-8, LF.
void export_network(const RoadNetwork& net, const std::string& path);

// Structural checks on a document: length sums, resolvable junction
// references, endpoint continuity of connecting roads (within tol meters).
std::vector<std::string> check_document(const OpenDriveDocument& doc, double tol = 1e-6);

}  // namespace sct
