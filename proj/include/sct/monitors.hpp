#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sct/reactive.hpp"

namespace sct {

enum class MonitorKind { collision, distance, collision_speed, almost_failing, mean_gap };

MonitorKind parse_monitor_kind(const std::string& s);
std::string monitor_kind_name(MonitorKind k);

struct MonitorSpec {
    std::string id;
    MonitorKind kind = MonitorKind::collision;
    std::string vehicle;
    std::string other;    // pedestrian (almost_failing) or lead (mean_gap)
    double min_d = 5.0;   // distance monitor threshold, meters
};

enum class Outcome { pass, fail, errored };

std::string outcome_name(Outcome o);

struct MonitorVerdict {
    std::string id;
    MonitorKind kind = MonitorKind::collision;
    Outcome outcome = Outcome::pass;
    std::optional<double> score;
    std::string evidence;
};

// Per-actor streams fed by the simulation loop: pos carries Vec2, speed a
// double, collider the relative speed of a collision involving the actor.
struct ActorStreams {
    Stream pos;
    Stream speed;
    Stream collider;
};

// Installs the stream pipelines for a set of monitor specs on one iteration's
// graph. Verdicts are available once the graph is finalized.
class MonitorSet {
  public:
    MonitorSet(const std::vector<MonitorSpec>& specs,
               const std::map<std::string, ActorStreams>& actors);

    // True once a terminating monitor (collision) has observed its event.
    bool terminated() const;

    std::vector<MonitorVerdict> verdicts() const;

    // Score of a quantitative monitor by id (0 when absent by convention).
    double score(const std::string& monitor_id) const;

  private:
    struct Entry;
    std::vector<std::shared_ptr<Entry>> entries_;
};

}  // namespace sct
