#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sct/geometry.hpp"

namespace sct {

// Event payload. monostate is the "unit" kind of pure event streams.
using Value = std::variant<std::monostate, double, int64_t, bool, std::string, Vec2>;

double as_double(const Value& v);

struct StreamEvent {
    int64_t tick;
    std::string stream;
    Value value;
};

class StreamGraph;

// Handle to a stream node within a graph. Combinators create derived nodes;
// parents always precede children in creation order, which doubles as the
// topological evaluation order.
class Stream {
  public:
    Stream() = default;

    Stream map(std::function<Value(const Value&)> f) const;
    Stream filter(std::function<bool(const Value&)> p) const;
    Stream zip(const Stream& other, std::function<Value(const Value&, const Value&)> f) const;
    Stream combine_latest(const Stream& other,
                          std::function<Value(const Value&, const Value&)> f) const;
    Stream take(int64_t n) const;
    Stream skip(int64_t n) const;
    Stream skip_until(const Stream& trigger) const;
    Stream take_until(const Stream& stop) const;
    Stream concat(const Stream& other) const;
    Stream first() const { return take(1); }
    Stream sum() const;
    Stream min() const;
    Stream default_if_empty(Value v) const;
    void for_each(std::function<void(const Value&)> action) const;

    // Event produced at the current tick, if any.
    const std::optional<Value>& event() const;
    // Most recent event value seen so far.
    const std::optional<Value>& last() const;
    bool ever_fired() const;

    Stream named(const std::string& name) const;  // logs events under this name

    StreamGraph* graph() const { return graph_; }
    std::size_t id() const { return id_; }

  private:
    friend class StreamGraph;
    Stream(StreamGraph* graph, std::size_t id) : graph_(graph), id_(id) {}

    StreamGraph* graph_ = nullptr;
    std::size_t id_ = 0;
};

// Deterministic tick-synchronous stream engine. All derived events for a tick
// are produced in one propagation pass; composing streams from different
// graphs is a construction error.
class StreamGraph {
  public:
    StreamGraph();
    ~StreamGraph();
    StreamGraph(const StreamGraph&) = delete;
    StreamGraph& operator=(const StreamGraph&) = delete;

    Stream tick_stream() const;
    Stream input(const std::string& name);

    // One propagation step. Tick indices must be consecutive; repeating a tick
    // is a usage error.
    void advance(int64_t tick, const std::vector<std::pair<Stream, Value>>& external_inputs);

    // Marks all streams complete; resolves default_if_empty. Call once.
    void finalize();

    int64_t current_tick() const { return tick_; }
    const std::vector<StreamEvent>& event_log() const { return log_; }
    std::string event_log_jsonl() const;

  private:
    friend class Stream;

    struct Node;
    std::size_t add_node(std::unique_ptr<Node> node);
    void check_same_graph(const Stream& s) const;

    std::vector<std::unique_ptr<Node>> nodes_;
    std::vector<StreamEvent> log_;
    int64_t tick_ = -1;
    bool finalized_ = false;
    std::size_t tick_node_ = 0;
};

}  // namespace sct
