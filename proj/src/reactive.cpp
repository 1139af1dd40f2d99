#include "sct/reactive.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sct {

double as_double(const Value& v) {
    if (const auto* d = std::get_if<double>(&v)) return *d;
    if (const auto* i = std::get_if<int64_t>(&v)) return static_cast<double>(*i);
    if (const auto* b = std::get_if<bool>(&v)) return *b ? 1.0 : 0.0;
    throw std::domain_error("stream value is not numeric");
}

struct StreamGraph::Node {
    enum class Kind {
        tick,
        input,
        map,
        filter,
        zip,
        combine_latest,
        take,
        skip,
        skip_until,
        take_until,
        concat,
        sum,
        min,
        default_if_empty
    };

    Kind kind;
    std::size_t a = SIZE_MAX;
    std::size_t b = SIZE_MAX;
    std::function<Value(const Value&)> f1;
    std::function<bool(const Value&)> pred;
    std::function<Value(const Value&, const Value&)> f2;
    std::vector<std::function<void(const Value&)>> actions;
    std::string name;
    Value default_value;

    std::optional<Value> event;
    std::optional<Value> last;
    bool fired_ever = false;
    int64_t counter = 0;
    std::deque<Value> queue_a, queue_b;
    bool latched = false;  // skip_until / take_until trigger memory
    bool completed = false;
    double acc = 0.0;
    bool acc_init = false;
};

StreamGraph::StreamGraph() {
    auto node = std::make_unique<Node>();
    node->kind = Node::Kind::tick;
    tick_node_ = add_node(std::move(node));
}

StreamGraph::~StreamGraph() = default;

std::size_t StreamGraph::add_node(std::unique_ptr<Node> node) {
    nodes_.push_back(std::move(node));
    return nodes_.size() - 1;
}

void StreamGraph::check_same_graph(const Stream& s) const {
    if (s.graph() != this) throw std::invalid_argument("streams belong to different graphs");
}

Stream StreamGraph::tick_stream() const {
    return Stream(const_cast<StreamGraph*>(this), tick_node_);
}

Stream StreamGraph::input(const std::string& name) {
    auto node = std::make_unique<Node>();
    node->kind = Node::Kind::input;
    node->name = name;
    return Stream(this, add_node(std::move(node)));
}

// Combinator constructors live on Stream; the parent id is always smaller than
// the child id, so creation order is a valid topological order.
#define SCT_DERIVE(kind_)                              \
    auto node = std::make_unique<StreamGraph::Node>(); \
    node->kind = StreamGraph::Node::Kind::kind_;       \
    node->a = id_;

Stream Stream::map(std::function<Value(const Value&)> f) const {
    SCT_DERIVE(map)
    node->f1 = std::move(f);
    return Stream(graph_, graph_->add_node(std::move(node)));
}

Stream Stream::filter(std::function<bool(const Value&)> p) const {
    SCT_DERIVE(filter)
    node->pred = std::move(p);
    return Stream(graph_, graph_->add_node(std::move(node)));
}

Stream Stream::zip(const Stream& other, std::function<Value(const Value&, const Value&)> f) const {
    graph_->check_same_graph(other);
    SCT_DERIVE(zip)
    node->b = other.id_;
    node->f2 = std::move(f);
    return Stream(graph_, graph_->add_node(std::move(node)));
}

Stream Stream::combine_latest(const Stream& other,
                              std::function<Value(const Value&, const Value&)> f) const {
    graph_->check_same_graph(other);
    SCT_DERIVE(combine_latest)
    node->b = other.id_;
    node->f2 = std::move(f);
    return Stream(graph_, graph_->add_node(std::move(node)));
}

Stream Stream::take(int64_t n) const {
    SCT_DERIVE(take)
    node->counter = n;
    return Stream(graph_, graph_->add_node(std::move(node)));
}

Stream Stream::skip(int64_t n) const {
    SCT_DERIVE(skip)
    node->counter = n;
    return Stream(graph_, graph_->add_node(std::move(node)));
}

Stream Stream::skip_until(const Stream& trigger) const {
    graph_->check_same_graph(trigger);
    SCT_DERIVE(skip_until)
    node->b = trigger.id_;
    return Stream(graph_, graph_->add_node(std::move(node)));
}

Stream Stream::take_until(const Stream& stop) const {
    graph_->check_same_graph(stop);
    SCT_DERIVE(take_until)
    node->b = stop.id_;
    return Stream(graph_, graph_->add_node(std::move(node)));
}

Stream Stream::concat(const Stream& other) const {
    graph_->check_same_graph(other);
    SCT_DERIVE(concat)
    node->b = other.id_;
    return Stream(graph_, graph_->add_node(std::move(node)));
}

Stream Stream::sum() const {
    SCT_DERIVE(sum)
    return Stream(graph_, graph_->add_node(std::move(node)));
}

Stream Stream::min() const {
    SCT_DERIVE(min)
    return Stream(graph_, graph_->add_node(std::move(node)));
}

Stream Stream::default_if_empty(Value v) const {
    SCT_DERIVE(default_if_empty)
    node->default_value = std::move(v);
    return Stream(graph_, graph_->add_node(std::move(node)));
}

void Stream::for_each(std::function<void(const Value&)> action) const {
    graph_->nodes_[id_].get()->actions.push_back(std::move(action));
}

const std::optional<Value>& Stream::event() const { return graph_->nodes_[id_].get()->event; }

const std::optional<Value>& Stream::last() const { return graph_->nodes_[id_].get()->last; }

bool Stream::ever_fired() const { return graph_->nodes_[id_].get()->fired_ever; }

Stream Stream::named(const std::string& name) const {
    graph_->nodes_[id_].get()->name = name;
    return *this;
}

void StreamGraph::advance(int64_t tick, const std::vector<std::pair<Stream, Value>>& inputs) {
    if (finalized_) throw std::logic_error("advance after finalize");
    if (tick != tick_ + 1)
        throw std::logic_error(tick == tick_ ? "duplicate advance for tick"
                                             : "ticks must advance consecutively");
    tick_ = tick;
    for (auto& n : nodes_) n->event.reset();

    nodes_[tick_node_]->event = Value(tick);
    for (const auto& [stream, value] : inputs) {
        check_same_graph(stream);
        Node* n = nodes_[stream.id()].get();
        if (n->kind != Node::Kind::input)
            throw std::invalid_argument("external inputs may only target input streams");
        n->event = value;
    }

    for (auto& up : nodes_) {
        Node& n = *up;
        const auto parent = [&]() -> const std::optional<Value>& { return nodes_[n.a]->event; };
        switch (n.kind) {
            case Node::Kind::tick:
            case Node::Kind::input:
                break;
            case Node::Kind::map:
                if (parent()) n.event = n.f1(*parent());
                break;
            case Node::Kind::filter:
                if (parent() && n.pred(*parent())) n.event = *parent();
                break;
            case Node::Kind::zip: {
                if (parent()) n.queue_a.push_back(*parent());
                if (nodes_[n.b]->event) n.queue_b.push_back(*nodes_[n.b]->event);
                if (!n.queue_a.empty() && !n.queue_b.empty()) {
                    n.event = n.f2(n.queue_a.front(), n.queue_b.front());
                    n.queue_a.pop_front();
                    n.queue_b.pop_front();
                }
                break;
            }
            case Node::Kind::combine_latest: {
                // Parents were stepped earlier this tick, so fired_ever/last
                // already include current-tick events.
                const bool fired = parent().has_value() || nodes_[n.b]->event.has_value();
                if (fired && nodes_[n.a]->fired_ever && nodes_[n.b]->fired_ever)
                    n.event = n.f2(*nodes_[n.a]->last, *nodes_[n.b]->last);
                break;
            }
            case Node::Kind::take:
                if (parent() && n.counter > 0) {
                    n.event = *parent();
                    --n.counter;
                }
                break;
            case Node::Kind::skip:
                if (parent()) {
                    if (n.counter > 0)
                        --n.counter;
                    else
                        n.event = *parent();
                }
                break;
            case Node::Kind::skip_until:
                // Events pass only strictly after the trigger tick.
                if (n.latched && parent()) n.event = *parent();
                if (nodes_[n.b]->event) n.latched = true;
                break;
            case Node::Kind::take_until:
                // The stop tick itself is excluded.
                if (nodes_[n.b]->event) n.latched = true;
                if (!n.latched && parent()) n.event = *parent();
                break;
            case Node::Kind::concat:
                if (parent()) n.queue_a.push_back(*parent());
                if (nodes_[n.b]->event) n.queue_b.push_back(*nodes_[n.b]->event);
                if (!n.queue_a.empty()) {
                    n.event = n.queue_a.front();
                    n.queue_a.pop_front();
                } else if (nodes_[n.a]->completed && !n.queue_b.empty()) {
                    n.event = n.queue_b.front();
                    n.queue_b.pop_front();
                }
                break;
            case Node::Kind::sum:
                if (parent()) {
                    n.acc += as_double(*parent());
                    n.event = Value(n.acc);
                }
                break;
            case Node::Kind::min:
                if (parent()) {
                    const double v = as_double(*parent());
                    n.acc = n.acc_init ? std::min(n.acc, v) : v;
                    n.acc_init = true;
                    n.event = Value(n.acc);
                }
                break;
            case Node::Kind::default_if_empty:
                if (parent()) n.event = *parent();
                break;
        }
        if (n.event) {
            n.last = n.event;
            n.fired_ever = true;
            for (const auto& action : n.actions) action(*n.event);
            if (!n.name.empty()) log_.push_back({tick_, n.name, *n.event});
        }
    }
    // take(n) exhausted marks completion so concat can switch sources.
    for (auto& up : nodes_)
        if (up->kind == Node::Kind::take && up->counter == 0) up->completed = true;
}

void StreamGraph::finalize() {
    if (finalized_) throw std::logic_error("finalize called twice");
    finalized_ = true;
    const int64_t tick = tick_ + 1;
    for (auto& up : nodes_) up->event.reset();
    for (auto& up : nodes_) {
        Node& n = *up;
        if (n.kind == Node::Kind::default_if_empty && !n.fired_ever) {
            n.event = n.default_value;
            n.last = n.event;
            n.fired_ever = true;
            for (const auto& action : n.actions) action(*n.event);
            if (!n.name.empty()) log_.push_back({tick, n.name, *n.event});
        }
    }
}

namespace {

void append_value_json(std::ostringstream& os, const Value& v) {
    if (std::holds_alternative<std::monostate>(v)) {
        os << "null";
    } else if (const auto* d = std::get_if<double>(&v)) {
        os << *d;
    } else if (const auto* i = std::get_if<int64_t>(&v)) {
        os << *i;
    } else if (const auto* b = std::get_if<bool>(&v)) {
        os << (*b ? "true" : "false");
    } else if (const auto* s = std::get_if<std::string>(&v)) {
        os << '"' << *s << '"';
    } else if (const auto* p = std::get_if<Vec2>(&v)) {
        os << '[' << p->x << ',' << p->y << ']';
    }
}

}  // namespace

std::string StreamGraph::event_log_jsonl() const {
    std::ostringstream os;
    for (const auto& e : log_) {
        os << "{\"tick\":" << e.tick << ",\"stream\":\"" << e.stream << "\",\"value\":";
        append_value_json(os, e.value);
        os << "}\n";
    }
    return os.str();
}

}  // namespace sct
