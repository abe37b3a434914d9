// Deterministic discrete-event engine. Every node carries a free-running
// oscillator that delivers ticks to its own port in.0; emitted events are
// fanned out along the routing table, each copy passing through the channel
// model. Events are processed in (time, creation sequence) order, so a run
// is a pure function of the network, the channel, and the seed.

#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "evcsp/node.hpp"
#include "evcsp/rng.hpp"

namespace evcsp {

using NodeId = std::uint32_t;
using SimTime = double;  // one nominal oscillation period = 1.0

// A pending emission, identified by its source. Targets are resolved
// through the routing table at fan-out time.
struct Event {
    NodeId source = 0;
    PortIndex out_port = 0;
    SimTime deliver_at = 0.0;
    std::uint64_t seq = 0;
};

struct Target {
    NodeId node;
    PortIndex in_port;
};

// Fan-out map from (node, output port) to input ports of other nodes.
// A given output port may feed at most one input port per target node.
class RoutingTable {
public:
    void connect(NodeId src, PortIndex out_port, NodeId dst, PortIndex in_port);

    // Validates port ranges and the one-port-per-target-node rule, then
    // freezes the table into a flat lookup structure.
    void finalize(std::span<const std::unique_ptr<Node>> nodes);

    bool finalized() const { return finalized_; }
    std::span<const Target> targets(NodeId src, PortIndex out_port) const;
    std::size_t entry_count() const { return entries_.size(); }

    // All finalized entries grouped by (source node, output port), for
    // trace export and textual dumps.
    struct SourcePort {
        NodeId node;
        PortIndex out_port;
        std::span<const Target> targets;
    };
    std::vector<SourcePort> source_ports() const;

private:
    struct Entry {
        NodeId src;
        PortIndex out_port;
        Target target;
    };
    std::vector<Entry> entries_;
    bool finalized_ = false;
    std::uint32_t num_nodes_ = 0;
    std::vector<std::uint32_t> port_base_;    // node -> first slot in offsets_
    std::vector<std::uint32_t> offsets_;      // per (node, port): begin index
    std::vector<Target> flat_;
};

enum class ChannelMode { ideal, lossy };

// Which period scales the per-event delay bound.
enum class DelayReference { mean_period, target_period };

struct ChannelModel {
    ChannelMode mode = ChannelMode::ideal;
    double loss_prob = 0.0;            // probability a routed copy is dropped
    double max_delay_fraction = 0.0;   // delay ~ U[0, fraction * reference period]
    DelayReference delay_reference = DelayReference::mean_period;

    static ChannelModel ideal() { return {}; }
    static ChannelModel lossy(double loss, double delay_fraction) {
        return {ChannelMode::lossy, loss, delay_fraction, DelayReference::mean_period};
    }
};

void validate(const ChannelModel& ch);

// Applies the channel to one event: identity in ideal mode; in lossy mode
// the event is dropped with probability loss_prob, otherwise delayed by
// U[0, max_delay_fraction * reference_period].
std::optional<Event> apply_channel(const Event& ev, const ChannelModel& ch,
                                   double reference_period, Rng& rng);

// Per-node oscillator frequency (cycles per time unit) and first tick time.
struct OscillatorAssignment {
    std::vector<double> frequency;
    std::vector<double> first_tick;

    std::size_t size() const { return frequency.size(); }
};

// Draws n frequencies i.i.d. uniform on [lo, hi] and first-tick offsets
// uniform on [0, 1). Exact duplicate frequencies are redrawn, so the result
// is pairwise distinct; the draw is bit-stable for a fixed seed.
OscillatorAssignment draw_frequencies(std::size_t n, double lo, double hi, std::uint64_t seed);

inline constexpr double kDefaultBandLo = 0.9;
inline constexpr double kDefaultBandHi = 1.1;

class Engine;

// Run control. max_cycles and check times are measured in oscillation
// cycles of the mean problem-variable frequency, counted from t = 0.
struct StopCondition {
    double max_cycles = std::numeric_limits<double>::infinity();
    double check_interval = 20.0;
    std::function<bool(const Engine&)> converged;

    // Evaluate the predicate after every processed event instead of on the
    // check grid; convergence times are then exact, not quantized.
    bool exact_detection = false;

    // Optional external stop (checked before each event).
    std::function<bool()> stop_now;

    std::uint64_t max_events_per_timestamp = 1'000'000;
};

struct RunReport {
    bool converged = false;
    double cycles = std::numeric_limits<double>::infinity();
    std::uint64_t flips = 0;
    std::uint64_t events_processed = 0;   // oscillator ticks + delivered copies
    std::uint64_t oscillator_ticks = 0;
    std::uint64_t events_generated = 0;   // routed copies created
    std::uint64_t events_dropped = 0;     // copies lost in the channel
    std::uint64_t events_pending = 0;     // routed copies still queued at stop
    SimTime end_time = 0.0;
    std::vector<int> final_values;        // value of each variable node
    std::uint64_t seed = 0;
};

// Thrown when more than max_events_per_timestamp events are processed at a
// single timestamp (a zero-delay event cycle).
class CausalityLoopError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A node network plus everything needed to run it. Problem builders fill
// nodes/routing/names; oscillators are assigned separately.
struct Network {
    std::vector<std::unique_ptr<Node>> nodes;
    std::vector<std::string> names;
    RoutingTable routing;
    OscillatorAssignment oscillators;

    // Problem-variable nodes: their state changes count as flips and their
    // mean frequency defines the cycle unit. Empty = all nodes.
    std::vector<NodeId> variable_ids;

    // Synthetic deliveries scheduled before any oscillator tick.
    struct SyntheticEvent {
        NodeId node;
        PortIndex in_port;
        SimTime at = 0.0;
    };
    std::vector<SyntheticEvent> initial_events;

    NodeId add(std::unique_ptr<Node> node, std::string name);
    std::size_t size() const { return nodes.size(); }

    // Finalizes routing against the node set (idempotent).
    void finalize();
};

// Mean frequency over the given nodes (all nodes when empty).
double mean_variable_frequency(const Network& net);

// Cycles-to-solution metric: elapsed time at convergence times the mean
// problem-variable frequency. Infinity when the run did not converge.
double measure_cycles(const RunReport& report, const Network& net);

class Engine {
public:
    // The network must outlive the engine. Finalizes routing if needed and
    // schedules initial events plus every oscillator's first tick.
    Engine(Network& net, ChannelModel channel, std::uint64_t seed);

    // Processes events until convergence, the cycle cap, or an external
    // stop. Resumable: a second call continues from the current state;
    // counters in the report are cumulative over the engine's lifetime.
    RunReport run(const StopCondition& stop);

    SimTime now() const { return now_; }
    SimTime peek_next_time() const;
    int node_state(NodeId id) const { return net_->nodes[id]->state(); }

    // Last non-dummy output port emitted by the node (its advertised
    // value); falls back to the current state before the first emission.
    int node_value(NodeId id) const {
        return last_emitted_[id] != 0 ? last_emitted_[id] : net_->nodes[id]->state();
    }

    std::uint64_t flips() const { return flips_; }
    double mean_frequency() const { return mean_var_freq_; }
    double mean_period() const { return mean_period_; }
    const Network& network() const { return *net_; }

    // Called on every non-dummy emission, before fan-out. Keep it cheap.
    using EmitObserver = std::function<void(SimTime, NodeId, PortIndex)>;
    void set_emit_observer(EmitObserver obs) { observer_ = std::move(obs); }

private:
    struct Scheduled {
        SimTime at;
        std::uint64_t seq;
        NodeId node;
        PortIndex in_port;  // 0 = oscillator tick
    };
    struct Later {
        bool operator()(const Scheduled& a, const Scheduled& b) const {
            return a.at > b.at || (a.at == b.at && a.seq > b.seq);
        }
    };

    void schedule(SimTime at, NodeId node, PortIndex in_port);
    void schedule_tick(NodeId node);
    void process(const Scheduled& ev, const StopCondition& stop);
    RunReport make_report(std::uint64_t seed) const;

    Network* net_;
    ChannelModel channel_;
    Rng channel_rng_;
    std::uint64_t seed_;

    std::priority_queue<Scheduled, std::vector<Scheduled>, Later> queue_;
    std::uint64_t next_seq_ = 0;
    SimTime now_ = 0.0;

    std::vector<std::uint64_t> tick_count_;  // next tick index per node
    std::vector<int> last_emitted_;
    std::vector<char> is_variable_;
    double mean_var_freq_ = 1.0;
    double mean_period_ = 1.0;

    std::uint64_t flips_ = 0;
    std::uint64_t oscillator_ticks_ = 0;
    std::uint64_t delivered_ = 0;
    std::uint64_t generated_ = 0;
    std::uint64_t dropped_ = 0;
    std::uint64_t pending_routed_ = 0;

    SimTime cascade_time_ = -1.0;
    std::uint64_t cascade_count_ = 0;

    bool converged_ = false;
    double converged_cycles_ = std::numeric_limits<double>::infinity();

    EmitObserver observer_;
};

}  // namespace evcsp
