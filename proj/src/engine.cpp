#include "evcsp/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <unordered_set>

namespace evcsp {

void RoutingTable::connect(NodeId src, PortIndex out_port, NodeId dst, PortIndex in_port) {
    if (finalized_) throw std::logic_error("RoutingTable: connect after finalize");
    entries_.push_back({src, out_port, {dst, in_port}});
}

void RoutingTable::finalize(std::span<const std::unique_ptr<Node>> nodes) {
    if (finalized_) return;
    num_nodes_ = static_cast<std::uint32_t>(nodes.size());

    for (const Entry& e : entries_) {
        if (e.src >= num_nodes_ || e.target.node >= num_nodes_)
            throw std::invalid_argument("routing: node id out of range");
        if (e.out_port < 1 || e.out_port > nodes[e.src]->outputs())
            throw std::invalid_argument("routing: output port out of range for " +
                                        std::to_string(e.src));
        if (e.target.in_port < 1 || e.target.in_port > nodes[e.target.node]->external_inputs())
            throw std::invalid_argument("routing: input port out of range for " +
                                        std::to_string(e.target.node));
    }

    // Group by (src, out_port); within a group target nodes must be unique.
    std::stable_sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
        if (a.src != b.src) return a.src < b.src;
        return a.out_port < b.out_port;
    });
    for (std::size_t i = 1; i < entries_.size(); ++i) {
        const Entry& p = entries_[i - 1];
        const Entry& e = entries_[i];
        if (p.src == e.src && p.out_port == e.out_port) {
            // Scan the rest of the group for a duplicate target node.
            for (std::size_t j = i; j-- > 0;) {
                const Entry& q = entries_[j];
                if (q.src != e.src || q.out_port != e.out_port) break;
                if (j < i && q.target.node == e.target.node)
                    throw std::invalid_argument(
                        "routing: output port feeds two input ports of node " +
                        std::to_string(e.target.node));
            }
        }
    }

    // CSR layout: port_base_[node] + port indexes into offsets_.
    port_base_.assign(num_nodes_ + 1, 0);
    for (std::uint32_t v = 0; v < num_nodes_; ++v)
        port_base_[v + 1] = port_base_[v] + static_cast<std::uint32_t>(nodes[v]->outputs()) + 1;
    offsets_.assign(port_base_[num_nodes_] + 1, 0);
    for (const Entry& e : entries_) offsets_[port_base_[e.src] + e.out_port + 1]++;
    for (std::size_t i = 1; i < offsets_.size(); ++i) offsets_[i] += offsets_[i - 1];
    flat_.resize(entries_.size());
    {
        std::vector<std::uint32_t> cursor(offsets_.begin(), offsets_.end() - 1);
        for (const Entry& e : entries_) flat_[cursor[port_base_[e.src] + e.out_port]++] = e.target;
    }
    finalized_ = true;
}

std::span<const Target> RoutingTable::targets(NodeId src, PortIndex out_port) const {
    const std::uint32_t slot = port_base_[src] + out_port;
    return {flat_.data() + offsets_[slot], flat_.data() + offsets_[slot + 1]};
}

std::vector<RoutingTable::SourcePort> RoutingTable::source_ports() const {
    if (!finalized_) throw std::logic_error("RoutingTable: not finalized");
    std::vector<SourcePort> out;
    for (std::uint32_t v = 0; v < num_nodes_; ++v) {
        const std::uint32_t ports = port_base_[v + 1] - port_base_[v];
        for (std::uint32_t p = 0; p < ports; ++p) {
            auto t = targets(v, static_cast<PortIndex>(p));
            if (!t.empty()) out.push_back({v, static_cast<PortIndex>(p), t});
        }
    }
    return out;
}

void validate(const ChannelModel& ch) {
    if (ch.loss_prob < 0.0 || ch.loss_prob > 1.0)
        throw std::invalid_argument("channel: loss_prob outside [0,1]");
    if (ch.max_delay_fraction < 0.0)
        throw std::invalid_argument("channel: negative max_delay_fraction");
    if (ch.mode == ChannelMode::ideal && (ch.loss_prob != 0.0 || ch.max_delay_fraction != 0.0))
        throw std::invalid_argument("channel: ideal mode requires zero loss and delay");
}

std::optional<Event> apply_channel(const Event& ev, const ChannelModel& ch,
                                   double reference_period, Rng& rng) {
    if (ch.mode == ChannelMode::ideal) return ev;
    if (ch.loss_prob > 0.0 && rng.bernoulli(ch.loss_prob)) return std::nullopt;
    Event out = ev;
    if (ch.max_delay_fraction > 0.0)
        out.deliver_at += rng.uniform() * ch.max_delay_fraction * reference_period;
    return out;
}

OscillatorAssignment draw_frequencies(std::size_t n, double lo, double hi, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("draw_frequencies: n must be >= 1");
    if (!(lo > 0.0) || !(lo < hi))
        throw std::invalid_argument("draw_frequencies: band requires 0 < lo < hi");
    Rng rng(seed);
    OscillatorAssignment out;
    out.frequency.reserve(n);
    out.first_tick.reserve(n);
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(n * 2);
    for (std::size_t i = 0; i < n; ++i) {
        double f;
        std::uint64_t bits;
        do {  // exact duplicates have probability ~0 but are redrawn anyway
            f = rng.uniform(lo, hi);
            std::memcpy(&bits, &f, sizeof bits);
        } while (!seen.insert(bits).second);
        out.frequency.push_back(f);
    }
    for (std::size_t i = 0; i < n; ++i) out.first_tick.push_back(rng.uniform());
    return out;
}

NodeId Network::add(std::unique_ptr<Node> node, std::string name) {
    nodes.push_back(std::move(node));
    names.push_back(std::move(name));
    return static_cast<NodeId>(nodes.size() - 1);
}

void Network::finalize() { routing.finalize(nodes); }

double mean_variable_frequency(const Network& net) {
    if (net.oscillators.size() != net.size())
        throw std::invalid_argument("network: oscillator assignment incomplete");
    double sum = 0.0;
    if (net.variable_ids.empty()) {
        for (double f : net.oscillators.frequency) sum += f;
        return sum / static_cast<double>(net.size());
    }
    for (NodeId id : net.variable_ids) sum += net.oscillators.frequency[id];
    return sum / static_cast<double>(net.variable_ids.size());
}

double measure_cycles(const RunReport& report, const Network& net) {
    if (!report.converged) return std::numeric_limits<double>::infinity();
    return report.end_time * mean_variable_frequency(net);
}

Engine::Engine(Network& net, ChannelModel channel, std::uint64_t seed)
    : net_(&net),
      channel_(channel),
      channel_rng_(splitmix64(seed ^ 0x6368616e6e656cull)),  // "channel"
      seed_(seed) {
    validate(channel_);
    if (net.oscillators.size() != net.size())
        throw std::invalid_argument("engine: oscillator assignment incomplete");
    for (double f : net.oscillators.frequency)
        if (!(f > 0.0)) throw std::invalid_argument("engine: frequencies must be positive");
    net.finalize();

    const std::size_t n = net.size();
    tick_count_.assign(n, 0);
    last_emitted_.assign(n, 0);
    is_variable_.assign(n, net.variable_ids.empty() ? 1 : 0);
    for (NodeId id : net.variable_ids) is_variable_[id] = 1;

    mean_var_freq_ = mean_variable_frequency(net);
    double period_sum = 0.0;
    for (double f : net.oscillators.frequency) period_sum += 1.0 / f;
    mean_period_ = period_sum / static_cast<double>(n);

    for (const auto& ie : net.initial_events) schedule(ie.at, ie.node, ie.in_port);
    for (NodeId v = 0; v < n; ++v) schedule_tick(v);
}

SimTime Engine::peek_next_time() const {
    return queue_.empty() ? std::numeric_limits<double>::infinity() : queue_.top().at;
}

void Engine::schedule(SimTime at, NodeId node, PortIndex in_port) {
    queue_.push({at, next_seq_++, node, in_port});
}

void Engine::schedule_tick(NodeId node) {
    const double f = net_->oscillators.frequency[node];
    const double t = net_->oscillators.first_tick[node] +
                     static_cast<double>(tick_count_[node]) / f;
    queue_.push({t, next_seq_++, node, 0});
}

void Engine::process(const Scheduled& ev, const StopCondition& stop) {
    if (ev.at == cascade_time_) {
        if (++cascade_count_ > stop.max_events_per_timestamp)
            throw CausalityLoopError("more than " +
                                     std::to_string(stop.max_events_per_timestamp) +
                                     " events at t=" + std::to_string(ev.at));
    } else {
        cascade_time_ = ev.at;
        cascade_count_ = 1;
    }
    now_ = ev.at;

    Node& node = *net_->nodes[ev.node];
    if (ev.in_port == 0) {
        ++oscillator_ticks_;
        ++tick_count_[ev.node];
        schedule_tick(ev.node);
    } else {
        ++delivered_;
        --pending_routed_;
    }

    const int before = is_variable_[ev.node] ? node.state() : 0;
    const PortIndex r = node.handle_event(ev.in_port);
    if (is_variable_[ev.node] && node.state() != before) ++flips_;
    if (r == 0) return;

    last_emitted_[ev.node] = r;
    if (observer_) observer_(now_, ev.node, r);

    const bool lossy = channel_.mode == ChannelMode::lossy;
    for (const Target& tgt : net_->routing.targets(ev.node, r)) {
        ++generated_;
        SimTime at = now_;
        if (lossy) {
            if (channel_.loss_prob > 0.0 && channel_rng_.bernoulli(channel_.loss_prob)) {
                ++dropped_;
                continue;
            }
            if (channel_.max_delay_fraction > 0.0) {
                const double ref = channel_.delay_reference == DelayReference::mean_period
                                       ? mean_period_
                                       : 1.0 / net_->oscillators.frequency[tgt.node];
                at += channel_rng_.uniform() * channel_.max_delay_fraction * ref;
            }
        }
        ++pending_routed_;
        schedule(at, tgt.node, tgt.in_port);
    }
}

RunReport Engine::make_report(std::uint64_t seed) const {
    RunReport rep;
    rep.converged = converged_;
    rep.cycles = converged_cycles_;
    rep.flips = flips_;
    rep.events_processed = oscillator_ticks_ + delivered_;
    rep.oscillator_ticks = oscillator_ticks_;
    rep.events_generated = generated_;
    rep.events_dropped = dropped_;
    rep.events_pending = pending_routed_;
    rep.end_time = now_;
    rep.seed = seed;
    if (net_->variable_ids.empty()) {
        rep.final_values.reserve(net_->size());
        for (NodeId id = 0; id < net_->size(); ++id) rep.final_values.push_back(node_value(id));
    } else {
        rep.final_values.reserve(net_->variable_ids.size());
        for (NodeId id : net_->variable_ids) rep.final_values.push_back(node_value(id));
    }
    return rep;
}

RunReport Engine::run(const StopCondition& stop) {
    const double max_time = stop.max_cycles / mean_var_freq_;
    const double check_dt = stop.check_interval / mean_var_freq_;

    // Check times sit on the fixed grid k * check_dt from t = 0, so resumed
    // runs keep the same schedule. Checks at time t run before events at t.
    std::uint64_t check_k =
        static_cast<std::uint64_t>(std::floor(now_ / check_dt)) + 1;

    while (!queue_.empty()) {
        const SimTime t_next = queue_.top().at;

        if (stop.converged && !stop.exact_detection) {
            double next_check = static_cast<double>(check_k) * check_dt;
            while (next_check <= t_next && next_check <= max_time) {
                if (stop.converged(*this)) {
                    now_ = next_check;
                    converged_ = true;
                    converged_cycles_ = next_check * mean_var_freq_;
                    return make_report(seed_);
                }
                ++check_k;
                next_check = static_cast<double>(check_k) * check_dt;
            }
        }
        if (t_next > max_time) {
            if (max_time > now_) now_ = max_time;
            break;
        }
        if (stop.stop_now && stop.stop_now()) break;

        const Scheduled ev = queue_.top();
        queue_.pop();
        process(ev, stop);

        if (stop.exact_detection && stop.converged && stop.converged(*this)) {
            converged_ = true;
            converged_cycles_ = now_ * mean_var_freq_;
            return make_report(seed_);
        }
    }
    return make_report(seed_);
}

}  // namespace evcsp
