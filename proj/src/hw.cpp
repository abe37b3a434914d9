#include "evcsp/hw.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <set>

#include "evcsp/rng.hpp"

namespace evcsp {

namespace {

void check_arity(int arity) {
    if (arity != 2 && arity != 4 && arity != 6 && arity != 8)
        throw std::invalid_argument("hw node: arity must be 2, 4, 6, or 8");
}

}  // namespace

int f_hw(int mask, int s, int arity) {
    check_arity(arity);
    if (mask < 0 || mask >= (1 << arity))
        throw std::out_of_range("f_hw: mask out of range");
    if (s < 1 || s > arity) throw std::out_of_range("f_hw: state out of range");
    if (mask == 0 || ((mask >> (s - 1)) & 1)) return s;
    return std::countr_zero(static_cast<unsigned>(mask)) + 1;
}

int g_hw(int mask, int s) { return mask == 0 ? s : 0; }

HwNode::HwNode(int arity, int initial_state) : arity_(arity), state_(initial_state) {
    check_arity(arity);
    if (initial_state < 1 || initial_state > arity)
        throw std::invalid_argument("hw node: initial state out of range");
}

PortIndex HwNode::handle_event(PortIndex input) {
    const PortIndex r = g_hw(input, state_);
    state_ = f_hw(input, state_, arity_);
    return r;
}

bool HwNode::set_state(int s) {
    if (s < 1 || s > arity_) return false;
    state_ = s;
    return true;
}

int HwArrayConfig::add(const std::string& name, int arity) {
    check_arity(arity);
    const int slots = arity / 2;
    if (used_ + slots > capacity_)
        throw std::invalid_argument("hw array: capacity of " + std::to_string(capacity_) +
                                    " slots exceeded");
    const int slot = used_;
    used_ += slots;
    allocations_.push_back({name, arity, slot});
    return slot;
}

HwSatNetwork build_hw_sat(const CnfProblem& p) {
    require_3sat(p);

    HwSatNetwork hn;
    hn.variables.reserve(p.num_vars);
    for (int v = 1; v <= p.num_vars; ++v) {
        const std::string name = "x" + std::to_string(v);
        hn.array.add(name, 2);
        hn.variables.push_back(hn.net.add(std::make_unique<HwNode>(2, 1), name));
    }
    hn.clauses.reserve(p.clauses.size());
    for (std::size_t c = 0; c < p.clauses.size(); ++c) {
        const std::string name = "c" + std::to_string(c + 1);
        hn.array.add(name, 4);
        hn.clauses.push_back(hn.net.add(std::make_unique<HwNode>(4, 3), name));
    }

    // Clauses holding each literal, by sign.
    std::vector<std::vector<std::size_t>> with_pos(p.num_vars), with_neg(p.num_vars);
    for (std::size_t c = 0; c < p.clauses.size(); ++c)
        for (int lit : p.clauses[c])
            (lit > 0 ? with_pos : with_neg)[std::abs(lit) - 1].push_back(c);

    for (std::size_t c = 0; c < p.clauses.size(); ++c) {
        const NodeId cn = hn.clauses[c];
        for (int k = 1; k <= 3; ++k) {
            const int lit = p.clauses[c][static_cast<std::size_t>(k) - 1];
            const int v = std::abs(lit);
            const NodeId vn = hn.variables[v - 1];
            const int fulfill_port = lit > 0 ? 2 : 1;

            hn.net.routing.connect(vn, fulfill_port, cn, 8);
            hn.net.routing.connect(vn, 3 - fulfill_port, cn, 8 + (1 << (k - 1)));

            hn.net.routing.connect(cn, k, vn, 1 << (fulfill_port - 1));
            for (std::size_t c2 : (lit > 0 ? with_pos : with_neg)[v - 1])
                if (c2 != c) hn.net.routing.connect(cn, k, hn.clauses[c2], 8);
        }
        hn.net.routing.connect(cn, 4, cn, 4);
    }

    hn.net.variable_ids = hn.variables;
    hn.net.finalize();
    return hn;
}

namespace {

// Frequencies sorted ascending; ids in `low_group` take the lowest draws.
OscillatorAssignment ranked_frequencies(std::size_t n, const std::vector<NodeId>& low_group,
                                        double lo, double hi, std::uint64_t seed) {
    OscillatorAssignment drawn = draw_frequencies(n, lo, hi, seed);
    std::vector<double> sorted = drawn.frequency;
    std::sort(sorted.begin(), sorted.end());

    OscillatorAssignment out;
    out.frequency.assign(n, 0.0);
    out.first_tick = drawn.first_tick;
    std::vector<char> is_low(n, 0);
    for (NodeId id : low_group) is_low[id] = 1;
    std::size_t next = 0;
    for (std::size_t id = 0; id < n; ++id)
        if (is_low[id]) out.frequency[id] = sorted[next++];
    for (std::size_t id = 0; id < n; ++id)
        if (!is_low[id]) out.frequency[id] = sorted[next++];
    return out;
}

std::vector<bool> hw_initial_assignment(const CnfProblem& p, const HwSatSolveOptions& opt,
                                        std::uint64_t seed) {
    if (opt.preload) {
        if (static_cast<int>(opt.preload->size()) != p.num_vars)
            throw std::invalid_argument("hw sat: preload size mismatch");
        return *opt.preload;
    }
    std::vector<bool> a(p.num_vars, false);
    if (opt.init == SatInit::random) {
        Rng rng(splitmix64(seed ^ 0x696e6974ull));
        for (int v = 0; v < p.num_vars; ++v) a[v] = rng.uniform_below(2) == 1;
    }
    return a;
}

}  // namespace

HwSatRun::HwSatRun(const CnfProblem& p, const HwSatSolveOptions& opt, std::uint64_t seed)
    : problem_(p), opt_(opt), hn_(build_hw_sat(p)) {
    hn_.net.oscillators = ranked_frequencies(hn_.net.size(), hn_.clauses, opt.band_lo,
                                             opt.band_hi, splitmix64(seed ^ 0x6f7363ull));
    const std::vector<bool> init = hw_initial_assignment(p, opt, seed);
    for (int v = 0; v < p.num_vars; ++v)
        hn_.net.nodes[hn_.variables[v]]->set_state(init[v] ? 2 : 1);
    eng_ = std::make_unique<Engine>(hn_.net, opt.channel, seed);
}

std::vector<bool> HwSatRun::assignment() const {
    std::vector<bool> a(problem_.num_vars);
    for (int v = 0; v < problem_.num_vars; ++v)
        a[v] = eng_->node_value(hn_.variables[v]) == 2;
    return a;
}

bool HwSatRun::satisfied_now() const { return satisfied(problem_, assignment()); }

RunReport HwSatRun::solve() {
    StopCondition stop;
    stop.max_cycles = opt_.max_cycles;
    stop.check_interval = opt_.check_interval;
    stop.exact_detection = opt_.exact_detection;
    stop.converged = [this](const Engine&) { return satisfied_now(); };
    return eng_->run(stop);
}

RunReport HwSatRun::advance(double extra_cycles) {
    StopCondition stop;
    stop.max_cycles = eng_->now() * eng_->mean_frequency() + extra_cycles;
    return eng_->run(stop);
}

RunReport solve_hw_sat(const CnfProblem& p, const HwSatSolveOptions& opt, std::uint64_t seed) {
    return HwSatRun(p, opt, seed).solve();
}

int hw_color_image(int r, int color, int k_even) {
    if (k_even <= 4) return r % 2 == 0 ? color : k_even + 1 - color;
    return (color - 1 - 2 * r + 2 * k_even) % k_even + 1;
}

int hw_color_from_state(int r, int state, int k_even) {
    if (k_even <= 4) return r % 2 == 0 ? state : k_even + 1 - state;
    return (state - 1 + 2 * r) % k_even + 1;
}

HwColoringNetwork build_hw_coloring(const ColoringProblem& p) {
    validate(p);
    if (p.k > 8) throw std::invalid_argument("hw coloring: k above 8 does not fit a chip node");

    HwColoringNetwork hc;
    hc.k_even = p.k + (p.k % 2);
    hc.ring_size = hc.k_even / 2;
    const int m = hc.ring_size;
    const int full_mask = (1 << hc.k_even) - 1;

    hc.vertex_nodes.resize(p.num_vertices);
    for (int v = 1; v <= p.num_vertices; ++v) {
        for (int r = 0; r < m; ++r) {
            const std::string name =
                "v" + std::to_string(v) + (r == 0 ? "" : "_r" + std::to_string(r));
            hc.array.add(name, hc.k_even);
            hc.vertex_nodes[v - 1].push_back(hc.net.add(
                std::make_unique<HwNode>(hc.k_even, hw_color_image(r, 1, hc.k_even)), name));
        }
        hc.mains.push_back(hc.vertex_nodes[v - 1][0]);
    }

    // Ring coupling: each row's advertisement forces the next row onto its
    // own image of the same color, so the link map composes to the identity
    // around the ring and any color is a consistent configuration.
    for (int v = 0; v < p.num_vertices; ++v) {
        for (int r = 0; m > 1 && r < m; ++r) {
            const int next = (r + 1) % m;
            const NodeId from = hc.vertex_nodes[v][r];
            const NodeId to = hc.vertex_nodes[v][next];
            for (int port = 1; port <= hc.k_even; ++port) {
                const int color = hw_color_from_state(r, port, hc.k_even);
                const int target = hw_color_image(next, color, hc.k_even);
                hc.net.routing.connect(from, port, to, 1 << (target - 1));
            }
        }
    }

    // Neighbor constraint: main's advertisement of color p strips each ring
    // node's image of p (and of the padding color for odd k).
    std::vector<std::vector<int>> neighbors(p.num_vertices);
    for (const auto& [a, b] : p.edges) {
        neighbors[a - 1].push_back(b - 1);
        neighbors[b - 1].push_back(a - 1);
    }
    for (int v = 0; v < p.num_vertices; ++v) {
        const NodeId main = hc.vertex_nodes[v][0];
        for (int port = 1; port <= hc.k_even; ++port) {
            for (int w : neighbors[v]) {
                for (int r = 0; r < m; ++r) {
                    int mask = full_mask & ~(1 << (hw_color_image(r, port, hc.k_even) - 1));
                    if (p.k % 2 == 1)
                        mask &= ~(1 << (hw_color_image(r, hc.k_even, hc.k_even) - 1));
                    hc.net.routing.connect(main, port, hc.vertex_nodes[w][r], mask);
                }
            }
        }
    }

    hc.net.variable_ids = hc.mains;
    hc.net.finalize();
    return hc;
}

ColoringResult solve_hw_coloring(const ColoringProblem& p, const HwColoringSolveOptions& opt,
                                 std::uint64_t seed) {
    HwColoringNetwork hc = build_hw_coloring(p);
    hc.net.oscillators = draw_frequencies(hc.net.size(), opt.band_lo, opt.band_hi,
                                          splitmix64(seed ^ 0x6f7363ull));
    if (opt.init == ColorInit::random) {
        Rng rng(splitmix64(seed ^ 0x696e6974ull));
        for (int v = 0; v < p.num_vertices; ++v) {
            const int color = 1 + static_cast<int>(rng.uniform_below(p.k));
            for (int r = 0; r < hc.ring_size; ++r)
                hc.net.nodes[hc.vertex_nodes[v][r]]->set_state(
                    hw_color_image(r, color, hc.k_even));
        }
    }

    Engine eng(hc.net, opt.channel, seed);
    auto colors_now = [&] {
        std::vector<int> colors(p.num_vertices);
        for (int v = 0; v < p.num_vertices; ++v) colors[v] = eng.node_value(hc.mains[v]);
        return colors;
    };

    StopCondition stop;
    stop.max_cycles = opt.max_cycles;
    stop.check_interval = opt.check_interval;
    stop.exact_detection = opt.exact_detection;
    stop.converged = [&](const Engine&) { return proper_coloring(p, colors_now()); };

    ColoringResult out;
    out.report = eng.run(stop);
    out.colors = colors_now();
    out.proper = proper_coloring(p, out.colors);
    std::set<int> used(out.colors.begin(), out.colors.end());
    out.colors_used = static_cast<int>(used.size());
    return out;
}

}  // namespace evcsp
