#include "evcsp/coloring.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "evcsp/rng.hpp"

namespace evcsp {

void validate(const ColoringProblem& p) {
    if (p.num_vertices < 1) throw std::invalid_argument("coloring: no vertices");
    if (p.k < 2) throw std::invalid_argument("coloring: k must be at least 2");
    std::set<std::pair<int, int>> seen;
    for (const auto& [a, b] : p.edges) {
        if (a < 1 || a > p.num_vertices || b < 1 || b > p.num_vertices)
            throw std::invalid_argument("coloring: vertex out of range");
        if (a == b) throw std::invalid_argument("coloring: self-loop");
        if (!seen.insert(std::minmax(a, b)).second)
            throw std::invalid_argument("coloring: duplicate edge");
    }
}

bool proper_coloring(const ColoringProblem& p, const std::vector<int>& colors) {
    if (colors.size() != static_cast<std::size_t>(p.num_vertices)) return false;
    for (int c : colors)
        if (c < 1 || c > p.k) return false;
    for (const auto& [a, b] : p.edges)
        if (colors[a - 1] == colors[b - 1]) return false;
    return true;
}

VertexNode::VertexNode(int k, HeuristicMode mode, int initial_color, bool initial_heuristic)
    : k_(k), mode_(mode), color_(initial_color), heuristic_(initial_heuristic),
      counts_(k, 0) {
    if (k < 2) throw std::invalid_argument("vertex node: k must be at least 2");
    if (initial_color < 1 || initial_color > k)
        throw std::invalid_argument("vertex node: initial color out of range");
}

bool VertexNode::set_state(int s) {
    if (s < 1 || s > k_) return false;
    color_ = s;
    return true;
}

PortIndex VertexNode::handle_event(PortIndex input) {
    if (input == 0) {
        const bool conflicted = counts_[color_ - 1] > 0;
        if (conflicted) {
            if (heuristic_) {
                int best = 0;
                for (int c = 1; c <= k_; ++c) {
                    if (c == color_) continue;
                    if (best == 0 || counts_[c - 1] < counts_[best - 1]) best = c;
                }
                color_ = best;
            } else {
                color_ = color_ % k_ + 1;
            }
        }
        std::fill(counts_.begin(), counts_.end(), 0);
        if (mode_ == HeuristicMode::alternate_every_tick || conflicted)
            heuristic_ = !heuristic_;
        return color_;
    }
    if (input >= 1 && input <= k_) {
        ++counts_[input - 1];
        return 0;
    }
    throw std::out_of_range("vertex node: input port " + std::to_string(input));
}

ColoringNetwork build_coloring_network(const ColoringProblem& p, HeuristicMode mode) {
    validate(p);
    ColoringNetwork cn;
    cn.vertices.reserve(p.num_vertices);
    for (int v = 1; v <= p.num_vertices; ++v)
        cn.vertices.push_back(
            cn.net.add(std::make_unique<VertexNode>(p.k, mode), "v" + std::to_string(v)));
    for (const auto& [a, b] : p.edges) {
        for (int c = 1; c <= p.k; ++c) {
            cn.net.routing.connect(cn.vertices[a - 1], c, cn.vertices[b - 1], c);
            cn.net.routing.connect(cn.vertices[b - 1], c, cn.vertices[a - 1], c);
        }
    }
    cn.net.variable_ids = cn.vertices;
    cn.net.finalize();
    return cn;
}

ColoringResult solve_coloring(const ColoringProblem& p, const ColoringSolveOptions& opt,
                              std::uint64_t seed) {
    ColoringNetwork cn = build_coloring_network(p, opt.mode);
    cn.net.oscillators = draw_frequencies(cn.net.size(), opt.band_lo, opt.band_hi,
                                          splitmix64(seed ^ 0x6f7363ull));
    if (opt.init == ColorInit::random) {
        Rng rng(splitmix64(seed ^ 0x696e6974ull));
        for (NodeId id : cn.vertices)
            cn.net.nodes[id]->set_state(1 + static_cast<int>(rng.uniform_below(p.k)));
    }

    Engine eng(cn.net, opt.channel, seed);
    auto colors_now = [&] {
        std::vector<int> colors(p.num_vertices);
        for (int v = 0; v < p.num_vertices; ++v) colors[v] = eng.node_value(cn.vertices[v]);
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
