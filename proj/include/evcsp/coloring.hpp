// Graph k-coloring as a network of vertex nodes that count neighbor colors
// and alternate between min-conflict and cyclic-successor updates.

#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "evcsp/engine.hpp"
#include "evcsp/node.hpp"

namespace evcsp {

struct ColoringProblem {
    int num_vertices = 0;
    std::vector<std::pair<int, int>> edges;  // unordered pairs, 1-based vertices
    int k = 0;                               // color count
};

// Rejects self-loops, out-of-range vertices, duplicate edges, and k < 2.
void validate(const ColoringProblem& p);

// colors[v-1] in [1,k]; true when no edge joins two equal colors.
bool proper_coloring(const ColoringProblem& p, const std::vector<int>& colors);

enum class HeuristicMode {
    alternate_every_tick,   // heuristic bit flips on every tick
    alternate_on_conflict,  // heuristic bit flips only when the color changed
};

// Vertex node with k external input ports (port c = a neighbor advertised
// color c) and k output ports. On a tick: if the counter for the current
// color is nonzero, pick argmin over the other colors (heuristic=true, ties
// to the lowest index) or the cyclic successor (heuristic=false); counters
// reset and the heuristic bit alternates per the mode; the node always
// advertises its (possibly new) color.
class VertexNode final : public Node {
public:
    VertexNode(int k, HeuristicMode mode = HeuristicMode::alternate_every_tick,
               int initial_color = 1, bool initial_heuristic = true);

    PortIndex handle_event(PortIndex input) override;
    int state() const override { return color_; }
    int external_inputs() const override { return k_; }
    int outputs() const override { return k_; }
    bool set_state(int s) override;

    const std::vector<int>& counts() const { return counts_; }
    bool heuristic() const { return heuristic_; }

private:
    int k_;
    HeuristicMode mode_;
    int color_;
    bool heuristic_;
    std::vector<int> counts_;
};

struct ColoringNetwork {
    Network net;
    std::vector<NodeId> vertices;  // index v-1
};

// Output port c of a vertex fans out to input port c of every neighbor.
ColoringNetwork build_coloring_network(const ColoringProblem& p,
                                       HeuristicMode mode = HeuristicMode::alternate_every_tick);

enum class ColorInit { all_one, random };

struct ColoringSolveOptions {
    ChannelModel channel = ChannelModel::ideal();
    double max_cycles = 1e4;
    double check_interval = 20.0;
    bool exact_detection = false;
    double band_lo = kDefaultBandLo;
    double band_hi = kDefaultBandHi;
    ColorInit init = ColorInit::all_one;
    HeuristicMode mode = HeuristicMode::alternate_every_tick;
};

struct ColoringResult {
    RunReport report;
    std::vector<int> colors;  // advertised colors at stop
    int colors_used = 0;
    bool proper = false;
};

// Runs until the advertised colors form a proper coloring or the cap.
ColoringResult solve_coloring(const ColoringProblem& p, const ColoringSolveOptions& opt,
                              std::uint64_t seed);

}  // namespace evcsp
