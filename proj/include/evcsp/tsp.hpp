// Tour sampling for symmetric TSP: one oscillator node per directed edge
// (faster for shorter edges), a race that extends the current partial tour,
// and a completion node that detects quiescence and restarts the network.

#pragma once

#include <cstdint>
#include <vector>

#include "evcsp/engine.hpp"
#include "evcsp/node.hpp"

namespace evcsp {

struct TspProblem {
    int n = 0;                             // city count
    std::vector<std::vector<double>> d;    // n x n distances
};

// Requires symmetry, zero diagonal, positive off-diagonal entries, n >= 3.
void validate(const TspProblem& p);

// Edge node states: 1 deactivated, 2 armed, 3 activated. Inputs: 1
// deactivate, 2 activate-if-armed, 3 re-arm, 4 force-activate (tour start).
// Emits out.1 at a tick only in state 3, then deactivates itself.
int f_edge(int i, int s);
int g_edge(int i, int s);

// Completion node states: 1 saw an edge event since the last tick, 2 quiet.
// Input 1 marks activity; a tick in the quiet state emits the reset.
int f_tc(int i, int s);
int g_tc(int i, int s);

struct TspNetwork {
    Network net;
    // edge_node[i-1][j-2] for origin i in 1..n, destination j in 2..n;
    // kNoNode on the diagonal.
    std::vector<std::vector<NodeId>> edge_node;
    NodeId tc = 0;
    static constexpr NodeId kNoNode = static_cast<NodeId>(-1);
};

// Fan-out per the race protocol: an edge (i,j) firing deactivates row i and
// column j, activates row j, and marks the completion node; the completion
// event re-arms everything and force-activates row 1. The initial reset is
// delivered as synthetic events at t=0.
TspNetwork build_tsp_network(const TspProblem& p);

// Frequencies K/d_ij + eta with eta uniform in [0, eta_scale*K/d_ij]; first
// ticks uniform within each node's own period. The completion node runs at
// tc_factor times the slowest edge frequency, first tick one full period in.
struct TspFrequencyOptions {
    double K = 1.0;
    double eta_scale = 1e-3;
    double tc_factor = 0.95;
};

OscillatorAssignment assign_edge_frequencies(const TspProblem& p, const TspNetwork& tn,
                                             const TspFrequencyOptions& fopt,
                                             std::uint64_t seed);

struct TourRecord {
    std::vector<int> cities;  // full tour starting at city 1
    double length = 0.0;      // closed unless sampling asked for open
    std::uint64_t count = 0;
};

struct TspSampleOptions {
    TspFrequencyOptions freq;
    bool open_length = false;  // drop the return edge d(last, 1)
    double max_cycles = 1e9;   // safety cap, in mean edge-node cycles
};

struct TspSampleResult {
    std::vector<TourRecord> tours;  // distinct tours, insertion order
    std::uint64_t total = 0;
};

// Samples num_tours complete tours, validating every segment (exactly n-1
// edge events forming a Hamiltonian path from city 1). A malformed segment
// throws logic_error.
TspSampleResult sample_tours(const TspProblem& p, std::uint64_t num_tours,
                             const TspSampleOptions& opt, std::uint64_t seed);

double tour_length(const TspProblem& p, const std::vector<int>& cities, bool open_length);

}  // namespace evcsp
