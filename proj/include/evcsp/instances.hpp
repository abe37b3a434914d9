// Generators for benchmark instances: random 3-SAT, Mycielski and queen
// graphs, and random symmetric distance matrices.

#pragma once

#include <cstdint>

#include "evcsp/coloring.hpp"
#include "evcsp/sat.hpp"
#include "evcsp/tsp.hpp"

namespace evcsp {

// Uniform random 3-SAT: each clause picks three distinct variables and
// independent signs. Clauses may repeat across the formula.
CnfProblem random_3sat(int num_vars, int num_clauses, std::uint64_t seed);

// Mycielski construction iterated from K2; index follows the DIMACS naming
// (mycielski_graph(3) is the 11-vertex, 20-edge graph with chromatic
// number 4, mycielski_graph(4) has 23 vertices, 71 edges, chromatic
// number 5). The k field is left 0.
ColoringProblem mycielski_graph(int index);

// n*n board, one vertex per square, edges between squares sharing a row,
// column, or diagonal. queen_graph(5) has 25 vertices and 160 edges.
ColoringProblem queen_graph(int n);

// Symmetric distances drawn uniformly from [lo, hi); redraws collisions so
// all off-diagonal values are distinct.
TspProblem random_tsp(int n, double lo, double hi, std::uint64_t seed);

}  // namespace evcsp
