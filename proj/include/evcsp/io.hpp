// Parsers and serializers for the instance formats, plus a textual routing
// dump for inspecting network configurations.

#pragma once

#include <string>

#include "evcsp/coloring.hpp"
#include "evcsp/engine.hpp"
#include "evcsp/sat.hpp"
#include "evcsp/tsp.hpp"

namespace evcsp {

// DIMACS CNF: "p cnf <vars> <clauses>", clauses are 0-terminated literal
// runs; 'c' comment lines and a trailing '%' section are ignored. The
// clause count must match the header.
CnfProblem parse_dimacs_cnf(const std::string& text);
std::string serialize_dimacs_cnf(const CnfProblem& p);

// DIMACS graph: "p edge <vertices> <edges>" and "e a b" lines. Duplicate
// edges collapse to one; self-loops are errors. The color count is not part
// of the format, so p.k is left at 0 for the caller to fill in.
ColoringProblem parse_dimacs_col(const std::string& text);
std::string serialize_dimacs_col(const ColoringProblem& p);

// Plain matrix: city count, then n*n distances in row-major order.
TspProblem parse_distance_matrix(const std::string& text);
std::string serialize_distance_matrix(const TspProblem& p);

// Minimal TSPLIB subset: EDGE_WEIGHT_TYPE EXPLICIT with FULL_MATRIX.
TspProblem parse_tsplib(const std::string& text);

// One line per routed output port: "name.out.P -> [name.in.Q, ...]".
std::string routing_dump(const Network& net);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace evcsp
