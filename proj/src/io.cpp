#include "evcsp/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

namespace evcsp {

namespace {

[[noreturn]] void parse_fail(const std::string& what) {
    throw std::runtime_error("parse error: " + what);
}

}  // namespace

CnfProblem parse_dimacs_cnf(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    CnfProblem p;
    int declared_clauses = -1;
    std::vector<int> current;
    bool done = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "c") continue;
        if (tok[0] == '%') {  // SATLIB files end with a stray "%\n0" block
            done = true;
            break;
        }
        if (tok == "p") {
            if (declared_clauses >= 0) parse_fail("duplicate cnf header");
            std::string fmt;
            if (!(ls >> fmt >> p.num_vars >> declared_clauses) || fmt != "cnf") {
                parse_fail("malformed cnf header");
            }
            if (p.num_vars < 1 || declared_clauses < 1) {
                parse_fail("cnf header counts must be positive");
            }
            continue;
        }
        if (declared_clauses < 0) parse_fail("clause data before cnf header");
        ls.clear();
        ls.str(line);
        int lit = 0;
        while (ls >> lit) {
            if (lit == 0) {
                if (current.empty()) parse_fail("empty clause");
                p.clauses.push_back(current);
                current.clear();
                continue;
            }
            int v = std::abs(lit);
            if (v < 1 || v > p.num_vars) {
                parse_fail("literal out of range: " + std::to_string(lit));
            }
            current.push_back(lit);
        }
    }
    (void)done;
    if (declared_clauses < 0) parse_fail("missing cnf header");
    if (!current.empty()) parse_fail("unterminated clause");
    if (static_cast<int>(p.clauses.size()) != declared_clauses) {
        parse_fail("clause count mismatch: header says " + std::to_string(declared_clauses) +
                   ", found " + std::to_string(p.clauses.size()));
    }
    validate(p);
    return p;
}

std::string serialize_dimacs_cnf(const CnfProblem& p) {
    std::ostringstream out;
    out << "p cnf " << p.num_vars << ' ' << p.clauses.size() << '\n';
    for (const auto& clause : p.clauses) {
        for (int lit : clause) out << lit << ' ';
        out << "0\n";
    }
    return out.str();
}

ColoringProblem parse_dimacs_col(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    ColoringProblem p;
    p.k = 0;
    bool have_header = false;
    std::set<std::pair<int, int>> seen;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "c") continue;
        if (tok == "p") {
            if (have_header) parse_fail("duplicate edge header");
            std::string fmt;
            int declared_edges = 0;
            if (!(ls >> fmt >> p.num_vertices >> declared_edges) || fmt != "edge") {
                parse_fail("malformed edge header");
            }
            if (p.num_vertices < 1) parse_fail("vertex count must be positive");
            have_header = true;
            continue;
        }
        if (tok == "e") {
            if (!have_header) parse_fail("edge line before header");
            int a = 0, b = 0;
            if (!(ls >> a >> b)) parse_fail("malformed edge line");
            if (a < 1 || a > p.num_vertices || b < 1 || b > p.num_vertices) {
                parse_fail("edge endpoint out of range");
            }
            if (a == b) parse_fail("self-loop on vertex " + std::to_string(a));
            std::pair<int, int> key = std::minmax(a, b);
            if (seen.insert(key).second) p.edges.emplace_back(a, b);
            continue;
        }
        parse_fail("unrecognized line: " + line);
    }
    if (!have_header) parse_fail("missing edge header");
    return p;
}

std::string serialize_dimacs_col(const ColoringProblem& p) {
    std::ostringstream out;
    out << "p edge " << p.num_vertices << ' ' << p.edges.size() << '\n';
    for (const auto& [a, b] : p.edges) out << "e " << a << ' ' << b << '\n';
    return out.str();
}

TspProblem parse_distance_matrix(const std::string& text) {
    std::istringstream in(text);
    int n = 0;
    if (!(in >> n) || n < 3) parse_fail("city count must be at least 3");
    TspProblem p;
    p.n = n;
    p.d.assign(static_cast<std::size_t>(n), std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (!(in >> p.d[i][j])) parse_fail("distance matrix truncated");
        }
    }
    validate(p);
    return p;
}

std::string serialize_distance_matrix(const TspProblem& p) {
    std::ostringstream out;
    out.precision(17);
    out << p.n << '\n';
    for (int i = 0; i < p.n; ++i) {
        for (int j = 0; j < p.n; ++j) {
            if (j) out << ' ';
            out << p.d[i][j];
        }
        out << '\n';
    }
    return out.str();
}

TspProblem parse_tsplib(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int n = 0;
    bool full_matrix = false;
    bool explicit_weights = false;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        if (!key.empty() && key.back() == ':') key.pop_back();
        if (key == "DIMENSION") {
            std::string colon;
            if (!(ls >> colon)) parse_fail("malformed DIMENSION");
            if (colon == ":") {
                if (!(ls >> n)) parse_fail("malformed DIMENSION");
            } else {
                n = std::atoi(colon.c_str());
            }
        } else if (key == "EDGE_WEIGHT_TYPE") {
            std::string v;
            while (ls >> v) {
            }
            explicit_weights = (v == "EXPLICIT");
        } else if (key == "EDGE_WEIGHT_FORMAT") {
            std::string v;
            while (ls >> v) {
            }
            full_matrix = (v == "FULL_MATRIX");
        } else if (key == "EDGE_WEIGHT_SECTION") {
            break;
        } else if (key == "EOF") {
            parse_fail("no EDGE_WEIGHT_SECTION found");
        }
    }
    if (n < 3) parse_fail("DIMENSION must be at least 3");
    if (!explicit_weights || !full_matrix) {
        parse_fail("only EXPLICIT FULL_MATRIX instances are supported");
    }
    TspProblem p;
    p.n = n;
    p.d.assign(static_cast<std::size_t>(n), std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (!(in >> p.d[i][j])) parse_fail("weight section truncated");
        }
    }
    validate(p);
    return p;
}

std::string routing_dump(const Network& net) {
    std::ostringstream out;
    for (const auto& sp : net.routing.source_ports()) {
        out << net.names[sp.node] << ".out." << sp.out_port << " -> [";
        bool first = true;
        for (const auto& t : sp.targets) {
            if (!first) out << ", ";
            first = false;
            out << net.names[t.node] << ".in." << t.in_port;
        }
        out << "]\n";
    }
    return out.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

}  // namespace evcsp
