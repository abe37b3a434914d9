#include "evcsp/instances.hpp"

#include <set>
#include <stdexcept>

#include "evcsp/rng.hpp"

namespace evcsp {

CnfProblem random_3sat(int num_vars, int num_clauses, std::uint64_t seed) {
    if (num_vars < 3) throw std::invalid_argument("need at least 3 variables");
    if (num_clauses < 1) throw std::invalid_argument("need at least 1 clause");
    Rng rng(seed);
    CnfProblem p;
    p.num_vars = num_vars;
    p.clauses.reserve(static_cast<std::size_t>(num_clauses));
    for (int c = 0; c < num_clauses; ++c) {
        int v[3];
        v[0] = 1 + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(num_vars)));
        do {
            v[1] = 1 + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(num_vars)));
        } while (v[1] == v[0]);
        do {
            v[2] = 1 + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(num_vars)));
        } while (v[2] == v[0] || v[2] == v[1]);
        std::vector<int> clause(3);
        for (int i = 0; i < 3; ++i) {
            clause[i] = rng.bernoulli(0.5) ? v[i] : -v[i];
        }
        p.clauses.push_back(std::move(clause));
    }
    validate(p);
    return p;
}

ColoringProblem mycielski_graph(int index) {
    if (index < 2) throw std::invalid_argument("mycielski index must be >= 2");
    // K2 as the base; each round maps G(n, m) to G(2n + 1, 3m + n).
    int n = 2;
    std::vector<std::pair<int, int>> edges = {{1, 2}};
    for (int round = 1; round < index; ++round) {
        std::vector<std::pair<int, int>> next = edges;
        // shadow vertex for i is n + i, apex is 2n + 1
        for (const auto& [a, b] : edges) {
            next.emplace_back(a, n + b);
            next.emplace_back(n + a, b);
        }
        int apex = 2 * n + 1;
        for (int i = 1; i <= n; ++i) next.emplace_back(n + i, apex);
        edges = std::move(next);
        n = apex;
    }
    ColoringProblem p;
    p.num_vertices = n;
    p.edges = std::move(edges);
    p.k = 0;
    return p;
}

ColoringProblem queen_graph(int n) {
    if (n < 2) throw std::invalid_argument("board size must be >= 2");
    ColoringProblem p;
    p.num_vertices = n * n;
    p.k = 0;
    auto id = [n](int r, int c) { return r * n + c + 1; };
    for (int r1 = 0; r1 < n; ++r1) {
        for (int c1 = 0; c1 < n; ++c1) {
            for (int r2 = r1; r2 < n; ++r2) {
                for (int c2 = (r2 == r1 ? c1 + 1 : 0); c2 < n; ++c2) {
                    bool attack =
                        r1 == r2 || c1 == c2 || (r2 - r1) == (c2 - c1) || (r2 - r1) == (c1 - c2);
                    if (attack) p.edges.emplace_back(id(r1, c1), id(r2, c2));
                }
            }
        }
    }
    return p;
}

TspProblem random_tsp(int n, double lo, double hi, std::uint64_t seed) {
    if (n < 3) throw std::invalid_argument("need at least 3 cities");
    if (!(lo > 0.0) || !(hi > lo)) {
        throw std::invalid_argument("need 0 < lo < hi");
    }
    Rng rng(seed);
    TspProblem p;
    p.n = n;
    p.d.assign(static_cast<std::size_t>(n), std::vector<double>(n, 0.0));
    std::set<double> used;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double v;
            do {
                v = rng.uniform(lo, hi);
            } while (!used.insert(v).second);
            p.d[i][j] = v;
            p.d[j][i] = v;
        }
    }
    validate(p);
    return p;
}

}  // namespace evcsp
