// Regenerates the committed data/ directory: satisfiability-certified random
// 3-SAT batches, the standard coloring graphs, and a six-city distance
// matrix. Deterministic for a fixed master seed.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include "evcsp/instances.hpp"
#include "evcsp/io.hpp"
#include "evcsp/rng.hpp"
#include "evcsp/sat.hpp"

namespace {

constexpr std::uint64_t kMasterSeed = 20240601;

// Draws random instances until probSAT certifies one satisfiable.
evcsp::CnfProblem certified_3sat(int num_vars, int num_clauses, std::uint64_t batch_seed,
                                 int index) {
    std::uint64_t base = evcsp::derive_seed(batch_seed, static_cast<std::uint64_t>(index));
    for (std::uint64_t attempt = 0; attempt < 1000; ++attempt) {
        std::uint64_t inst_seed = evcsp::derive_seed(base, attempt);
        auto p = evcsp::random_3sat(num_vars, num_clauses, inst_seed);
        evcsp::ProbSatParams params;
        params.max_flips = 400'000;
        for (int run = 0; run < 8; ++run) {
            auto rep = evcsp::sequential_probsat(
                p, params, evcsp::derive_seed(inst_seed, static_cast<std::uint64_t>(run)));
            if (rep.solved) return p;
        }
    }
    throw std::runtime_error("no satisfiable instance found");
}

std::string two_digits(int i) { return (i < 10 ? "0" : "") + std::to_string(i); }

}  // namespace

int main(int argc, char** argv) {
    std::string out_dir = argc > 1 ? argv[1] : "data";
    namespace fs = std::filesystem;
    fs::create_directories(out_dir + "/uf20");
    fs::create_directories(out_dir + "/uf50");

    std::uint64_t uf20_seed = evcsp::derive_seed(kMasterSeed, 20);
    for (int i = 1; i <= 20; ++i) {
        auto p = certified_3sat(20, 87, uf20_seed, i);
        evcsp::write_file(out_dir + "/uf20/uf20-" + two_digits(i) + ".cnf",
                          evcsp::serialize_dimacs_cnf(p));
        std::cout << "uf20-" << two_digits(i) << " done\n";
    }
    std::uint64_t uf50_seed = evcsp::derive_seed(kMasterSeed, 50);
    for (int i = 1; i <= 10; ++i) {
        auto p = certified_3sat(50, 218, uf50_seed, i);
        evcsp::write_file(out_dir + "/uf50/uf50-" + two_digits(i) + ".cnf",
                          evcsp::serialize_dimacs_cnf(p));
        std::cout << "uf50-" << two_digits(i) << " done\n";
    }

    evcsp::write_file(out_dir + "/myciel3.col",
                      evcsp::serialize_dimacs_col(evcsp::mycielski_graph(3)));
    evcsp::write_file(out_dir + "/myciel4.col",
                      evcsp::serialize_dimacs_col(evcsp::mycielski_graph(4)));
    evcsp::write_file(out_dir + "/queen5_5.col",
                      evcsp::serialize_dimacs_col(evcsp::queen_graph(5)));
    evcsp::write_file(out_dir + "/triangle.col", "p edge 3 3\ne 1 2\ne 2 3\ne 1 3\n");

    auto six = evcsp::random_tsp(6, 1.0, 10.0, evcsp::derive_seed(kMasterSeed, 6));
    evcsp::write_file(out_dir + "/six_cities.mat", evcsp::serialize_distance_matrix(six));
    std::cout << "graphs and matrix done\n";
    return 0;
}
