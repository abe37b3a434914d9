// Benchmark driver comparing the sequential solver against network runs on
// a batch of instances. Trial seeds are derived hierarchically
// (master -> instance -> config -> trial), so adding instances, configs, or
// trials never changes the seeds of runs that were already part of the
// batch.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "evcsp/report.hpp"
#include "evcsp/sat.hpp"

namespace evcsp {

// Fixed values: seed derivation uses the enum value, not the position in
// the requested config list.
enum class SatConfigKind : int {
    sequential = 0,
    network_ideal = 1,
    network_lossy = 2,
};

const char* to_string(SatConfigKind kind);

struct NamedCnf {
    std::string name;
    CnfProblem problem;
};

struct SatBenchOptions {
    std::vector<SatConfigKind> configs = {SatConfigKind::sequential, SatConfigKind::network_ideal,
                                          SatConfigKind::network_lossy};
    int trials = 10;
    std::uint64_t master_seed = 1;
    ProbSatParams probsat;
    SatSolveOptions net_ideal;
    SatSolveOptions net_lossy;
    unsigned threads = 0;  // 0 = one per hardware thread
};

struct SatBenchResult {
    std::vector<SatTrialRow> rows;  // ordered by (instance, config, trial)
};

SatBenchResult benchmark_sat(const std::vector<NamedCnf>& instances, const SatBenchOptions& opt);

// Column extractors for summaries. Flips of non-converged runs count at
// their cap; cycles of non-converged runs count as +inf.
std::vector<double> config_flips(const std::vector<SatTrialRow>& rows, const std::string& config);
std::vector<double> config_cycles(const std::vector<SatTrialRow>& rows, const std::string& config);

}  // namespace evcsp
