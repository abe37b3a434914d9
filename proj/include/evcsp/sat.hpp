// 3-SAT as a node network (one binary variable node per variable, one
// break-counting clause node per clause) plus the sequential break-only
// probSAT reference solver.

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "evcsp/engine.hpp"
#include "evcsp/node.hpp"

namespace evcsp {

struct CnfProblem {
    int num_vars = 0;
    std::vector<std::vector<int>> clauses;  // signed literals, 1-based variables
};

// Range-checks literals and rejects empty clauses.
void validate(const CnfProblem& p);

// True when every clause has exactly 3 literals over pairwise distinct
// variables (what the network backends require).
bool is_3sat(const CnfProblem& p);
void require_3sat(const CnfProblem& p);

// assignment[v-1] = value of variable v.
bool satisfied(const CnfProblem& p, const std::vector<bool>& assignment);
bool clause_satisfied(const std::vector<int>& clause, const std::vector<bool>& assignment);

// Binary variable node: advertises its value on ticks, flips and advertises
// the new value on flip events (in.1). State/port 1 = false, 2 = true.
std::unique_ptr<Node> make_sat_variable_node();

// Clause node. Inputs: in.0 oscillator; in.(2p-1)/in.(2p) = position p
// advertised false/true; in.(6+p) = break counter p. Outputs: out.p = flip
// position p, out.(3+p) = break position p.
//
// On a tick: positions whose last advertisement satisfies their literal
// count as fulfilling (never-advertised counts as not fulfilling). Zero
// fulfilling -> flip the position with the smallest break count (ties to
// the lowest position); exactly one fulfilling position j -> break_j; two
// or more -> nothing. Break counters reset after every tick.
class ClauseNode final : public Node {
public:
    explicit ClauseNode(const std::array<int, 3>& literals);

    PortIndex handle_event(PortIndex input) override;
    int state() const override { return 1 + fulfilled_count(); }
    int external_inputs() const override { return 9; }
    int outputs() const override { return 6; }

    int fulfilled_count() const;
    const std::array<int, 3>& break_counts() const { return break_count_; }
    const std::array<int, 3>& registers() const { return last_advertised_; }

private:
    std::array<int, 3> literals_;
    std::array<int, 3> last_advertised_{0, 0, 0};  // 0 unknown, 1 false, 2 true
    std::array<int, 3> break_count_{0, 0, 0};
};

struct SatNetwork {
    Network net;
    std::vector<NodeId> variables;  // index v-1
    std::vector<NodeId> clauses;
};

// Variable nodes first (ids 0..V-1), then clause nodes. Advertise ports fan
// to the state registers of containing clauses; clause flip_p goes to the
// variable's flip input and to the break inputs for that variable in every
// containing clause (itself included); break_p goes to those break inputs.
SatNetwork build_sat_network(const CnfProblem& p);

enum class SatInit { all_false, random };

struct SatSolveOptions {
    ChannelModel channel = ChannelModel::ideal();
    double max_cycles = 1e6;
    double check_interval = 20.0;
    bool exact_detection = false;
    double band_lo = kDefaultBandLo;
    double band_hi = kDefaultBandHi;
    SatInit init = SatInit::random;
    std::optional<std::vector<bool>> preload;  // overrides init when set
};

// One network solve with live access to the engine, so runs can be extended
// past convergence (stability checks).
class SatNetworkRun {
public:
    SatNetworkRun(const CnfProblem& p, const SatSolveOptions& opt, std::uint64_t seed);

    SatNetworkRun(const SatNetworkRun&) = delete;
    SatNetworkRun& operator=(const SatNetworkRun&) = delete;

    // Runs until the advertised assignment satisfies every clause, or the
    // cycle cap.
    RunReport solve();

    // Continues the run for extra_cycles more without a stop predicate.
    RunReport advance(double extra_cycles);

    std::vector<bool> assignment() const;
    bool satisfied_now() const;
    Engine& engine() { return *eng_; }
    const SatNetwork& network() const { return sn_; }

private:
    CnfProblem problem_;
    SatSolveOptions opt_;
    SatNetwork sn_;
    std::unique_ptr<Engine> eng_;
};

RunReport solve_sat_network(const CnfProblem& p, const SatSolveOptions& opt, std::uint64_t seed);

// Sequential probSAT (break-only when x = 1).
struct ProbSatParams {
    double x = 1.0;
    double y = 2.06;
    std::uint64_t max_flips = 1'000'000;
    SatInit init = SatInit::random;
};

struct ProbSatReport {
    bool solved = false;
    std::uint64_t flips = 0;
    std::vector<bool> assignment;
    std::uint64_t seed = 0;
};

// Per-flip introspection for property tests: the chosen clause, its
// variables, their break counts, and the flipped variable.
struct ProbSatHooks {
    std::function<void(int clause, const std::vector<int>& vars,
                       const std::vector<int>& breaks, int flipped)>
        on_flip;
};

ProbSatReport sequential_probsat(const CnfProblem& p, const ProbSatParams& params,
                                 std::uint64_t seed, const ProbSatHooks* hooks = nullptr);

// x^m / y^b, the flip weight of one candidate variable.
double probsat_weight(int m, int b, double x, double y);

// Index selected for a uniform draw u in [0,1); weights need not be
// normalized.
int pick_weighted(const std::vector<double>& weights, double u);

}  // namespace evcsp
