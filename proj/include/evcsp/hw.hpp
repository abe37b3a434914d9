// Emulation of the prototype chip's node logic: n-valued nodes whose input
// ports are allowed-state bitmasks, a 64x32 slot array budget, and the
// hardware routing schemes for 3-SAT and graph coloring.

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "evcsp/coloring.hpp"
#include "evcsp/engine.hpp"
#include "evcsp/node.hpp"
#include "evcsp/sat.hpp"

namespace evcsp {

// State update: mask 0 (oscillator) or current state allowed -> unchanged;
// otherwise the lowest allowed state. Bit p (lsb = bit 1) allows state p.
int f_hw(int mask, int s, int arity);

// Emission: the state on oscillator events, suppressed otherwise.
int g_hw(int mask, int s);

// n-valued chip node, n in {2,4,6,8}: 2^n-1 mask input ports, n outputs.
class HwNode final : public Node {
public:
    explicit HwNode(int arity, int initial_state = 1);

    PortIndex handle_event(PortIndex input) override;
    int state() const override { return state_; }
    int external_inputs() const override { return (1 << arity_) - 1; }
    int outputs() const override { return arity_; }
    bool set_state(int s) override;

private:
    int arity_;
    int state_;
};

// Slot budget of the 64x32 binary-node array; an n-valued node merges n/2
// binary slots.
class HwArrayConfig {
public:
    struct Allocation {
        std::string name;
        int arity;
        int slot;  // first slot index
    };

    HwArrayConfig(int rows = 64, int cols = 32) : capacity_(rows * cols) {}

    // Reserves slots for one node; throws when the array is full.
    int add(const std::string& name, int arity);

    int capacity() const { return capacity_; }
    int used() const { return used_; }
    const std::vector<Allocation>& allocations() const { return allocations_; }

private:
    int capacity_;
    int used_ = 0;
    std::vector<Allocation> allocations_;
};

struct HwSatNetwork {
    Network net;
    HwArrayConfig array;
    std::vector<NodeId> variables;  // binary nodes, index v-1
    std::vector<NodeId> clauses;    // 4-valued nodes, state 4 = fulfilled
};

// Hardware 3-SAT routing. For variable v at position k (1..3) of clause c:
// v's fulfilling advertise port -> c.in.8 (allow only the fulfilled state);
// the complementary port -> c.in.(8 + 2^(k-1)) (allow fulfilled or "flip
// position k"). Clause out.k -> v's single-bit fulfilling mask, plus in.8 of
// every other clause containing the same literal; out.4 -> own in.4, which
// recycles a fulfilled clause to state 3 at its next tick.
HwSatNetwork build_hw_sat(const CnfProblem& p);

struct HwSatSolveOptions {
    double max_cycles = 1e5;
    double check_interval = 20.0;
    bool exact_detection = false;
    double band_lo = kDefaultBandLo;
    double band_hi = kDefaultBandHi;
    SatInit init = SatInit::random;
    std::optional<std::vector<bool>> preload;
    // Emulated off-chip router latency; ideal (instantaneous) by default.
    ChannelModel channel = ChannelModel::ideal();
};

// Clause nodes take the lowest of the drawn frequencies (sorted assignment),
// variables the rest; a run with engine access for stability checks.
class HwSatRun {
public:
    HwSatRun(const CnfProblem& p, const HwSatSolveOptions& opt, std::uint64_t seed);

    HwSatRun(const HwSatRun&) = delete;
    HwSatRun& operator=(const HwSatRun&) = delete;

    RunReport solve();
    RunReport advance(double extra_cycles);

    std::vector<bool> assignment() const;
    bool satisfied_now() const;
    Engine& engine() { return *eng_; }
    const HwSatNetwork& network() const { return hn_; }

private:
    CnfProblem problem_;
    HwSatSolveOptions opt_;
    HwSatNetwork hn_;
    std::unique_ptr<Engine> eng_;
};

RunReport solve_hw_sat(const CnfProblem& p, const HwSatSolveOptions& opt, std::uint64_t seed);

struct HwColoringNetwork {
    Network net;
    HwArrayConfig array;
    int k_even = 0;      // k rounded up to even
    int ring_size = 0;   // chip nodes per vertex
    std::vector<std::vector<NodeId>> vertex_nodes;  // ring per vertex, [0] = main
    std::vector<NodeId> mains;
};

// State of ring node r encoding vertex color c. A main/helper pair uses the
// mirrored image k_even+1-c on the helper; longer rings rotate the color by
// 2r instead, so every ring row falls back to a different part of the
// palette and each color stays reachable. Inverse: hw_color_from_state.
int hw_color_image(int r, int color, int k_even);
int hw_color_from_state(int r, int state, int k_even);

// A vertex is a ring of k_even/2 nodes of arity k_even. Ring link r->r+1
// forces the successor to the inverted state (single-bit mask), except the
// closing link of an odd ring, which forces the identity so the ring has
// consistent configurations. The main node's out.p also sends every
// neighbor's ring node a mask excluding that node's image of color p (and
// of the padding color k_even when k is odd).
HwColoringNetwork build_hw_coloring(const ColoringProblem& p);

struct HwColoringSolveOptions {
    double max_cycles = 1e5;
    double check_interval = 20.0;
    bool exact_detection = false;
    double band_lo = kDefaultBandLo;
    double band_hi = kDefaultBandHi;
    ColorInit init = ColorInit::all_one;
    ChannelModel channel = ChannelModel::ideal();
};

// Converged when the main nodes' advertised colors form a proper coloring.
ColoringResult solve_hw_coloring(const ColoringProblem& p, const HwColoringSolveOptions& opt,
                                 std::uint64_t seed);

}  // namespace evcsp
