// Generic event-driven node: N external input ports plus the internal
// oscillator port in.0, M output ports plus the dummy port out.0, and Q
// internal states. Behavior is fully determined by the routing function g
// and the state update function f. On every delivered event the node first
// evaluates the output port from the pre-update state, then updates the
// state, then emits (out.0 suppresses the emission).

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

namespace evcsp {

using PortIndex = int;  // input port 0 = oscillator; output port 0 = dummy

// Declarative node description. States are 1-indexed (1..states); f maps
// (input port, state) to the next state, g maps (input port, state) to the
// output port index (0 suppresses).
struct NodeSpec {
    int external_inputs = 0;  // N; valid input ports are 0..N
    int outputs = 0;          // M; valid output ports are 0..M
    int states = 1;           // Q
    std::function<int(int, int)> f;
    std::function<int(int, int)> g;
    int initial_state = 1;
};

struct NodeState {
    int s = 1;
    int last_emitted = 0;  // 0 until the first non-dummy emission
};

// Checks the f/g ranges over the full (input, state) grid.
void validate(const NodeSpec& spec);

// One event delivery on input port `i`: r = g(i, s) from the pre-update
// state, then s' = f(i, s). Returns the updated state and the output port.
std::pair<NodeState, PortIndex> on_event(const NodeSpec& spec, NodeState st, PortIndex i);

// Builds a NodeSpec backed by dense tables. `f_table` and `g_table` are
// indexed [input * states + (state - 1)] for input in 0..N, state in 1..Q.
NodeSpec make_table_spec(int external_inputs, int outputs, int states,
                         std::vector<int> f_table, std::vector<int> g_table,
                         int initial_state = 1);

// The two-state example node: it advertises its state on oscillator events
// and otherwise latches the index of the input port as its new state.
//   f(i,s) = s if i=0, i otherwise      g(i,s) = s if i=0, 0 otherwise
NodeSpec example_binary_node();

// Runtime node interface used by the event engine. Implementations must be
// deterministic: the only inputs are the delivered port indices.
class Node {
public:
    virtual ~Node() = default;

    // Delivers an event on `input`; returns the output port (0 = none).
    virtual PortIndex handle_event(PortIndex input) = 0;

    virtual int state() const = 0;
    virtual int external_inputs() const = 0;
    virtual int outputs() const = 0;

    // Overwrites the internal state where that is meaningful (variable
    // preloading). Returns false if the node does not support it.
    virtual bool set_state(int) { return false; }
};

// Node driven by a NodeSpec with function-backed f/g.
class SpecNode final : public Node {
public:
    explicit SpecNode(NodeSpec spec);

    PortIndex handle_event(PortIndex input) override;
    int state() const override { return state_.s; }
    int external_inputs() const override { return spec_.external_inputs; }
    int outputs() const override { return spec_.outputs; }
    bool set_state(int s) override;

private:
    NodeSpec spec_;
    NodeState state_;
};

// Node with f/g tabulated into flat arrays; preferred in hot loops.
class TableNode final : public Node {
public:
    // Tabulates the given spec (evaluates f/g over the full grid).
    explicit TableNode(const NodeSpec& spec);

    PortIndex handle_event(PortIndex input) override;
    int state() const override { return state_; }
    int external_inputs() const override { return external_inputs_; }
    int outputs() const override { return outputs_; }
    bool set_state(int s) override;

private:
    int external_inputs_;
    int outputs_;
    int states_;
    int state_;
    std::vector<std::int32_t> f_;  // [input * states + state - 1]
    std::vector<std::int32_t> g_;
};

}  // namespace evcsp
