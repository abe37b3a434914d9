#include "evcsp/node.hpp"

#include <string>

namespace evcsp {

void validate(const NodeSpec& spec) {
    if (spec.external_inputs < 0 || spec.outputs < 0 || spec.states < 1)
        throw std::invalid_argument("NodeSpec: negative port count or no states");
    if (!spec.f || !spec.g)
        throw std::invalid_argument("NodeSpec: f and g must be set");
    if (spec.initial_state < 1 || spec.initial_state > spec.states)
        throw std::invalid_argument("NodeSpec: initial state out of range");
    for (int i = 0; i <= spec.external_inputs; ++i) {
        for (int s = 1; s <= spec.states; ++s) {
            const int fs = spec.f(i, s);
            const int gs = spec.g(i, s);
            if (fs < 1 || fs > spec.states)
                throw std::invalid_argument("NodeSpec: f(" + std::to_string(i) + "," +
                                            std::to_string(s) + ") out of range");
            if (gs < 0 || gs > spec.outputs)
                throw std::invalid_argument("NodeSpec: g(" + std::to_string(i) + "," +
                                            std::to_string(s) + ") out of range");
        }
    }
}

std::pair<NodeState, PortIndex> on_event(const NodeSpec& spec, NodeState st, PortIndex i) {
    if (i < 0 || i > spec.external_inputs)
        throw std::out_of_range("on_event: input port " + std::to_string(i) +
                                " outside 0.." + std::to_string(spec.external_inputs));
    const PortIndex r = spec.g(i, st.s);  // routing decided before the update
    st.s = spec.f(i, st.s);
    if (r != 0) st.last_emitted = r;
    return {st, r};
}

NodeSpec make_table_spec(int external_inputs, int outputs, int states,
                         std::vector<int> f_table, std::vector<int> g_table,
                         int initial_state) {
    const std::size_t expect = static_cast<std::size_t>(external_inputs + 1) * states;
    if (f_table.size() != expect || g_table.size() != expect)
        throw std::invalid_argument("make_table_spec: table size mismatch");
    NodeSpec spec;
    spec.external_inputs = external_inputs;
    spec.outputs = outputs;
    spec.states = states;
    spec.initial_state = initial_state;
    auto f = std::make_shared<std::vector<int>>(std::move(f_table));
    auto g = std::make_shared<std::vector<int>>(std::move(g_table));
    spec.f = [f, states](int i, int s) { return (*f)[static_cast<std::size_t>(i) * states + s - 1]; };
    spec.g = [g, states](int i, int s) { return (*g)[static_cast<std::size_t>(i) * states + s - 1]; };
    validate(spec);
    return spec;
}

NodeSpec example_binary_node() {
    NodeSpec spec;
    spec.external_inputs = 2;
    spec.outputs = 2;
    spec.states = 2;
    spec.initial_state = 1;
    spec.f = [](int i, int s) { return i == 0 ? s : i; };
    spec.g = [](int i, int s) { return i == 0 ? s : 0; };
    return spec;
}

SpecNode::SpecNode(NodeSpec spec) : spec_(std::move(spec)) {
    validate(spec_);
    state_.s = spec_.initial_state;
}

PortIndex SpecNode::handle_event(PortIndex input) {
    auto [st, r] = on_event(spec_, state_, input);
    state_ = st;
    return r;
}

bool SpecNode::set_state(int s) {
    if (s < 1 || s > spec_.states) return false;
    state_.s = s;
    return true;
}

TableNode::TableNode(const NodeSpec& spec)
    : external_inputs_(spec.external_inputs),
      outputs_(spec.outputs),
      states_(spec.states),
      state_(spec.initial_state) {
    validate(spec);
    f_.resize(static_cast<std::size_t>(external_inputs_ + 1) * states_);
    g_.resize(f_.size());
    for (int i = 0; i <= external_inputs_; ++i) {
        for (int s = 1; s <= states_; ++s) {
            const std::size_t idx = static_cast<std::size_t>(i) * states_ + s - 1;
            f_[idx] = spec.f(i, s);
            g_[idx] = spec.g(i, s);
        }
    }
}

PortIndex TableNode::handle_event(PortIndex input) {
    const std::size_t idx = static_cast<std::size_t>(input) * states_ + state_ - 1;
    const PortIndex r = g_[idx];
    state_ = f_[idx];
    return r;
}

bool TableNode::set_state(int s) {
    if (s < 1 || s > states_) return false;
    state_ = s;
    return true;
}

}  // namespace evcsp
