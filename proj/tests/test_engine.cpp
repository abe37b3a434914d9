#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <tuple>
#include <vector>

#include "evcsp/engine.hpp"
#include "evcsp/node.hpp"
#include "evcsp/rng.hpp"

using namespace evcsp;

namespace {

OscillatorAssignment fixed_osc(std::vector<std::pair<double, double>> freq_phase) {
    OscillatorAssignment o;
    for (auto& [f, p] : freq_phase) {
        o.frequency.push_back(f);
        o.first_tick.push_back(p);
    }
    return o;
}

std::unique_ptr<Node> example_node() {
    return std::make_unique<SpecNode>(example_binary_node());
}

}  // namespace

TEST_CASE("draw_frequencies stays in band, distinct, and reproducible") {
    const OscillatorAssignment one = draw_frequencies(1, 0.9, 1.1, 7);
    REQUIRE(one.size() == 1);
    CHECK(one.frequency[0] >= 0.9);
    CHECK(one.frequency[0] < 1.1);
    CHECK(one.first_tick[0] >= 0.0);
    CHECK(one.first_tick[0] < 1.0);

    const OscillatorAssignment big = draw_frequencies(2048, 0.9, 1.1, 3);
    std::vector<double> sorted = big.frequency;
    std::sort(sorted.begin(), sorted.end());
    CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());

    const OscillatorAssignment again = draw_frequencies(2048, 0.9, 1.1, 3);
    CHECK(big.frequency == again.frequency);
    CHECK(big.first_tick == again.first_tick);

    CHECK_THROWS_AS(draw_frequencies(0, 0.9, 1.1, 1), std::invalid_argument);
    CHECK_THROWS_AS(draw_frequencies(4, 1.1, 0.9, 1), std::invalid_argument);
    CHECK_THROWS_AS(draw_frequencies(4, 0.0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("channel model validation") {
    CHECK_NOTHROW(validate(ChannelModel::ideal()));
    CHECK_NOTHROW(validate(ChannelModel::lossy(0.1, 0.1)));
    ChannelModel bad = ChannelModel::lossy(1.5, 0.1);
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    ChannelModel neg = ChannelModel::lossy(0.1, -0.1);
    CHECK_THROWS_AS(validate(neg), std::invalid_argument);
    ChannelModel not_ideal = ChannelModel::ideal();
    not_ideal.loss_prob = 0.2;
    CHECK_THROWS_AS(validate(not_ideal), std::invalid_argument);
}

TEST_CASE("ideal channel is the identity") {
    Rng rng(1);
    const Event ev{3, 2, 17.25, 99};
    const auto out = apply_channel(ev, ChannelModel::ideal(), 1.0, rng);
    REQUIRE(out.has_value());
    CHECK(out->source == 3);
    CHECK(out->out_port == 2);
    CHECK(out->deliver_at == 17.25);
    CHECK(out->seq == 99);
}

TEST_CASE("certain loss drops every event") {
    Rng rng(2);
    const Event ev{0, 1, 1.0, 0};
    for (int i = 0; i < 100; ++i)
        CHECK_FALSE(apply_channel(ev, ChannelModel::lossy(1.0, 0.1), 1.0, rng).has_value());
}

TEST_CASE("lossy channel: drop rate and uniform delay law") {
    const ChannelModel ch = ChannelModel::lossy(0.1, 0.1);
    const double ref_period = 1.0;
    const double bound = ch.max_delay_fraction * ref_period;
    Rng rng(42);
    const int n = 100000;
    int dropped = 0;
    std::vector<double> delays;
    delays.reserve(n);
    for (int i = 0; i < n; ++i) {
        const Event ev{0, 1, 5.0, static_cast<std::uint64_t>(i)};
        const auto out = apply_channel(ev, ch, ref_period, rng);
        if (!out) {
            ++dropped;
            continue;
        }
        const double d = out->deliver_at - ev.deliver_at;
        REQUIRE(d >= 0.0);
        REQUIRE(d < bound);
        delays.push_back(d);
    }
    CHECK(std::abs(dropped / static_cast<double>(n) - 0.1) < 0.01);

    // One-sample Kolmogorov-Smirnov against U[0, bound]; 1.6276/sqrt(m) is
    // the critical statistic at significance 0.01.
    std::sort(delays.begin(), delays.end());
    const double m = static_cast<double>(delays.size());
    double dstat = 0.0;
    for (std::size_t i = 0; i < delays.size(); ++i) {
        const double cdf = delays[i] / bound;
        dstat = std::max(dstat, std::abs(cdf - static_cast<double>(i) / m));
        dstat = std::max(dstat, std::abs(static_cast<double>(i + 1) / m - cdf));
    }
    CHECK(dstat < 1.6276 / std::sqrt(m));
}

TEST_CASE("a node with no inputs keeps advertising its initial state") {
    Network net;
    net.add(example_node(), "n0");
    net.oscillators = fixed_osc({{1.0, 0.25}});

    Engine eng(net, ChannelModel::ideal(), 1);
    std::vector<std::pair<SimTime, PortIndex>> emitted;
    eng.set_emit_observer([&](SimTime t, NodeId, PortIndex r) { emitted.emplace_back(t, r); });

    StopCondition stop;
    stop.max_cycles = 3.0;
    const RunReport rep = eng.run(stop);

    REQUIRE(emitted.size() == 3);
    for (const auto& [t, r] : emitted) CHECK(r == 1);
    CHECK(emitted[0].first == doctest::Approx(0.25));
    CHECK(emitted[2].first == doctest::Approx(2.25));
    CHECK(rep.oscillator_ticks == 3);
    CHECK(rep.events_generated == 0);
    CHECK_FALSE(rep.converged);
}

TEST_CASE("two-node chain: downstream echoes the last upstream value") {
    Network net;
    const NodeId a = net.add(example_node(), "a");
    NodeSpec b_spec = example_binary_node();
    b_spec.initial_state = 2;
    const NodeId b = net.add(std::make_unique<SpecNode>(b_spec), "b");
    net.routing.connect(a, 1, b, 1);
    net.routing.connect(a, 2, b, 2);
    net.oscillators = fixed_osc({{2.0, 0.1}, {1.0, 0.5}});

    Engine eng(net, ChannelModel::ideal(), 1);
    std::vector<PortIndex> b_out;
    eng.set_emit_observer([&](SimTime, NodeId id, PortIndex r) {
        if (id == b) b_out.push_back(r);
    });

    StopCondition stop;
    stop.max_cycles = 10.0;
    eng.run(stop);

    // A advertises state 1 at t=0.1, before B's first tick at t=0.5.
    REQUIRE(!b_out.empty());
    for (PortIndex r : b_out) CHECK(r == 1);
    CHECK(eng.node_state(b) == 1);
}

TEST_CASE("initial events are delivered before time-zero ticks") {
    Network net;
    const NodeId a = net.add(example_node(), "a");
    net.oscillators = fixed_osc({{1.0, 0.0}});
    net.initial_events.push_back({a, 2, 0.0});

    Engine eng(net, ChannelModel::ideal(), 1);
    std::vector<PortIndex> out;
    eng.set_emit_observer([&](SimTime, NodeId, PortIndex r) { out.push_back(r); });

    StopCondition stop;
    stop.max_cycles = 0.5;
    eng.run(stop);

    REQUIRE(out.size() == 1);
    CHECK(out[0] == 2);
}

TEST_CASE("simultaneous events are processed in creation order") {
    Network net;
    const NodeId a = net.add(example_node(), "a");
    const NodeId b = net.add(example_node(), "b");
    net.oscillators = fixed_osc({{1.0, 0.5}, {1.0, 0.5}});

    Engine eng(net, ChannelModel::ideal(), 1);
    std::vector<NodeId> order;
    eng.set_emit_observer([&](SimTime, NodeId id, PortIndex) { order.push_back(id); });

    StopCondition stop;
    stop.max_cycles = 0.6;
    eng.run(stop);

    REQUIRE(order.size() == 2);
    CHECK(order[0] == a);
    CHECK(order[1] == b);
}

TEST_CASE("routing rejects one output port feeding a target node twice") {
    Network net;
    const NodeId a = net.add(example_node(), "a");
    const NodeId b = net.add(example_node(), "b");
    net.routing.connect(a, 1, b, 1);
    net.routing.connect(a, 1, b, 2);
    net.oscillators = fixed_osc({{1.0, 0.1}, {1.0, 0.2}});
    CHECK_THROWS_AS(net.finalize(), std::invalid_argument);
}

TEST_CASE("routing rejects out-of-range ports and nodes") {
    {
        Network net;
        const NodeId a = net.add(example_node(), "a");
        net.routing.connect(a, 0, a, 1);  // out.0 is the dummy port
        CHECK_THROWS_AS(net.finalize(), std::invalid_argument);
    }
    {
        Network net;
        const NodeId a = net.add(example_node(), "a");
        net.routing.connect(a, 1, a, 0);  // in.0 is the oscillator
        CHECK_THROWS_AS(net.finalize(), std::invalid_argument);
    }
    {
        Network net;
        const NodeId a = net.add(example_node(), "a");
        net.routing.connect(a, 3, a, 1);
        CHECK_THROWS_AS(net.finalize(), std::invalid_argument);
    }
    {
        Network net;
        const NodeId a = net.add(example_node(), "a");
        net.routing.connect(a, 1, 5, 1);
        CHECK_THROWS_AS(net.finalize(), std::invalid_argument);
    }
    {
        Network net;
        const NodeId a = net.add(example_node(), "a");
        net.routing.connect(a, 1, a, 1);
        net.finalize();
        CHECK_THROWS_AS(net.routing.connect(a, 2, a, 2), std::logic_error);
    }
}

TEST_CASE("engine constructor validates oscillators and channel") {
    Network net;
    net.add(example_node(), "a");
    CHECK_THROWS_AS(Engine(net, ChannelModel::ideal(), 1), std::invalid_argument);

    net.oscillators = fixed_osc({{0.0, 0.1}});
    CHECK_THROWS_AS(Engine(net, ChannelModel::ideal(), 1), std::invalid_argument);

    net.oscillators = fixed_osc({{1.0, 0.1}});
    ChannelModel bad = ChannelModel::lossy(2.0, 0.1);
    CHECK_THROWS_AS(Engine(net, bad, 1), std::invalid_argument);
}

TEST_CASE("zero-delay event cycle raises a causality error") {
    NodeSpec echo;
    echo.external_inputs = 1;
    echo.outputs = 1;
    echo.states = 1;
    echo.f = [](int, int) { return 1; };
    echo.g = [](int i, int) { return i == 1 ? 1 : 0; };

    Network net;
    const NodeId a = net.add(std::make_unique<SpecNode>(echo), "a");
    const NodeId b = net.add(std::make_unique<SpecNode>(echo), "b");
    net.routing.connect(a, 1, b, 1);
    net.routing.connect(b, 1, a, 1);
    net.oscillators = fixed_osc({{1.0, 0.3}, {1.0, 0.7}});
    net.initial_events.push_back({a, 1, 0.5});

    Engine eng(net, ChannelModel::ideal(), 1);
    StopCondition stop;
    stop.max_cycles = 10.0;
    stop.max_events_per_timestamp = 5000;
    CHECK_THROWS_AS(eng.run(stop), CausalityLoopError);
}

TEST_CASE("cycles metric: convergence time times mean variable frequency") {
    Network net;
    net.add(example_node(), "a");
    net.oscillators = fixed_osc({{1.0, 0.5}});

    Engine eng(net, ChannelModel::ideal(), 1);
    StopCondition stop;
    stop.check_interval = 100.0;
    stop.converged = [](const Engine&) { return true; };
    const RunReport rep = eng.run(stop);

    CHECK(rep.converged);
    CHECK(rep.cycles == doctest::Approx(100.0));
    CHECK(rep.end_time == doctest::Approx(100.0));
    CHECK(measure_cycles(rep, net) == doctest::Approx(100.0));
}

TEST_CASE("convergence at the first default check reports 20, never less") {
    Network net;
    net.add(example_node(), "a");
    net.oscillators = fixed_osc({{1.0, 0.5}});

    Engine eng(net, ChannelModel::ideal(), 1);
    StopCondition stop;
    stop.converged = [](const Engine&) { return true; };
    const RunReport rep = eng.run(stop);

    CHECK(rep.converged);
    CHECK(rep.cycles == doctest::Approx(20.0));
    CHECK(rep.cycles >= 20.0);
}

TEST_CASE("non-convergence at the cap reports infinity") {
    Network net;
    net.add(example_node(), "a");
    net.oscillators = fixed_osc({{1.0, 0.5}});

    Engine eng(net, ChannelModel::ideal(), 1);
    StopCondition stop;
    stop.max_cycles = 50.0;
    stop.converged = [](const Engine&) { return false; };
    const RunReport rep = eng.run(stop);

    CHECK_FALSE(rep.converged);
    CHECK(std::isinf(rep.cycles));
    CHECK(rep.end_time == doctest::Approx(50.0));
    CHECK(std::isinf(measure_cycles(rep, net)));
}

TEST_CASE("exact detection reports unquantized convergence times") {
    Network net;
    const NodeId a = net.add(example_node(), "a");
    NodeSpec b_spec = example_binary_node();
    b_spec.initial_state = 2;
    const NodeId b = net.add(std::make_unique<SpecNode>(b_spec), "b");
    net.routing.connect(a, 1, b, 1);
    net.routing.connect(a, 2, b, 2);
    net.oscillators = fixed_osc({{1.0, 0.1}, {1.0, 0.5}});

    Engine eng(net, ChannelModel::ideal(), 1);
    StopCondition stop;
    stop.exact_detection = true;
    stop.converged = [&](const Engine& e) { return e.node_state(b) == 1; };
    const RunReport rep = eng.run(stop);

    CHECK(rep.converged);
    CHECK(rep.cycles == doctest::Approx(0.1));
}

TEST_CASE("lossy runs are reproducible from the seed") {
    // Echo ring: every event (tick or delivery) is forwarded, so channel
    // delays show up directly in the emission times.
    auto build = [] {
        NodeSpec echo;
        echo.external_inputs = 1;
        echo.outputs = 1;
        echo.states = 1;
        echo.f = [](int, int) { return 1; };
        echo.g = [](int, int) { return 1; };
        Network net;
        for (int i = 0; i < 3; ++i)
            net.add(std::make_unique<SpecNode>(echo), "n" + std::to_string(i));
        for (NodeId i = 0; i < 3; ++i) net.routing.connect(i, 1, (i + 1) % 3, 1);
        net.oscillators = fixed_osc({{1.03, 0.2}, {0.97, 0.5}, {1.01, 0.8}});
        return net;
    };

    auto run_once = [&](std::uint64_t seed, std::vector<std::tuple<double, NodeId, PortIndex>>* trace) {
        Network net = build();
        Engine eng(net, ChannelModel::lossy(0.3, 0.5), seed);
        if (trace)
            eng.set_emit_observer([trace](SimTime t, NodeId id, PortIndex r) {
                trace->emplace_back(t, id, r);
            });
        StopCondition stop;
        stop.max_cycles = 200.0;
        return eng.run(stop);
    };

    std::vector<std::tuple<double, NodeId, PortIndex>> tr1, tr2, tr3;
    const RunReport r1 = run_once(11, &tr1);
    const RunReport r2 = run_once(11, &tr2);
    const RunReport r3 = run_once(12, &tr3);

    CHECK(r1.events_processed == r2.events_processed);
    CHECK(r1.events_generated == r2.events_generated);
    CHECK(r1.events_dropped == r2.events_dropped);
    CHECK(r1.flips == r2.flips);
    CHECK(r1.end_time == r2.end_time);
    CHECK(r1.final_values == r2.final_values);
    CHECK(tr1 == tr2);
    CHECK(tr1 != tr3);
}

TEST_CASE("event counters balance: generated = delivered + dropped + pending") {
    Network net;
    for (int i = 0; i < 3; ++i) net.add(example_node(), "n" + std::to_string(i));
    for (NodeId i = 0; i < 3; ++i) {
        net.routing.connect(i, 1, (i + 1) % 3, 1);
        net.routing.connect(i, 2, (i + 1) % 3, 2);
    }
    net.oscillators = fixed_osc({{1.03, 0.2}, {0.97, 0.5}, {1.01, 0.8}});

    Engine eng(net, ChannelModel::lossy(0.1, 0.1), 5);
    StopCondition stop;
    stop.max_cycles = 100.0;
    const RunReport rep = eng.run(stop);

    const std::uint64_t delivered = rep.events_processed - rep.oscillator_ticks;
    CHECK(rep.events_generated == delivered + rep.events_dropped + rep.events_pending);
    CHECK(rep.events_dropped > 0);
}

TEST_CASE("a run can be resumed and matches an uninterrupted run") {
    auto build = [] {
        Network net;
        for (int i = 0; i < 3; ++i) net.add(example_node(), "n" + std::to_string(i));
        for (NodeId i = 0; i < 3; ++i) {
            net.routing.connect(i, 1, (i + 1) % 3, 1);
            net.routing.connect(i, 2, (i + 1) % 3, 2);
        }
        net.oscillators = fixed_osc({{1.03, 0.2}, {0.97, 0.5}, {1.01, 0.8}});
        return net;
    };

    Network split_net = build();
    Engine split(split_net, ChannelModel::ideal(), 9);
    StopCondition stop;
    stop.max_cycles = 10.0;
    split.run(stop);
    stop.max_cycles = 20.0;
    const RunReport rep_split = split.run(stop);

    Network whole_net = build();
    Engine whole(whole_net, ChannelModel::ideal(), 9);
    const RunReport rep_whole = whole.run(stop);

    CHECK(rep_split.events_processed == rep_whole.events_processed);
    CHECK(rep_split.oscillator_ticks == rep_whole.oscillator_ticks);
    CHECK(rep_split.flips == rep_whole.flips);
    CHECK(rep_split.end_time == rep_whole.end_time);
    CHECK(rep_split.final_values == rep_whole.final_values);
}

TEST_CASE("node_value falls back to the state before the first emission") {
    Network net;
    NodeSpec spec = example_binary_node();
    spec.initial_state = 2;
    const NodeId a = net.add(std::make_unique<SpecNode>(spec), "a");
    net.oscillators = fixed_osc({{1.0, 0.5}});

    Engine eng(net, ChannelModel::ideal(), 1);
    CHECK(eng.node_value(a) == 2);

    StopCondition stop;
    stop.max_cycles = 1.0;
    eng.run(stop);
    CHECK(eng.node_value(a) == 2);
}

TEST_CASE("mean variable frequency honors the designated variable set") {
    Network net;
    net.add(example_node(), "a");
    net.add(example_node(), "b");
    net.oscillators = fixed_osc({{1.0, 0.1}, {3.0, 0.2}});

    CHECK(mean_variable_frequency(net) == doctest::Approx(2.0));
    net.variable_ids = {1};
    CHECK(mean_variable_frequency(net) == doctest::Approx(3.0));
}

TEST_CASE("flips count state changes of variable nodes only") {
    Network net;
    const NodeId a = net.add(example_node(), "a");
    NodeSpec b_spec = example_binary_node();
    b_spec.initial_state = 2;
    const NodeId b = net.add(std::make_unique<SpecNode>(b_spec), "b");
    net.routing.connect(a, 1, b, 1);
    net.routing.connect(a, 2, b, 2);
    net.oscillators = fixed_osc({{1.0, 0.1}, {1.0, 0.5}});
    net.variable_ids = {b};

    Engine eng(net, ChannelModel::ideal(), 1);
    StopCondition stop;
    stop.max_cycles = 10.0;
    const RunReport rep = eng.run(stop);

    // B flips 2 -> 1 once on A's first advertisement and never again.
    CHECK(rep.flips == 1);
    REQUIRE(rep.final_values.size() == 1);
    CHECK(rep.final_values[0] == 1);
}
