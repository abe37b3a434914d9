#include "evcsp/tsp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "evcsp/rng.hpp"

namespace evcsp {

void validate(const TspProblem& p) {
    if (p.n < 3) throw std::invalid_argument("tsp: need at least 3 cities");
    if (static_cast<int>(p.d.size()) != p.n)
        throw std::invalid_argument("tsp: distance matrix size mismatch");
    for (int i = 0; i < p.n; ++i) {
        if (static_cast<int>(p.d[i].size()) != p.n)
            throw std::invalid_argument("tsp: distance matrix not square");
        if (p.d[i][i] != 0.0) throw std::invalid_argument("tsp: nonzero diagonal");
        for (int j = 0; j < p.n; ++j) {
            if (i != j && !(p.d[i][j] > 0.0))
                throw std::invalid_argument("tsp: off-diagonal distances must be positive");
            if (p.d[i][j] != p.d[j][i]) throw std::invalid_argument("tsp: matrix not symmetric");
        }
    }
}

int f_edge(int i, int s) {
    if (i == 4 || (i == 2 && s == 2)) return 3;
    if (i == 3) return 2;
    if (i == 1 || (i == 0 && s == 3)) return 1;
    return s;
}

int g_edge(int i, int s) { return (i == 0 && s == 3) ? 1 : 0; }

int f_tc(int i, int s) {
    if (i == 1) return 1;
    return i == 0 ? 2 : s;
}

int g_tc(int i, int s) { return (i == 0 && s == 2) ? 1 : 0; }

namespace {

NodeSpec edge_spec() {
    NodeSpec spec;
    spec.external_inputs = 4;
    spec.outputs = 1;
    spec.states = 3;
    spec.initial_state = 2;
    spec.f = f_edge;
    spec.g = g_edge;
    return spec;
}

NodeSpec tc_spec() {
    NodeSpec spec;
    spec.external_inputs = 1;
    spec.outputs = 1;
    spec.states = 2;
    spec.initial_state = 2;
    spec.f = f_tc;
    spec.g = g_tc;
    return spec;
}

}  // namespace

TspNetwork build_tsp_network(const TspProblem& p) {
    validate(p);
    TspNetwork tn;
    tn.edge_node.assign(p.n, std::vector<NodeId>(p.n - 1, TspNetwork::kNoNode));
    for (int i = 1; i <= p.n; ++i)
        for (int j = 2; j <= p.n; ++j) {
            if (i == j) continue;
            tn.edge_node[i - 1][j - 2] = tn.net.add(
                std::make_unique<TableNode>(edge_spec()),
                "e" + std::to_string(i) + "_" + std::to_string(j));
        }
    tn.tc = tn.net.add(std::make_unique<TableNode>(tc_spec()), "tc");

    auto node = [&](int i, int j) { return tn.edge_node[i - 1][j - 2]; };
    auto exists = [&](int i, int j) { return i != j && j >= 2; };

    for (int i = 1; i <= p.n; ++i)
        for (int j = 2; j <= p.n; ++j) {
            if (i == j) continue;
            const NodeId src = node(i, j);
            // Deactivate the rest of row i (same origin) and column j
            // (same destination).
            for (int l = 2; l <= p.n; ++l)
                if (exists(i, l) && l != j) tn.net.routing.connect(src, 1, node(i, l), 1);
            for (int l = 1; l <= p.n; ++l)
                if (exists(l, j) && l != i) tn.net.routing.connect(src, 1, node(l, j), 1);
            // Activate row j: the next leg departs from city j.
            for (int l = 2; l <= p.n; ++l)
                if (exists(j, l)) tn.net.routing.connect(src, 1, node(j, l), 2);
            tn.net.routing.connect(src, 1, tn.tc, 1);
        }

    // Completion: re-arm everything, then force row 1 active.
    for (int i = 1; i <= p.n; ++i)
        for (int j = 2; j <= p.n; ++j) {
            if (i == j) continue;
            tn.net.routing.connect(tn.tc, 1, node(i, j), i == 1 ? 4 : 3);
        }

    // The t=0 reset mirrors the completion fan-out.
    for (int i = 1; i <= p.n; ++i)
        for (int j = 2; j <= p.n; ++j) {
            if (i == j) continue;
            tn.net.initial_events.push_back({node(i, j), i == 1 ? 4 : 3, 0.0});
        }

    for (auto& row : tn.edge_node)
        for (NodeId id : row)
            if (id != TspNetwork::kNoNode) tn.net.variable_ids.push_back(id);
    tn.net.finalize();
    return tn;
}

OscillatorAssignment assign_edge_frequencies(const TspProblem& p, const TspNetwork& tn,
                                             const TspFrequencyOptions& fopt,
                                             std::uint64_t seed) {
    if (!(fopt.K > 0.0)) throw std::invalid_argument("tsp: K must be positive");
    if (fopt.eta_scale < 0.0) throw std::invalid_argument("tsp: negative eta scale");
    if (!(fopt.tc_factor > 0.0) || fopt.tc_factor >= 1.0)
        throw std::invalid_argument("tsp: tc_factor must be in (0,1)");

    Rng rng(splitmix64(seed ^ 0x6f7363ull));
    OscillatorAssignment osc;
    osc.frequency.assign(tn.net.size(), 0.0);
    osc.first_tick.assign(tn.net.size(), 0.0);

    double min_freq = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= p.n; ++i)
        for (int j = 2; j <= p.n; ++j) {
            if (i == j) continue;
            const double base = fopt.K / p.d[i - 1][j - 1];
            const double f = base + rng.uniform() * fopt.eta_scale * base;
            osc.frequency[tn.edge_node[i - 1][j - 2]] = f;
            min_freq = std::min(min_freq, f);
        }
    for (int i = 1; i <= p.n; ++i)
        for (int j = 2; j <= p.n; ++j) {
            if (i == j) continue;
            const NodeId id = tn.edge_node[i - 1][j - 2];
            osc.first_tick[id] = rng.uniform() / osc.frequency[id];
        }

    const double tc_freq = fopt.tc_factor * min_freq;
    osc.frequency[tn.tc] = tc_freq;
    osc.first_tick[tn.tc] = 1.0 / tc_freq;
    return osc;
}

double tour_length(const TspProblem& p, const std::vector<int>& cities, bool open_length) {
    double len = 0.0;
    for (std::size_t i = 0; i + 1 < cities.size(); ++i)
        len += p.d[cities[i] - 1][cities[i + 1] - 1];
    if (!open_length) len += p.d[cities.back() - 1][cities.front() - 1];
    return len;
}

TspSampleResult sample_tours(const TspProblem& p, std::uint64_t num_tours,
                             const TspSampleOptions& opt, std::uint64_t seed) {
    if (num_tours < 1) throw std::invalid_argument("tsp: num_tours must be at least 1");
    TspNetwork tn = build_tsp_network(p);
    tn.net.oscillators = assign_edge_frequencies(p, tn, opt.freq, seed);

    // node id -> (origin, destination)
    std::map<NodeId, std::pair<int, int>> edge_of;
    for (int i = 1; i <= p.n; ++i)
        for (int j = 2; j <= p.n; ++j)
            if (i != j) edge_of[tn.edge_node[i - 1][j - 2]] = {i, j};

    Engine eng(tn.net, ChannelModel::ideal(), seed);

    std::map<std::vector<int>, std::size_t> index_of;
    TspSampleResult out;
    std::vector<std::pair<int, int>> segment;
    std::uint64_t completed = 0;

    auto close_segment = [&] {
        if (segment.size() != static_cast<std::size_t>(p.n - 1))
            throw std::logic_error("tsp: segment with " + std::to_string(segment.size()) +
                                   " edge events");
        std::vector<int> cities{1};
        std::vector<char> visited(p.n + 1, 0);
        visited[1] = 1;
        for (const auto& [from, to] : segment) {
            if (from != cities.back())
                throw std::logic_error("tsp: broken path at city " + std::to_string(from));
            if (visited[to]) throw std::logic_error("tsp: city visited twice");
            visited[to] = 1;
            cities.push_back(to);
        }
        segment.clear();
        const auto [it, fresh] = index_of.try_emplace(cities, out.tours.size());
        if (fresh)
            out.tours.push_back({cities, tour_length(p, cities, opt.open_length), 0});
        ++out.tours[it->second].count;
        ++out.total;
        ++completed;
    };

    eng.set_emit_observer([&](SimTime, NodeId id, PortIndex) {
        if (id == tn.tc) {
            close_segment();
        } else {
            segment.push_back(edge_of.at(id));
        }
    });

    StopCondition stop;
    stop.max_cycles = opt.max_cycles;
    stop.stop_now = [&] { return completed >= num_tours; };
    eng.run(stop);

    if (completed < num_tours)
        throw std::runtime_error("tsp: cycle cap reached after " +
                                 std::to_string(completed) + " tours");
    return out;
}

}  // namespace evcsp
