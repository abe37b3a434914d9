#include "evcsp/sat.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "evcsp/rng.hpp"

namespace evcsp {

void validate(const CnfProblem& p) {
    if (p.num_vars < 1) throw std::invalid_argument("cnf: no variables");
    if (p.clauses.empty()) throw std::invalid_argument("cnf: empty clause list");
    for (const auto& clause : p.clauses) {
        if (clause.empty()) throw std::invalid_argument("cnf: empty clause");
        for (int lit : clause) {
            if (lit == 0 || std::abs(lit) > p.num_vars)
                throw std::invalid_argument("cnf: literal " + std::to_string(lit) +
                                            " out of range");
        }
    }
}

bool is_3sat(const CnfProblem& p) {
    for (const auto& clause : p.clauses) {
        if (clause.size() != 3) return false;
        const int a = std::abs(clause[0]), b = std::abs(clause[1]), c = std::abs(clause[2]);
        if (a == b || a == c || b == c) return false;
    }
    return true;
}

void require_3sat(const CnfProblem& p) {
    validate(p);
    if (!is_3sat(p))
        throw std::invalid_argument(
            "cnf: network backends need 3 literals over distinct variables per clause");
}

bool clause_satisfied(const std::vector<int>& clause, const std::vector<bool>& assignment) {
    for (int lit : clause) {
        const bool value = assignment[static_cast<std::size_t>(std::abs(lit)) - 1];
        if ((lit > 0) == value) return true;
    }
    return false;
}

bool satisfied(const CnfProblem& p, const std::vector<bool>& assignment) {
    for (const auto& clause : p.clauses)
        if (!clause_satisfied(clause, assignment)) return false;
    return true;
}

std::unique_ptr<Node> make_sat_variable_node() {
    // f(0,s)=s, f(1,s)=3-s; g(0,s)=s, g(1,s)=3-s (advertise the new value).
    return std::make_unique<TableNode>(
        make_table_spec(1, 2, 2, {1, 2, 2, 1}, {1, 2, 2, 1}));
}

ClauseNode::ClauseNode(const std::array<int, 3>& literals) : literals_(literals) {
    for (int lit : literals_)
        if (lit == 0) throw std::invalid_argument("clause node: zero literal");
}

int ClauseNode::fulfilled_count() const {
    int n = 0;
    for (int p = 0; p < 3; ++p) {
        const int adv = last_advertised_[p];
        if (adv == 0) continue;
        const bool value = adv == 2;
        if ((literals_[p] > 0) == value) ++n;
    }
    return n;
}

PortIndex ClauseNode::handle_event(PortIndex input) {
    if (input == 0) {
        int fulfilled = 0;
        int which = 0;
        for (int p = 0; p < 3; ++p) {
            const int adv = last_advertised_[p];
            if (adv != 0 && (literals_[p] > 0) == (adv == 2)) {
                ++fulfilled;
                which = p;
            }
        }
        PortIndex r = 0;
        if (fulfilled == 0) {
            int best = 0;
            for (int p = 1; p < 3; ++p)
                if (break_count_[p] < break_count_[best]) best = p;
            r = best + 1;  // flip
        } else if (fulfilled == 1) {
            r = 4 + which;  // break
        }
        break_count_ = {0, 0, 0};
        return r;
    }
    if (input >= 1 && input <= 6) {
        last_advertised_[(input - 1) / 2] = (input % 2 == 1) ? 1 : 2;
        return 0;
    }
    if (input >= 7 && input <= 9) {
        ++break_count_[input - 7];
        return 0;
    }
    throw std::out_of_range("clause node: input port " + std::to_string(input));
}

SatNetwork build_sat_network(const CnfProblem& p) {
    require_3sat(p);

    SatNetwork sn;
    sn.variables.reserve(p.num_vars);
    for (int v = 1; v <= p.num_vars; ++v)
        sn.variables.push_back(sn.net.add(make_sat_variable_node(), "x" + std::to_string(v)));

    sn.clauses.reserve(p.clauses.size());
    for (std::size_t c = 0; c < p.clauses.size(); ++c) {
        const auto& clause = p.clauses[c];
        sn.clauses.push_back(sn.net.add(
            std::make_unique<ClauseNode>(std::array<int, 3>{clause[0], clause[1], clause[2]}),
            "c" + std::to_string(c + 1)));
    }

    // positions[v-1] = (clause index, position 1..3) pairs containing v.
    std::vector<std::vector<std::pair<std::size_t, int>>> positions(p.num_vars);
    for (std::size_t c = 0; c < p.clauses.size(); ++c)
        for (int k = 0; k < 3; ++k)
            positions[static_cast<std::size_t>(std::abs(p.clauses[c][k])) - 1]
                .emplace_back(c, k + 1);

    for (int v = 1; v <= p.num_vars; ++v) {
        const NodeId vn = sn.variables[v - 1];
        for (const auto& [c, k] : positions[v - 1]) {
            // Advertised value -> state registers.
            sn.net.routing.connect(vn, 1, sn.clauses[c], 2 * k - 1);
            sn.net.routing.connect(vn, 2, sn.clauses[c], 2 * k);
        }
    }

    for (std::size_t c = 0; c < p.clauses.size(); ++c) {
        const NodeId cn = sn.clauses[c];
        for (int k = 1; k <= 3; ++k) {
            const int v = std::abs(p.clauses[c][static_cast<std::size_t>(k) - 1]);
            // Flip goes to the variable and, like a break, to the break
            // inputs for v in every clause containing it (this one included).
            sn.net.routing.connect(cn, k, sn.variables[v - 1], 1);
            for (const auto& [c2, k2] : positions[v - 1]) {
                sn.net.routing.connect(cn, k, sn.clauses[c2], 6 + k2);
            }
            for (const auto& [c2, k2] : positions[v - 1])
                sn.net.routing.connect(cn, 3 + k, sn.clauses[c2], 6 + k2);
        }
    }

    sn.net.variable_ids = sn.variables;
    sn.net.finalize();
    return sn;
}

namespace {

std::vector<bool> initial_assignment(const CnfProblem& p, const SatSolveOptions& opt,
                                     std::uint64_t seed) {
    if (opt.preload) {
        if (static_cast<int>(opt.preload->size()) != p.num_vars)
            throw std::invalid_argument("sat: preload size mismatch");
        return *opt.preload;
    }
    std::vector<bool> a(p.num_vars, false);
    if (opt.init == SatInit::random) {
        Rng rng(splitmix64(seed ^ 0x696e6974ull));  // "init"
        for (int v = 0; v < p.num_vars; ++v) a[v] = rng.uniform_below(2) == 1;
    }
    return a;
}

}  // namespace

SatNetworkRun::SatNetworkRun(const CnfProblem& p, const SatSolveOptions& opt,
                             std::uint64_t seed)
    : problem_(p), opt_(opt), sn_(build_sat_network(p)) {
    sn_.net.oscillators = draw_frequencies(sn_.net.size(), opt.band_lo, opt.band_hi,
                                           splitmix64(seed ^ 0x6f7363ull));  // "osc"
    const std::vector<bool> init = initial_assignment(p, opt, seed);
    for (int v = 0; v < p.num_vars; ++v)
        sn_.net.nodes[sn_.variables[v]]->set_state(init[v] ? 2 : 1);
    eng_ = std::make_unique<Engine>(sn_.net, opt.channel, seed);
}

std::vector<bool> SatNetworkRun::assignment() const {
    std::vector<bool> a(problem_.num_vars);
    for (int v = 0; v < problem_.num_vars; ++v)
        a[v] = eng_->node_value(sn_.variables[v]) == 2;
    return a;
}

bool SatNetworkRun::satisfied_now() const { return satisfied(problem_, assignment()); }

RunReport SatNetworkRun::solve() {
    StopCondition stop;
    stop.max_cycles = opt_.max_cycles;
    stop.check_interval = opt_.check_interval;
    stop.exact_detection = opt_.exact_detection;
    stop.converged = [this](const Engine&) { return satisfied_now(); };
    return eng_->run(stop);
}

RunReport SatNetworkRun::advance(double extra_cycles) {
    StopCondition stop;
    stop.max_cycles = eng_->now() * eng_->mean_frequency() + extra_cycles;
    return eng_->run(stop);
}

RunReport solve_sat_network(const CnfProblem& p, const SatSolveOptions& opt,
                            std::uint64_t seed) {
    return SatNetworkRun(p, opt, seed).solve();
}

double probsat_weight(int m, int b, double x, double y) {
    return std::pow(x, m) / std::pow(y, b);
}

int pick_weighted(const std::vector<double>& weights, double u) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0)) return 0;
    double cut = u * total;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
        cut -= weights[i];
        if (cut < 0.0) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size()) - 1;
}

ProbSatReport sequential_probsat(const CnfProblem& p, const ProbSatParams& params,
                                 std::uint64_t seed, const ProbSatHooks* hooks) {
    validate(p);
    if (!(params.y > 0.0)) throw std::invalid_argument("probsat: y must be positive");

    const int nv = p.num_vars;
    const std::size_t nc = p.clauses.size();
    Rng rng(seed);

    std::vector<char> value(nv, 0);
    if (params.init == SatInit::random)
        for (int v = 0; v < nv; ++v) value[v] = static_cast<char>(rng.uniform_below(2));

    // occ[sign][v-1]: clauses where v appears with that polarity.
    std::vector<std::vector<int>> occ_pos(nv), occ_neg(nv);
    for (std::size_t c = 0; c < nc; ++c)
        for (int lit : p.clauses[c])
            (lit > 0 ? occ_pos : occ_neg)[std::abs(lit) - 1].push_back(static_cast<int>(c));

    auto lit_true = [&](int lit) {
        return (lit > 0) == (value[std::abs(lit) - 1] != 0);
    };

    std::vector<int> sat_count(nc, 0);
    std::vector<int> crit_xor(nc, 0);  // xor of satisfying vars; the critical var when sat_count==1
    std::vector<int> unsat;            // clause indices
    std::vector<int> unsat_pos(nc, -1);
    auto push_unsat = [&](int c) {
        unsat_pos[c] = static_cast<int>(unsat.size());
        unsat.push_back(c);
    };
    auto pop_unsat = [&](int c) {
        const int at = unsat_pos[c];
        unsat[at] = unsat.back();
        unsat_pos[unsat[at]] = at;
        unsat.pop_back();
        unsat_pos[c] = -1;
    };

    for (std::size_t c = 0; c < nc; ++c) {
        for (int lit : p.clauses[c])
            if (lit_true(lit)) {
                ++sat_count[c];
                crit_xor[c] ^= std::abs(lit);
            }
        if (sat_count[c] == 0) push_unsat(static_cast<int>(c));
    }

    // Breaking v = clauses where v is the sole satisfier.
    auto break_of = [&](int v) {
        int b = 0;
        const auto& occ = value[v - 1] ? occ_pos[v - 1] : occ_neg[v - 1];
        for (int c : occ)
            if (sat_count[c] == 1 && crit_xor[c] == v) ++b;
        return b;
    };
    // Make of v = unsatisfied clauses that flipping v would satisfy.
    auto make_of = [&](int v) {
        int m = 0;
        const auto& occ = value[v - 1] ? occ_neg[v - 1] : occ_pos[v - 1];
        for (int c : occ)
            if (sat_count[c] == 0) ++m;
        return m;
    };

    auto flip = [&](int v) {
        const auto& was_sat = value[v - 1] ? occ_pos[v - 1] : occ_neg[v - 1];
        const auto& now_sat = value[v - 1] ? occ_neg[v - 1] : occ_pos[v - 1];
        for (int c : was_sat) {
            if (--sat_count[c] == 0) push_unsat(c);
            crit_xor[c] ^= v;
        }
        for (int c : now_sat) {
            if (sat_count[c]++ == 0) pop_unsat(c);
            crit_xor[c] ^= v;
        }
        value[v - 1] = static_cast<char>(1 - value[v - 1]);
    };

    ProbSatReport rep;
    rep.seed = seed;

    std::vector<double> weights;
    std::vector<int> vars, breaks;
    while (!unsat.empty() && rep.flips < params.max_flips) {
        const int c = unsat[rng.uniform_below(unsat.size())];
        const auto& clause = p.clauses[c];
        weights.clear();
        vars.clear();
        breaks.clear();
        for (int lit : clause) {
            const int v = std::abs(lit);
            const int b = break_of(v);
            const int m = params.x == 1.0 ? 0 : make_of(v);
            vars.push_back(v);
            breaks.push_back(b);
            weights.push_back(probsat_weight(m, b, params.x, params.y));
        }
        const int pick = pick_weighted(weights, rng.uniform());
        flip(vars[pick]);
        ++rep.flips;
        if (hooks && hooks->on_flip) hooks->on_flip(c, vars, breaks, vars[pick]);
    }

    rep.solved = unsat.empty();
    rep.assignment.assign(nv, false);
    for (int v = 0; v < nv; ++v) rep.assignment[v] = value[v] != 0;
    return rep;
}

}  // namespace evcsp
