#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "evcsp/bench.hpp"
#include "evcsp/instances.hpp"
#include "evcsp/report.hpp"
#include "evcsp/rng.hpp"

using namespace evcsp;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

CnfProblem toy_sat() {
    CnfProblem p;
    p.num_vars = 4;
    p.clauses = {{1, 2, 3}, {-1, 2, 4}, {1, -3, 4}, {-2, 3, 4}};
    return p;
}

}  // namespace

TEST_CASE("median handles odd, even, empty, and infinite inputs") {
    CHECK(median({3, 1, 2}) == 2.0);
    CHECK(median({4, 1, 2, 3}) == 2.5);
    CHECK(median({7}) == 7.0);
    CHECK(std::isnan(median({})));
    CHECK(median({1, kInf, kInf}) == kInf);
    CHECK(median({1, 2, kInf, kInf}) == kInf);
    CHECK(median({1, 2, 3, kInf}) == 2.5);
}

TEST_CASE("average ranks share tied positions") {
    CHECK(average_ranks({10, 20, 30}) == std::vector<double>{1, 2, 3});
    CHECK(average_ranks({30, 10, 20}) == std::vector<double>{3, 1, 2});
    CHECK(average_ranks({20, 10, 10}) == std::vector<double>{3, 1.5, 1.5});
    CHECK(average_ranks({5, 5, 5, 5}) == std::vector<double>{2.5, 2.5, 2.5, 2.5});
    CHECK(average_ranks({}).empty());
}

TEST_CASE("spearman correlation tracks monotone association") {
    CHECK(spearman({1, 2, 3, 4}, {10, 20, 30, 40}) == doctest::Approx(1.0));
    CHECK(spearman({1, 2, 3, 4}, {9, 7, 5, 3}) == doctest::Approx(-1.0));
    // only order matters, so a monotone transform changes nothing
    CHECK(spearman({1, 4, 9, 16}, {2, 3, 5, 7}) == doctest::Approx(1.0));

    // one tie in y: ranks {1,2,3,4.5,4.5} against {1..5}
    const double r = spearman({1, 2, 3, 4, 5}, {5, 6, 7, 8, 8});
    CHECK(r == doctest::Approx(std::sqrt(0.95)));

    CHECK(std::isnan(spearman({1, 2, 3}, {7, 7, 7})));
    CHECK(std::isnan(spearman({1, 2}, {1, 2, 3})));
    CHECK(std::isnan(spearman({1}, {2})));
}

TEST_CASE("log histograms bin by powers of two") {
    auto h = make_log_histogram({0.0, 1.0, 1.5, 2.0, 3.0, 4.0, kInf, -1.0});
    CHECK(h.zeros == 1);
    CHECK(h.non_finite == 2);
    REQUIRE(h.bins.size() == 3);
    CHECK(h.bins[0].exponent == 0);
    CHECK(h.bins[0].count == 2);
    CHECK(h.bins[1].exponent == 1);
    CHECK(h.bins[1].count == 2);
    CHECK(h.bins[2].exponent == 2);
    CHECK(h.bins[2].count == 1);

    // fractional values land in negative exponents
    auto frac = make_log_histogram({0.25, 0.3});
    REQUIRE(frac.bins.size() == 1);
    CHECK(frac.bins[0].exponent == -2);
    CHECK(frac.bins[0].count == 2);

    // gaps between populated bins are kept out of the list
    auto sparse = make_log_histogram({1.0, 1000.0});
    REQUIRE(sparse.bins.size() == 2);
    CHECK(sparse.bins[0].exponent == 0);
    CHECK(sparse.bins[1].exponent == 9);
}

TEST_CASE("histogram rendering marks unfinished runs") {
    auto h = make_log_histogram({1.0, 1.0, 2.0, kInf});
    const std::string text = format_histogram(h);
    CHECK(text.find("[unfinished]") != std::string::npos);
    CHECK(text.find('#') != std::string::npos);

    auto j = histogram_json(h);
    CHECK(j["unfinished"] == 1);
    CHECK(j["zeros"] == 0);
    REQUIRE(j["bins"].size() == 2);
    CHECK(j["bins"][0]["lo"] == 1.0);
    CHECK(j["bins"][0]["hi"] == 2.0);
    CHECK(j["bins"][0]["count"] == 2);
}

TEST_CASE("sat trial rows serialize to json and csv") {
    SatTrialRow r;
    r.instance = "uf20-01";
    r.config = "net-ideal";
    r.trial = 3;
    r.seed = 42;
    r.converged = true;
    r.flips = 17;
    r.cycles = 120.0;

    auto j = sat_row_json(r);
    CHECK(j["instance"] == "uf20-01");
    CHECK(j["cycles"] == 120.0);
    CHECK(j["converged"] == true);

    SatTrialRow seq = r;
    seq.config = "sequential";
    seq.cycles.reset();
    CHECK(sat_row_json(seq)["cycles"].is_null());

    SatTrialRow capped = r;
    capped.converged = false;
    capped.cycles = kInf;
    CHECK(sat_row_json(capped)["cycles"].is_null());

    const std::string csv = sat_rows_csv({r, seq, capped});
    CHECK(csv.find("instance,config,trial,seed,converged,flips,cycles\n") == 0);
    CHECK(csv.find("uf20-01,net-ideal,3,42,1,17,120\n") != std::string::npos);
    CHECK(csv.find("uf20-01,sequential,3,42,1,17,\n") != std::string::npos);
    CHECK(csv.find("uf20-01,net-ideal,3,42,0,17,inf\n") != std::string::npos);
}

TEST_CASE("coloring trial rows serialize to json and csv") {
    ColoringTrialRow r;
    r.graph = "myciel3";
    r.k = 4;
    r.trial = 0;
    r.seed = 7;
    r.converged = true;
    r.cycles = 20.0;
    r.colors_used = 4;

    auto j = coloring_row_json(r);
    CHECK(j["graph"] == "myciel3");
    CHECK(j["colors_used"] == 4);
    CHECK(j["cycles"] == 20.0);

    ColoringTrialRow capped = r;
    capped.converged = false;
    capped.cycles = kInf;
    CHECK(coloring_row_json(capped)["cycles"].is_null());

    const std::string csv = coloring_rows_csv({r, capped});
    CHECK(csv.find("graph,k,trial,seed,converged,cycles,colors_used\n") == 0);
    CHECK(csv.find("myciel3,4,0,7,1,20,4\n") != std::string::npos);
    CHECK(csv.find("myciel3,4,0,7,0,inf,4\n") != std::string::npos);
}

TEST_CASE("random 3-sat instances have distinct variables per clause") {
    auto p = random_3sat(5, 40, 11);
    CHECK(p.num_vars == 5);
    REQUIRE(p.clauses.size() == 40);
    for (const auto& clause : p.clauses) {
        REQUIRE(clause.size() == 3);
        std::set<int> vars;
        for (int lit : clause) {
            CHECK(std::abs(lit) >= 1);
            CHECK(std::abs(lit) <= 5);
            vars.insert(std::abs(lit));
        }
        CHECK(vars.size() == 3);
    }
    CHECK(is_3sat(p));

    auto q = random_3sat(5, 40, 12);
    CHECK(p.clauses != q.clauses);
    auto p2 = random_3sat(5, 40, 11);
    CHECK(p.clauses == p2.clauses);

    CHECK_THROWS_AS(random_3sat(2, 5, 1), std::invalid_argument);
    CHECK_THROWS_AS(random_3sat(5, 0, 1), std::invalid_argument);
}

TEST_CASE("graph generators produce the advertised shapes") {
    // index matches the dimacs file names: index 2 is the 5-cycle,
    // index 3 the 11-vertex graph needing four colors
    auto c5 = mycielski_graph(2);
    CHECK(c5.num_vertices == 5);
    CHECK(c5.edges.size() == 5);

    auto m3 = mycielski_graph(3);
    CHECK(m3.num_vertices == 11);
    CHECK(m3.edges.size() == 20);

    auto m4 = mycielski_graph(4);
    CHECK(m4.num_vertices == 23);
    CHECK(m4.edges.size() == 71);
    CHECK_THROWS_AS(mycielski_graph(1), std::invalid_argument);

    auto q5 = queen_graph(5);
    CHECK(q5.num_vertices == 25);
    CHECK(q5.edges.size() == 160);

    // on a 2x2 board every pair of squares attacks
    auto q2 = queen_graph(2);
    CHECK(q2.num_vertices == 4);
    CHECK(q2.edges.size() == 6);
    CHECK_THROWS_AS(queen_graph(1), std::invalid_argument);

    // no duplicates or self-loops in either generator
    for (const auto* g : {&m4, &q5}) {
        std::set<std::pair<int, int>> seen;
        for (auto [a, b] : g->edges) {
            CHECK(a != b);
            CHECK(seen.insert({std::min(a, b), std::max(a, b)}).second);
        }
    }
}

TEST_CASE("random tsp matrices are symmetric with distinct distances") {
    auto p = random_tsp(6, 1.0, 10.0, 99);
    CHECK(p.n == 6);
    std::set<double> seen;
    for (int i = 0; i < 6; ++i) {
        CHECK(p.d[i][i] == 0.0);
        for (int j = i + 1; j < 6; ++j) {
            CHECK(p.d[i][j] == p.d[j][i]);
            CHECK(p.d[i][j] >= 1.0);
            CHECK(p.d[i][j] < 10.0);
            CHECK(seen.insert(p.d[i][j]).second);
        }
    }
    CHECK_THROWS_AS(random_tsp(2, 1.0, 10.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(random_tsp(5, -1.0, 10.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(random_tsp(5, 10.0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("config kinds map to stable names") {
    CHECK(std::string(to_string(SatConfigKind::sequential)) == "sequential");
    CHECK(std::string(to_string(SatConfigKind::network_ideal)) == "net-ideal");
    CHECK(std::string(to_string(SatConfigKind::network_lossy)) == "net-lossy");
}

TEST_CASE("benchmarks order rows by instance, config, trial") {
    SatBenchOptions opt;
    opt.trials = 3;
    opt.master_seed = 5;
    opt.threads = 1;
    opt.probsat.max_flips = 100000;
    opt.net_ideal.max_cycles = 10000;
    opt.net_lossy.max_cycles = 10000;

    std::vector<NamedCnf> instances = {{"a", toy_sat()}, {"b", toy_sat()}};
    auto res = benchmark_sat(instances, opt);
    REQUIRE(res.rows.size() == 18);

    std::size_t i = 0;
    for (const auto& inst : {"a", "b"}) {
        for (const auto& cfg : {"sequential", "net-ideal", "net-lossy"}) {
            for (int t = 0; t < 3; ++t, ++i) {
                CHECK(res.rows[i].instance == inst);
                CHECK(res.rows[i].config == cfg);
                CHECK(res.rows[i].trial == t);
                CHECK(res.rows[i].converged);
            }
        }
    }

    // sequential rows report flips only; network rows carry cycles
    CHECK_FALSE(res.rows[0].cycles.has_value());
    CHECK(res.rows[3].cycles.has_value());

    auto flips = config_flips(res.rows, "sequential");
    CHECK(flips.size() == 6);
    auto cycles = config_cycles(res.rows, "net-ideal");
    CHECK(cycles.size() == 6);
    for (double c : cycles) CHECK(std::isfinite(c));
}

TEST_CASE("benchmark seeds derive from fixed indices") {
    SatBenchOptions opt;
    opt.trials = 2;
    opt.master_seed = 9;
    opt.threads = 1;
    opt.probsat.max_flips = 100000;
    opt.net_ideal.max_cycles = 10000;
    opt.net_lossy.max_cycles = 10000;

    std::vector<NamedCnf> instances = {{"a", toy_sat()}};
    auto res = benchmark_sat(instances, opt);
    REQUIRE(res.rows.size() == 6);
    for (std::size_t cfg = 0; cfg < 3; ++cfg) {
        for (std::uint64_t t = 0; t < 2; ++t) {
            const auto expected =
                derive_seed(derive_seed(derive_seed(9, 0), static_cast<std::uint64_t>(cfg)), t);
            CHECK(res.rows[cfg * 2 + t].seed == expected);
        }
    }

    // adding trials or instances must not disturb existing seeds
    SatBenchOptions more = opt;
    more.trials = 4;
    auto bigger = benchmark_sat({{"a", toy_sat()}, {"b", toy_sat()}}, more);
    for (std::size_t cfg = 0; cfg < 3; ++cfg) {
        for (int t = 0; t < 2; ++t) {
            CHECK(bigger.rows[cfg * 4 + t].seed == res.rows[cfg * 2 + t].seed);
        }
    }

    // a config subset keeps the seeds of the kinds it retains
    SatBenchOptions lossless = opt;
    lossless.configs = {SatConfigKind::sequential, SatConfigKind::network_ideal};
    auto sub = benchmark_sat(instances, lossless);
    REQUIRE(sub.rows.size() == 4);
    CHECK(sub.rows[0].seed == res.rows[0].seed);
    CHECK(sub.rows[2].seed == res.rows[2].seed);
}

TEST_CASE("benchmark results are identical across thread counts") {
    SatBenchOptions opt;
    opt.trials = 4;
    opt.master_seed = 21;
    opt.probsat.max_flips = 100000;
    opt.net_ideal.max_cycles = 10000;
    opt.net_lossy.max_cycles = 10000;

    std::vector<NamedCnf> instances = {{"toy", toy_sat()}};
    opt.threads = 1;
    auto one = benchmark_sat(instances, opt);
    opt.threads = 4;
    auto four = benchmark_sat(instances, opt);
    REQUIRE(one.rows.size() == four.rows.size());
    for (std::size_t i = 0; i < one.rows.size(); ++i) {
        CHECK(one.rows[i].seed == four.rows[i].seed);
        CHECK(one.rows[i].flips == four.rows[i].flips);
        CHECK(one.rows[i].converged == four.rows[i].converged);
        CHECK(one.rows[i].cycles == four.rows[i].cycles);
    }
}

TEST_CASE("non-converged runs poison medians upward") {
    std::vector<SatTrialRow> rows(3);
    for (int i = 0; i < 3; ++i) {
        rows[i].config = "net-ideal";
        rows[i].converged = i == 0;
        rows[i].cycles = i == 0 ? 50.0 : kInf;
    }
    auto cycles = config_cycles(rows, "net-ideal");
    REQUIRE(cycles.size() == 3);
    CHECK(median(cycles) == kInf);
}
