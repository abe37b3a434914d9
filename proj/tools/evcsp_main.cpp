// Command-line front end: SAT (network and sequential), graph coloring,
// TSP sampling, hardware-array variants, and the benchmark driver.

#include <CLI11.hpp>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <json.hpp>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "evcsp/bench.hpp"
#include "evcsp/coloring.hpp"
#include "evcsp/hw.hpp"
#include "evcsp/instances.hpp"
#include "evcsp/io.hpp"
#include "evcsp/report.hpp"
#include "evcsp/rng.hpp"
#include "evcsp/sat.hpp"
#include "evcsp/tsp.hpp"

namespace {

using nlohmann::json;

struct CommonOpts {
    std::uint64_t seed = 1;
    int trials = 1;
    std::string channel = "ideal";
    double loss_prob = 0.1;
    double delay_frac = 0.1;
    double check_interval = 20.0;
    double max_cycles = 0.0;  // 0 = subcommand default
    bool exact = false;
    std::string format = "json";
    bool hist = false;
    std::string out_path;
    bool dump_routing = false;
};

void add_common(CLI::App* cmd, CommonOpts& o, double default_max_cycles) {
    o.max_cycles = default_max_cycles;
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--trials", o.trials, "independent trials")->check(CLI::PositiveNumber);
    cmd->add_option("--channel", o.channel, "event channel")
        ->check(CLI::IsMember({"ideal", "lossy"}));
    cmd->add_option("--loss-prob", o.loss_prob, "loss probability (lossy)")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--delay-frac", o.delay_frac,
                    "max delay as a fraction of the mean period (lossy)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--check-interval", o.check_interval,
                    "convergence check spacing in mean cycles")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-cycles", o.max_cycles, "cycle budget per trial")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--exact", o.exact, "check convergence after every event instead of on the grid");
    cmd->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_flag("--hist", o.hist, "emit a log-binned histogram");
    cmd->add_option("--out", o.out_path, "write the report here, not stdout");
    cmd->add_flag("--dump-routing", o.dump_routing, "print the routing table and exit");
}

evcsp::ChannelModel channel_of(const CommonOpts& o) {
    if (o.channel == "lossy") {
        return evcsp::ChannelModel::lossy(o.loss_prob, o.delay_frac);
    }
    return evcsp::ChannelModel::ideal();
}

json num_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

void emit(const CommonOpts& o, const std::string& payload) {
    if (o.out_path.empty()) {
        std::cout << payload;
        if (!payload.empty() && payload.back() != '\n') std::cout << '\n';
    } else {
        evcsp::write_file(o.out_path, payload);
    }
}

int finish_sat(const CommonOpts& o, const std::string& command, const std::string& instance,
               const std::vector<evcsp::SatTrialRow>& rows,
               const std::vector<std::vector<json>>& assignments, bool cycles_based) {
    int solved = 0;
    std::vector<double> metric;
    for (const auto& r : rows) {
        if (r.converged) ++solved;
        if (cycles_based) {
            metric.push_back(r.cycles.has_value() ? *r.cycles
                                                  : std::numeric_limits<double>::infinity());
        } else {
            metric.push_back(static_cast<double>(r.flips));
        }
    }
    if (o.format == "csv") {
        emit(o, evcsp::sat_rows_csv(rows));
        if (o.hist) std::cerr << evcsp::format_histogram(evcsp::make_log_histogram(metric));
    } else {
        json j;
        j["command"] = command;
        j["instance"] = instance;
        j["master_seed"] = o.seed;
        j["trials"] = o.trials;
        json jr = json::array();
        for (std::size_t i = 0; i < rows.size(); ++i) {
            json row = evcsp::sat_row_json(rows[i]);
            if (!assignments[i].empty()) row["assignment"] = assignments[i];
            jr.push_back(std::move(row));
        }
        j["rows"] = std::move(jr);
        j["summary"] = {
            {"solved", solved},
            {"solved_fraction", static_cast<double>(solved) / rows.size()},
            {cycles_based ? "median_cycles" : "median_flips", num_or_null(evcsp::median(metric))}};
        if (o.hist) j["histogram"] = evcsp::histogram_json(evcsp::make_log_histogram(metric));
        emit(o, j.dump(2));
    }
    return solved > 0 ? 0 : 1;
}

int run_sat_seq(const CommonOpts& o, const std::string& path, double x, double y,
                std::uint64_t max_flips) {
    auto p = evcsp::parse_dimacs_cnf(evcsp::read_file(path));
    evcsp::ProbSatParams params;
    params.x = x;
    params.y = y;
    params.max_flips = max_flips;
    std::vector<evcsp::SatTrialRow> rows;
    std::vector<std::vector<json>> assignments;
    for (int t = 0; t < o.trials; ++t) {
        std::uint64_t seed = evcsp::derive_seed(o.seed, static_cast<std::uint64_t>(t));
        auto rep = evcsp::sequential_probsat(p, params, seed);
        evcsp::SatTrialRow row;
        row.instance = path;
        row.config = "sequential";
        row.trial = t;
        row.seed = seed;
        row.converged = rep.solved;
        row.flips = rep.flips;
        rows.push_back(row);
        std::vector<json> a;
        if (rep.solved) {
            for (bool b : rep.assignment) a.push_back(b ? 1 : 0);
        }
        assignments.push_back(std::move(a));
    }
    return finish_sat(o, "sat-seq", path, rows, assignments, false);
}

int run_sat_net(const CommonOpts& o, const std::string& path, bool hw) {
    auto p = evcsp::parse_dimacs_cnf(evcsp::read_file(path));
    evcsp::require_3sat(p);
    if (o.dump_routing) {
        if (hw) {
            auto hn = evcsp::build_hw_sat(p);
            emit(o, evcsp::routing_dump(hn.net));
        } else {
            auto sn = evcsp::build_sat_network(p);
            emit(o, evcsp::routing_dump(sn.net));
        }
        return 0;
    }
    std::vector<evcsp::SatTrialRow> rows;
    std::vector<std::vector<json>> assignments;
    for (int t = 0; t < o.trials; ++t) {
        std::uint64_t seed = evcsp::derive_seed(o.seed, static_cast<std::uint64_t>(t));
        evcsp::RunReport rep;
        std::vector<bool> assignment;
        if (hw) {
            evcsp::HwSatSolveOptions sopt;
            sopt.channel = channel_of(o);
            sopt.max_cycles = o.max_cycles;
            sopt.check_interval = o.check_interval;
            sopt.exact_detection = o.exact;
            evcsp::HwSatRun run(p, sopt, seed);
            rep = run.solve();
            assignment = run.assignment();
        } else {
            evcsp::SatSolveOptions sopt;
            sopt.channel = channel_of(o);
            sopt.max_cycles = o.max_cycles;
            sopt.check_interval = o.check_interval;
            sopt.exact_detection = o.exact;
            evcsp::SatNetworkRun run(p, sopt, seed);
            rep = run.solve();
            assignment = run.assignment();
        }
        evcsp::SatTrialRow row;
        row.instance = path;
        row.config = hw ? "hw-net" : "net";
        row.trial = t;
        row.seed = seed;
        row.converged = rep.converged;
        row.flips = rep.flips;
        row.cycles = rep.cycles;
        rows.push_back(row);
        std::vector<json> a;
        if (rep.converged) {
            for (bool b : assignment) a.push_back(b ? 1 : 0);
        }
        assignments.push_back(std::move(a));
    }
    return finish_sat(o, hw ? "hw-sat" : "sat-net", path, rows, assignments, true);
}

int run_color(const CommonOpts& o, const std::string& path, int k, bool hw,
              const std::string& mode_name) {
    auto p = evcsp::parse_dimacs_col(evcsp::read_file(path));
    p.k = k;
    evcsp::validate(p);
    if (o.dump_routing) {
        if (hw) {
            auto hc = evcsp::build_hw_coloring(p);
            emit(o, evcsp::routing_dump(hc.net));
        } else {
            auto cn = evcsp::build_coloring_network(
                p, mode_name == "conflict" ? evcsp::HeuristicMode::alternate_on_conflict
                                           : evcsp::HeuristicMode::alternate_every_tick);
            emit(o, evcsp::routing_dump(cn.net));
        }
        return 0;
    }
    std::vector<evcsp::ColoringTrialRow> rows;
    std::vector<std::vector<json>> colorings;
    for (int t = 0; t < o.trials; ++t) {
        std::uint64_t seed = evcsp::derive_seed(o.seed, static_cast<std::uint64_t>(t));
        evcsp::ColoringResult res;
        if (hw) {
            evcsp::HwColoringSolveOptions copt;
            copt.channel = channel_of(o);
            copt.max_cycles = o.max_cycles;
            copt.check_interval = o.check_interval;
            copt.exact_detection = o.exact;
            res = evcsp::solve_hw_coloring(p, copt, seed);
        } else {
            evcsp::ColoringSolveOptions copt;
            copt.channel = channel_of(o);
            copt.max_cycles = o.max_cycles;
            copt.check_interval = o.check_interval;
            copt.exact_detection = o.exact;
            copt.mode = mode_name == "conflict" ? evcsp::HeuristicMode::alternate_on_conflict
                                                : evcsp::HeuristicMode::alternate_every_tick;
            res = evcsp::solve_coloring(p, copt, seed);
        }
        evcsp::ColoringTrialRow row;
        row.graph = path;
        row.k = k;
        row.trial = t;
        row.seed = seed;
        row.converged = res.report.converged;
        row.cycles = res.report.cycles;
        row.colors_used = res.colors_used;
        rows.push_back(row);
        std::vector<json> c;
        if (res.report.converged) {
            for (int color : res.colors) c.push_back(color);
        }
        colorings.push_back(std::move(c));
    }
    int solved = 0;
    std::vector<double> cycles;
    for (const auto& r : rows) {
        if (r.converged) ++solved;
        cycles.push_back(r.cycles);
    }
    if (o.format == "csv") {
        emit(o, evcsp::coloring_rows_csv(rows));
        if (o.hist) std::cerr << evcsp::format_histogram(evcsp::make_log_histogram(cycles));
    } else {
        json j;
        j["command"] = hw ? "hw-color" : "color";
        j["graph"] = path;
        j["k"] = k;
        j["master_seed"] = o.seed;
        j["trials"] = o.trials;
        json jr = json::array();
        for (std::size_t i = 0; i < rows.size(); ++i) {
            json row = evcsp::coloring_row_json(rows[i]);
            if (!colorings[i].empty()) row["colors"] = colorings[i];
            jr.push_back(std::move(row));
        }
        j["rows"] = std::move(jr);
        j["summary"] = {{"solved", solved},
                        {"solved_fraction", static_cast<double>(solved) / rows.size()},
                        {"median_cycles", num_or_null(evcsp::median(cycles))}};
        if (o.hist) j["histogram"] = evcsp::histogram_json(evcsp::make_log_histogram(cycles));
        emit(o, j.dump(2));
    }
    return solved > 0 ? 0 : 1;
}

int run_tsp(const CommonOpts& o, const std::string& path, std::uint64_t tours, double K, double eta,
            bool open_length) {
    if (o.channel != "ideal") {
        throw std::runtime_error("tour sampling needs every event delivered; use --channel ideal");
    }
    auto text = evcsp::read_file(path);
    evcsp::TspProblem p;
    if (text.find("EDGE_WEIGHT_SECTION") != std::string::npos) {
        p = evcsp::parse_tsplib(text);
    } else {
        p = evcsp::parse_distance_matrix(text);
    }
    if (o.dump_routing) {
        auto tn = evcsp::build_tsp_network(p);
        emit(o, evcsp::routing_dump(tn.net));
        return 0;
    }
    evcsp::TspSampleOptions sopt;
    sopt.freq.K = K;
    sopt.freq.eta_scale = eta;
    sopt.open_length = open_length;
    if (o.max_cycles > 0.0) sopt.max_cycles = o.max_cycles;
    json jt = json::array();
    std::ostringstream csv;
    csv << "trial,tour,length,count\n";
    bool sampled = false;
    for (int t = 0; t < o.trials; ++t) {
        std::uint64_t seed = evcsp::derive_seed(o.seed, static_cast<std::uint64_t>(t));
        auto res = evcsp::sample_tours(p, tours, sopt, seed);
        sampled = sampled || res.total > 0;
        auto sorted = res.tours;
        std::sort(sorted.begin(), sorted.end(),
                  [](const evcsp::TourRecord& a, const evcsp::TourRecord& b) {
                      return a.length != b.length ? a.length < b.length : a.cities < b.cities;
                  });
        std::vector<double> lengths;
        if (o.format == "csv") {
            for (const auto& tour : sorted) {
                csv << t << ',';
                for (std::size_t i = 0; i < tour.cities.size(); ++i) {
                    if (i) csv << ' ';
                    csv << tour.cities[i];
                }
                csv << ',' << tour.length << ',' << tour.count << '\n';
            }
        } else {
            json trial;
            trial["trial"] = t;
            trial["seed"] = seed;
            trial["total"] = res.total;
            trial["distinct"] = sorted.size();
            json jtours = json::array();
            for (const auto& tour : sorted) {
                jtours.push_back(
                    {{"cities", tour.cities}, {"length", tour.length}, {"count", tour.count}});
                for (std::uint64_t c = 0; c < tour.count; ++c) {
                    lengths.push_back(tour.length);
                }
            }
            trial["tours"] = std::move(jtours);
            if (o.hist) {
                trial["length_histogram"] =
                    evcsp::histogram_json(evcsp::make_log_histogram(lengths));
            }
            jt.push_back(std::move(trial));
        }
    }
    if (o.format == "csv") {
        emit(o, csv.str());
    } else {
        json j;
        j["command"] = "tsp";
        j["instance"] = path;
        j["master_seed"] = o.seed;
        j["tours_requested"] = tours;
        j["trials"] = o.trials;
        j["rows"] = std::move(jt);
        emit(o, j.dump(2));
    }
    return sampled ? 0 : 1;
}

int run_bench(const CommonOpts& o, const std::vector<std::string>& paths,
              const std::vector<std::string>& config_names, double x, double y,
              std::uint64_t max_flips, unsigned threads) {
    std::vector<evcsp::NamedCnf> instances;
    for (const auto& path : paths) {
        instances.push_back({path, evcsp::parse_dimacs_cnf(evcsp::read_file(path))});
        evcsp::require_3sat(instances.back().problem);
    }
    evcsp::SatBenchOptions bopt;
    bopt.configs.clear();
    for (const auto& name : config_names) {
        if (name == "sequential") {
            bopt.configs.push_back(evcsp::SatConfigKind::sequential);
        } else if (name == "net-ideal") {
            bopt.configs.push_back(evcsp::SatConfigKind::network_ideal);
        } else if (name == "net-lossy") {
            bopt.configs.push_back(evcsp::SatConfigKind::network_lossy);
        } else {
            throw std::runtime_error("unknown config: " + name);
        }
    }
    bopt.trials = o.trials;
    bopt.master_seed = o.seed;
    bopt.probsat.x = x;
    bopt.probsat.y = y;
    bopt.probsat.max_flips = max_flips;
    bopt.net_ideal.max_cycles = o.max_cycles;
    bopt.net_ideal.check_interval = o.check_interval;
    bopt.net_ideal.exact_detection = o.exact;
    bopt.net_lossy = bopt.net_ideal;
    bopt.net_lossy.channel = evcsp::ChannelModel::lossy(o.loss_prob, o.delay_frac);
    bopt.threads = threads;
    auto result = evcsp::benchmark_sat(instances, bopt);

    bool any_converged = false;
    for (const auto& r : result.rows) any_converged = any_converged || r.converged;
    if (o.format == "csv") {
        emit(o, evcsp::sat_rows_csv(result.rows));
        return any_converged ? 0 : 1;
    }
    json j;
    j["command"] = "bench";
    j["master_seed"] = o.seed;
    j["trials"] = o.trials;
    j["instances"] = paths;
    json jr = json::array();
    for (const auto& r : result.rows) jr.push_back(evcsp::sat_row_json(r));
    j["rows"] = std::move(jr);
    json summary;
    for (auto kind : bopt.configs) {
        const std::string name = evcsp::to_string(kind);
        json s;
        int solved = 0, total = 0;
        for (const auto& r : result.rows) {
            if (r.config != name) continue;
            ++total;
            if (r.converged) ++solved;
        }
        s["solved"] = solved;
        s["trials"] = total;
        if (kind == evcsp::SatConfigKind::sequential) {
            s["median_flips"] = num_or_null(evcsp::median(evcsp::config_flips(result.rows, name)));
        } else {
            s["median_cycles"] =
                num_or_null(evcsp::median(evcsp::config_cycles(result.rows, name)));
        }
        if (o.hist) {
            auto values = kind == evcsp::SatConfigKind::sequential
                              ? evcsp::config_flips(result.rows, name)
                              : evcsp::config_cycles(result.rows, name);
            s["histogram"] = evcsp::histogram_json(evcsp::make_log_histogram(values));
        }
        summary[name] = std::move(s);
    }
    j["summary"] = std::move(summary);
    emit(o, j.dump(2));
    return any_converged ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"event-driven constraint solver"};
    app.require_subcommand(1);

    CommonOpts seq_o, net_o, hw_o, col_o, hwc_o, tsp_o, bench_o;
    std::string seq_file, net_file, hw_file, col_file, hwc_file, tsp_file;
    std::vector<std::string> bench_files;
    double x = 1.0, y = 2.06;
    std::uint64_t max_flips = 1'000'000;
    int col_k = 0, hwc_k = 0;
    std::string col_mode = "tick", hwc_mode = "tick";
    std::uint64_t tours = 1000;
    double tsp_K = 1.0, tsp_eta = 1e-3;
    bool tsp_open = false;
    std::vector<std::string> bench_configs = {"sequential", "net-ideal", "net-lossy"};
    unsigned bench_threads = 0;

    auto* seq = app.add_subcommand("sat-seq", "sequential stochastic local search");
    seq->add_option("file", seq_file, "DIMACS CNF instance")->required();
    add_common(seq, seq_o, 0.0);
    seq->add_option("--x", x, "make-count weight base");
    seq->add_option("--y", y, "break-count weight base");
    seq->add_option("--max-flips", max_flips, "flip budget per trial");

    auto* net = app.add_subcommand("sat-net", "3-SAT on the oscillator network");
    net->add_option("file", net_file, "DIMACS CNF instance (3-SAT)")->required();
    add_common(net, net_o, 1e6);

    auto* hws = app.add_subcommand("hw-sat", "3-SAT on the hardware node array");
    hws->add_option("file", hw_file, "DIMACS CNF instance (3-SAT)")->required();
    add_common(hws, hw_o, 1e5);

    auto* col = app.add_subcommand("color", "graph coloring on the network");
    col->add_option("file", col_file, "DIMACS .col graph")->required();
    col->add_option("--k", col_k, "number of colors")->required()->check(CLI::Range(2, 1 << 20));
    col->add_option("--mode", col_mode, "heuristic alternation")
        ->check(CLI::IsMember({"tick", "conflict"}));
    add_common(col, col_o, 1e4);

    auto* hwc = app.add_subcommand("hw-color", "coloring on the hardware array");
    hwc->add_option("file", hwc_file, "DIMACS .col graph")->required();
    hwc->add_option("--k", hwc_k, "number of colors (at most 8)")
        ->required()
        ->check(CLI::Range(2, 8));
    add_common(hwc, hwc_o, 1e5);

    auto* tsp = app.add_subcommand("tsp", "sample traveling-salesman tours");
    tsp->add_option("file", tsp_file, "distance matrix or TSPLIB FULL_MATRIX")->required();
    tsp->add_option("--tours", tours, "tours to sample per trial")->check(CLI::PositiveNumber);
    tsp->add_option("--K", tsp_K, "frequency scale (frequency = K/distance)");
    tsp->add_option("--eta", tsp_eta, "relative frequency jitter");
    tsp->add_flag("--open", tsp_open, "report open path lengths");
    add_common(tsp, tsp_o, 0.0);

    auto* bench = app.add_subcommand("bench", "compare solver configurations");
    bench->add_option("files", bench_files, "DIMACS CNF instances")->required();
    bench->add_option("--configs", bench_configs, "subset of {sequential, net-ideal, net-lossy}");
    bench->add_option("--x", x, "make-count weight base");
    bench->add_option("--y", y, "break-count weight base");
    bench->add_option("--max-flips", max_flips, "flip budget (sequential)");
    bench->add_option("--threads", bench_threads, "worker threads (0 = auto)");
    add_common(bench, bench_o, 1e6);
    bench_o.trials = 10;
    bench->get_option("--trials")->default_val(10);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (seq->parsed()) return run_sat_seq(seq_o, seq_file, x, y, max_flips);
        if (net->parsed()) return run_sat_net(net_o, net_file, false);
        if (hws->parsed()) return run_sat_net(hw_o, hw_file, true);
        if (col->parsed()) return run_color(col_o, col_file, col_k, false, col_mode);
        if (hwc->parsed()) return run_color(hwc_o, hwc_file, hwc_k, true, hwc_mode);
        if (tsp->parsed()) {
            return run_tsp(tsp_o, tsp_file, tours, tsp_K, tsp_eta, tsp_open);
        }
        if (bench->parsed()) {
            return run_bench(bench_o, bench_files, bench_configs, x, y, max_flips, bench_threads);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
