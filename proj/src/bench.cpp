#include "evcsp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <stdexcept>
#include <thread>

#include "evcsp/rng.hpp"

namespace evcsp {

const char* to_string(SatConfigKind kind) {
    switch (kind) {
        case SatConfigKind::sequential:
            return "sequential";
        case SatConfigKind::network_ideal:
            return "net-ideal";
        case SatConfigKind::network_lossy:
            return "net-lossy";
    }
    throw std::invalid_argument("unknown config");
}

namespace {

SatTrialRow run_one(const NamedCnf& inst, SatConfigKind kind, int trial, std::uint64_t seed,
                    const SatBenchOptions& opt) {
    SatTrialRow row;
    row.instance = inst.name;
    row.config = to_string(kind);
    row.trial = trial;
    row.seed = seed;
    if (kind == SatConfigKind::sequential) {
        auto rep = sequential_probsat(inst.problem, opt.probsat, seed);
        row.converged = rep.solved;
        row.flips = rep.flips;
        row.cycles = std::nullopt;
    } else {
        const auto& sopt = kind == SatConfigKind::network_ideal ? opt.net_ideal : opt.net_lossy;
        auto rep = solve_sat_network(inst.problem, sopt, seed);
        row.converged = rep.converged;
        row.flips = rep.flips;
        row.cycles = rep.cycles;
    }
    return row;
}

}  // namespace

SatBenchResult benchmark_sat(const std::vector<NamedCnf>& instances, const SatBenchOptions& opt) {
    if (opt.trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (opt.configs.empty()) throw std::invalid_argument("no configs requested");

    struct Job {
        std::size_t instance;
        std::size_t config;
        int trial;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    jobs.reserve(instances.size() * opt.configs.size() * static_cast<std::size_t>(opt.trials));
    for (std::size_t i = 0; i < instances.size(); ++i) {
        std::uint64_t inst_seed = derive_seed(opt.master_seed, static_cast<std::uint64_t>(i));
        for (std::size_t c = 0; c < opt.configs.size(); ++c) {
            std::uint64_t cfg_seed =
                derive_seed(inst_seed, static_cast<std::uint64_t>(opt.configs[c]));
            for (int t = 0; t < opt.trials; ++t) {
                jobs.push_back({i, c, t, derive_seed(cfg_seed, static_cast<std::uint64_t>(t))});
            }
        }
    }

    SatBenchResult result;
    result.rows.resize(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t j = next.fetch_add(1, std::memory_order_relaxed);
            if (j >= jobs.size()) return;
            const Job& job = jobs[j];
            result.rows[j] =
                run_one(instances[job.instance], opt.configs[job.config], job.trial, job.seed, opt);
        }
    };

    unsigned n_threads = opt.threads;
    if (n_threads == 0) {
        n_threads = std::max(1u, std::thread::hardware_concurrency());
    }
    n_threads = static_cast<unsigned>(
        std::min<std::size_t>(n_threads, std::max<std::size_t>(jobs.size(), 1)));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return result;
}

std::vector<double> config_flips(const std::vector<SatTrialRow>& rows, const std::string& config) {
    std::vector<double> out;
    for (const auto& r : rows) {
        if (r.config == config) out.push_back(static_cast<double>(r.flips));
    }
    return out;
}

std::vector<double> config_cycles(const std::vector<SatTrialRow>& rows, const std::string& config) {
    std::vector<double> out;
    for (const auto& r : rows) {
        if (r.config != config) continue;
        if (r.cycles.has_value()) {
            out.push_back(*r.cycles);
        } else {
            out.push_back(std::numeric_limits<double>::infinity());
        }
    }
    return out;
}

}  // namespace evcsp
