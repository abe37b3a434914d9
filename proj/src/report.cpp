#include "evcsp/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

namespace evcsp {

double median(std::vector<double> values) {
    if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(values.begin(), values.end());
    std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<double> average_ranks(const std::vector<double>& values) {
    std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        double mean_rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = mean_rank;
        i = j + 1;
    }
    return ranks;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    auto rx = average_ranks(x);
    auto ry = average_ranks(y);
    double n = static_cast<double>(x.size());
    double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double dx = rx[i] - mx;
        double dy = ry[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return sxy / std::sqrt(sxx * syy);
}

LogHistogram make_log_histogram(const std::vector<double>& values) {
    LogHistogram h;
    std::map<int, std::uint64_t> counts;
    for (double v : values) {
        if (!std::isfinite(v) || v < 0.0) {
            ++h.non_finite;
        } else if (v == 0.0) {
            ++h.zeros;
        } else {
            counts[static_cast<int>(std::floor(std::log2(v)))]++;
        }
    }
    for (const auto& [e, c] : counts) h.bins.push_back({e, c});
    return h;
}

std::string format_histogram(const LogHistogram& h) {
    std::ostringstream out;
    std::uint64_t max_count = std::max<std::uint64_t>(h.zeros, 1);
    for (const auto& b : h.bins) max_count = std::max(max_count, b.count);
    auto bar = [&](std::uint64_t c) {
        constexpr std::uint64_t width = 50;
        std::uint64_t len = (c * width + max_count - 1) / max_count;
        return std::string(static_cast<std::size_t>(len), '#');
    };
    auto edge = [](int e) {
        double v = std::ldexp(1.0, e);
        std::ostringstream s;
        s << v;
        return s.str();
    };
    if (h.zeros > 0) {
        out << "[0]              " << h.zeros << "  " << bar(h.zeros) << '\n';
    }
    for (const auto& b : h.bins) {
        std::string label = "[" + edge(b.exponent) + ", " + edge(b.exponent + 1) + ")";
        label.resize(std::max<std::size_t>(label.size(), 16), ' ');
        out << label << ' ' << b.count << "  " << bar(b.count) << '\n';
    }
    if (h.non_finite > 0) {
        out << "[unfinished]     " << h.non_finite << '\n';
    }
    return out.str();
}

nlohmann::json histogram_json(const LogHistogram& h) {
    nlohmann::json bins = nlohmann::json::array();
    for (const auto& b : h.bins) {
        bins.push_back({{"lo", std::ldexp(1.0, b.exponent)},
                        {"hi", std::ldexp(1.0, b.exponent + 1)},
                        {"count", b.count}});
    }
    return {{"zeros", h.zeros}, {"unfinished", h.non_finite}, {"bins", bins}};
}

nlohmann::json sat_row_json(const SatTrialRow& r) {
    nlohmann::json j;
    j["instance"] = r.instance;
    j["config"] = r.config;
    j["trial"] = r.trial;
    j["seed"] = r.seed;
    j["converged"] = r.converged;
    j["flips"] = r.flips;
    if (r.cycles.has_value() && std::isfinite(*r.cycles)) {
        j["cycles"] = *r.cycles;
    } else {
        j["cycles"] = nullptr;
    }
    return j;
}

std::string sat_rows_csv(const std::vector<SatTrialRow>& rows) {
    std::ostringstream out;
    out << "instance,config,trial,seed,converged,flips,cycles\n";
    for (const auto& r : rows) {
        out << r.instance << ',' << r.config << ',' << r.trial << ',' << r.seed << ','
            << (r.converged ? 1 : 0) << ',' << r.flips << ',';
        if (r.cycles.has_value()) {
            if (std::isfinite(*r.cycles)) {
                out << *r.cycles;
            } else {
                out << "inf";
            }
        }
        out << '\n';
    }
    return out.str();
}

nlohmann::json coloring_row_json(const ColoringTrialRow& r) {
    nlohmann::json j;
    j["graph"] = r.graph;
    j["k"] = r.k;
    j["trial"] = r.trial;
    j["seed"] = r.seed;
    j["converged"] = r.converged;
    if (std::isfinite(r.cycles)) {
        j["cycles"] = r.cycles;
    } else {
        j["cycles"] = nullptr;
    }
    j["colors_used"] = r.colors_used;
    return j;
}

std::string coloring_rows_csv(const std::vector<ColoringTrialRow>& rows) {
    std::ostringstream out;
    out << "graph,k,trial,seed,converged,cycles,colors_used\n";
    for (const auto& r : rows) {
        out << r.graph << ',' << r.k << ',' << r.trial << ',' << r.seed << ','
            << (r.converged ? 1 : 0) << ',';
        if (std::isfinite(r.cycles)) {
            out << r.cycles;
        } else {
            out << "inf";
        }
        out << ',' << r.colors_used << '\n';
    }
    return out.str();
}

}  // namespace evcsp
