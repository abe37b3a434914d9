// Result rows, summary statistics, and serialization helpers shared by the
// CLI and the benchmark driver.

#pragma once

#include <cstdint>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

namespace evcsp {

// One solver run. `cycles` is absent for flip-based sequential runs and
// +inf when the run hit its cap without converging.
struct SatTrialRow {
    std::string instance;
    std::string config;
    int trial = 0;
    std::uint64_t seed = 0;
    bool converged = false;
    std::uint64_t flips = 0;
    std::optional<double> cycles;
};

struct ColoringTrialRow {
    std::string graph;
    int k = 0;
    int trial = 0;
    std::uint64_t seed = 0;
    bool converged = false;
    double cycles = 0.0;
    int colors_used = 0;
};

// Median of the finite-or-infinite values; +inf entries sort high, so a
// majority of non-converged runs pushes the median to +inf. NaN on empty.
double median(std::vector<double> values);

// Average ranks (ties share the mean rank), 1-based.
std::vector<double> average_ranks(const std::vector<double>& values);

// Spearman rank correlation; NaN when either side has zero rank variance.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

// Power-of-two bins [2^e, 2^{e+1}); exact zeros and non-finite values are
// counted separately.
struct HistogramBin {
    int exponent = 0;
    std::uint64_t count = 0;
};

struct LogHistogram {
    std::uint64_t zeros = 0;
    std::uint64_t non_finite = 0;
    std::vector<HistogramBin> bins;  // sorted by exponent
};

LogHistogram make_log_histogram(const std::vector<double>& values);
std::string format_histogram(const LogHistogram& h);
nlohmann::json histogram_json(const LogHistogram& h);

nlohmann::json sat_row_json(const SatTrialRow& r);
std::string sat_rows_csv(const std::vector<SatTrialRow>& rows);

nlohmann::json coloring_row_json(const ColoringTrialRow& r);
std::string coloring_rows_csv(const std::vector<ColoringTrialRow>& rows);

}  // namespace evcsp
