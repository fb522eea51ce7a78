#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "riemdp/kendall.hpp"

namespace riemdp::harness {

/// Unusable configuration (flags, parameter combinations). CLI exit code 2.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data. CLI exit code 3.
struct data_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Shortest decimal digits that round-trip a double (up to 17 significant).
std::string format_double(double v);

struct ResultRow {
    std::string manifold;
    std::string mechanism;
    int n = 0;
    int replicate = 0;
    double utility_euclidean = 0.0;
    double utility_intrinsic = 0.0;
    bool has_euclidean = false;
    bool has_intrinsic = false;
    std::uint64_t seed = 0;
    long wall_ms = 0;
    std::string error;
};

struct SummaryRow {
    std::string manifold;
    std::string mechanism;
    int n = 0;
    long count = 0;
    double mean_utility = 0.0;
    double two_se = 0.0;
};

/// Landmark CSV: one shape per line, 2k comma-separated reals
/// x1,y1,...,xk,yk; lines starting with '#' are comments. Every shape must
/// carry the same landmark count.
std::vector<LandmarkConfig> load_landmarks(const std::string& path);
void write_landmarks(const std::string& path, std::span<const LandmarkConfig> shapes,
                     std::span<const std::string> comments = {});

std::string results_to_csv(std::span<const ResultRow> rows);
void write_results(std::span<const ResultRow> rows, const std::string& path);

/// Per-(mechanism, n) mean utility and twice its standard error, computed
/// from the euclidean utility column of clean rows. Ordered by first
/// appearance in the input.
std::vector<SummaryRow> summarize(std::span<const ResultRow> rows);
std::string summary_to_csv(std::span<const SummaryRow> rows);
void write_summary(std::span<const ResultRow> rows, const std::string& path);

/// gnuplot script plotting mean utility with 2SE error bars against n,
/// one series per mechanism, from a summary CSV.
void write_plot_script(const std::string& script_path, const std::string& summary_path,
                       std::span<const SummaryRow> rows);

}  // namespace riemdp::harness
