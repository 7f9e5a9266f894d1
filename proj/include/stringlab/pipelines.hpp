#ifndef STRINGLAB_PIPELINES_HPP
#define STRINGLAB_PIPELINES_HPP

#include <optional>
#include <string>
#include <vector>

#include "stringlab/fractal.hpp"
#include "stringlab/simulate.hpp"

namespace stringlab {

enum class EstimateSet { Range, GraphTime, GraphSpace, Level, DoubleI, DoubleII };

std::string to_string(EstimateSet set);
EstimateSet estimate_set_from_string(const std::string& name);

// Defaults are the calibrated desk-scale setups; every field is
// overridable from the CLI.
struct EstimateConfig {
    EstimateSet set = EstimateSet::Level;
    int d = 1;
    std::uint64_t seed = 1;
    int replicas = 24;
    int max_draws = 96; // sampling stops after this many attempts

    // grid pipelines (range / level / doubles)
    GridSpec grid{0.25, 1.25, -0.5, 0.5, 64, 128};

    // graph pipelines
    int path_nodes = 4096;
    double stretch = 16.0;

    // level pipeline: replicas with fewer crossing cells are excluded
    // (the nonemptiness conditioning, reported in the aggregate)
    std::size_t min_cells = 1000;

    // double-time pipelines
    double eps = 0.2;
    double gap = 0.5;

    int k_min = 1, k_max = 5; // octave window r = 2^-k
    std::optional<double> tolerance; // defaults per set when unset
};

struct ReplicaRecord {
    int replica = 0;
    std::uint64_t seed = 0;
    std::size_t set_size = 0;
    std::vector<std::pair<double, std::size_t>> scales;
    double slope = 0.0;
    double stderr = 0.0;
    bool estimable = false;
    std::string note; // why a replica was excluded
};

struct EstimateReport {
    EstimateConfig config;
    std::vector<ReplicaRecord> records;
    int estimable = 0;
    double mean_slope = 0.0;
    double stderr_of_mean = 0.0;
    std::optional<double> target;
    double tolerance = 0.0;
    bool pass = false;
};

EstimateReport run_estimate(const EstimateConfig& config);

// Band-capped grid suited to the pair-enumerating double-time pipelines.
GridSpec default_double_grid();

// JSON-lines serialization: one record per line plus an aggregate line.
std::string report_jsonl(const EstimateReport& report, const std::string& config_digest);

// CSV tables for the CLI (and the acceptance checks behind them).
std::string kernel_table_csv(const std::vector<double>& xs);
std::string dims_table_csv(int d_max = 13);

// Fast kernel identity suite (the --self-check subset): each entry is a
// named pass/fail.
std::vector<std::pair<std::string, bool>> kernel_self_check();

} // namespace stringlab

#endif
