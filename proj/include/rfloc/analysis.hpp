// SPDX-License-Identifier: Apache-2.0
//
// Error scoring against ground truth, walking/standing summaries, and the
// scenario x repeat experiment driver with CSV output.

#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rfloc/localizer.hpp"
#include "rfloc/simulator.hpp"

namespace rfloc {

enum class Phase { Walking, Standing };

const char* to_string(Phase p);

struct ErrorSample {
    double timestamp = 0.0;
    double error = 0.0;  // meters, Euclidean distance estimate vs truth
    Phase phase = Phase::Walking;
};

struct PhaseStats {
    double mean = 0.0;
    double stddev = 0.0;  // population standard deviation
    int count = 0;
};

struct RunSummary {
    std::string scenario;
    int run_index = 0;  // 1-based
    std::optional<PhaseStats> walking;
    std::optional<PhaseStats> standing;
};

// Per-tick Euclidean error; phase is walking strictly before walk_end and
// standing from walk_end on. Estimates and truth must align one-to-one on
// timestamps or std::invalid_argument is thrown.
std::vector<ErrorSample> score_run(std::span<const PositionEstimate> estimates,
                                   std::span<const GroundTruthPoint> ground_truth,
                                   double walk_end);

// Per-phase mean and population standard deviation; a phase with no
// samples is marked absent.
RunSummary summarize(std::span<const ErrorSample> samples, std::string scenario,
                     int run_index);

// Error variance inside the first and last `window_s` seconds of the
// standing segment ([walk_end, walk_end + dwell]); the windows are taken
// half-open from opposite ends so they do not overlap when dwell >=
// 2 * window_s.
struct StabilizationWindows {
    double early_variance = 0.0;
    double late_variance = 0.0;
    int early_count = 0;
    int late_count = 0;
};
StabilizationWindows stabilization_variances(std::span<const ErrorSample> samples,
                                             double walk_end, double dwell,
                                             double window_s = 30.0);

struct ExperimentOptions {
    int repeats = 3;
    std::uint64_t base_seed = 1;  // repeat k uses base_seed + k
    double noise_sigma = 2.0;
    double sample_period = 5.0;
    std::size_t window = 3;
    Aggregation agg = Aggregation::MeanDbm;
    LmConfig lm;
    SimOptions sim;
    std::filesystem::path out_dir;  // empty: keep results in memory only
};

// Everything produced for one (scenario, repeat) cell.
struct ExperimentCell {
    std::string scenario;
    int run_index = 0;
    std::uint64_t seed = 0;
    ScenarioRun run;
    std::vector<PositionEstimate> estimates;
    std::vector<ErrorSample> samples;
    RunSummary summary;
};

struct ExperimentResult {
    std::vector<ExperimentCell> cells;       // scenario-major, then run
    std::vector<RunSummary> summaries;       // same order
    std::vector<std::filesystem::path> files;
};

// For each scenario and repeat: generate a trace, solve every tick through
// the windowed tracker, score against ground truth, summarize. When
// out_dir is set, writes one `<scenario>_run<k>.csv` per cell and a
// `summary.csv`, byte-deterministic for equal inputs.
ExperimentResult run_experiment(const SiteConfig& site, const ExperimentOptions& options);

// Shortest round-trip decimal representation (CSV number format).
std::string format_double(double value);

// CSV emitters; column sets are frozen (golden-file tested).
// errors:    timestamp,error_m,phase,converged
// summary:   scenario,run,walking_mean_m,walking_std_m,standing_mean_m,standing_std_m
// estimates: timestamp,device_id,x_m,y_m,residual_norm_m,iterations,anchors_used,converged
std::string errors_csv(std::span<const ErrorSample> samples,
                       std::span<const PositionEstimate> estimates);
std::string summary_csv(std::span<const RunSummary> summaries);
std::string estimates_csv_header();
std::string estimates_csv_row(const std::string& device_id, const PositionEstimate& e);

}  // namespace rfloc
