// SPDX-License-Identifier: Apache-2.0

#include "rfloc/analysis.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace rfloc {

const char* to_string(Phase p) {
    return p == Phase::Walking ? "walking" : "standing";
}

std::vector<ErrorSample> score_run(std::span<const PositionEstimate> estimates,
                                   std::span<const GroundTruthPoint> ground_truth,
                                   double walk_end) {
    if (estimates.size() != ground_truth.size()) {
        throw std::invalid_argument("estimate/ground-truth count mismatch");
    }
    std::vector<ErrorSample> samples;
    samples.reserve(estimates.size());
    for (std::size_t i = 0; i < estimates.size(); ++i) {
        if (estimates[i].timestamp != ground_truth[i].timestamp) {
            throw std::invalid_argument("estimate/ground-truth timestamps misaligned");
        }
        ErrorSample s;
        s.timestamp = estimates[i].timestamp;
        s.error = (estimates[i].position - ground_truth[i].position).norm();
        s.phase = s.timestamp < walk_end ? Phase::Walking : Phase::Standing;
        samples.push_back(s);
    }
    return samples;
}

namespace {

PhaseStats stats_of(const std::vector<double>& values) {
    PhaseStats stats;
    stats.count = static_cast<int>(values.size());
    if (values.empty()) {
        return stats;
    }
    double sum = 0.0;
    for (double v : values) sum += v;
    stats.mean = sum / static_cast<double>(values.size());
    double sq = 0.0;
    for (double v : values) sq += (v - stats.mean) * (v - stats.mean);
    stats.stddev = std::sqrt(sq / static_cast<double>(values.size()));
    return stats;
}

double variance_of(const std::vector<double>& values) {
    const PhaseStats s = stats_of(values);
    return s.stddev * s.stddev;
}

}  // namespace

RunSummary summarize(std::span<const ErrorSample> samples, std::string scenario,
                     int run_index) {
    std::vector<double> walking;
    std::vector<double> standing;
    for (const ErrorSample& s : samples) {
        (s.phase == Phase::Walking ? walking : standing).push_back(s.error);
    }
    RunSummary summary;
    summary.scenario = std::move(scenario);
    summary.run_index = run_index;
    if (!walking.empty()) {
        summary.walking = stats_of(walking);
    }
    if (!standing.empty()) {
        summary.standing = stats_of(standing);
    }
    return summary;
}

StabilizationWindows stabilization_variances(std::span<const ErrorSample> samples,
                                             double walk_end, double dwell,
                                             double window_s) {
    const double end = walk_end + dwell;
    std::vector<double> early;
    std::vector<double> late;
    for (const ErrorSample& s : samples) {
        if (s.phase != Phase::Standing) {
            continue;
        }
        if (s.timestamp >= walk_end && s.timestamp < walk_end + window_s) {
            early.push_back(s.error);
        }
        if (s.timestamp > end - window_s && s.timestamp <= end) {
            late.push_back(s.error);
        }
    }
    StabilizationWindows w;
    w.early_variance = variance_of(early);
    w.late_variance = variance_of(late);
    w.early_count = static_cast<int>(early.size());
    w.late_count = static_cast<int>(late.size());
    return w;
}

std::string format_double(double value) {
    char buf[32];
    const auto result = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, result.ptr);
}

std::string errors_csv(std::span<const ErrorSample> samples,
                       std::span<const PositionEstimate> estimates) {
    if (samples.size() != estimates.size()) {
        throw std::invalid_argument("sample/estimate count mismatch");
    }
    std::string out = "timestamp,error_m,phase,converged\n";
    for (std::size_t i = 0; i < samples.size(); ++i) {
        out += format_double(samples[i].timestamp);
        out += ',';
        out += format_double(samples[i].error);
        out += ',';
        out += to_string(samples[i].phase);
        out += ',';
        out += estimates[i].converged ? '1' : '0';
        out += '\n';
    }
    return out;
}

std::string summary_csv(std::span<const RunSummary> summaries) {
    std::string out =
        "scenario,run,walking_mean_m,walking_std_m,standing_mean_m,standing_std_m\n";
    const auto phase_cells = [](const std::optional<PhaseStats>& stats) {
        if (!stats) {
            return std::string("nan,nan");
        }
        return format_double(stats->mean) + ',' + format_double(stats->stddev);
    };
    for (const RunSummary& s : summaries) {
        out += s.scenario;
        out += ',';
        out += std::to_string(s.run_index);
        out += ',';
        out += phase_cells(s.walking);
        out += ',';
        out += phase_cells(s.standing);
        out += '\n';
    }
    return out;
}

std::string estimates_csv_header() {
    return "timestamp,device_id,x_m,y_m,residual_norm_m,iterations,anchors_used,converged\n";
}

std::string estimates_csv_row(const std::string& device_id, const PositionEstimate& e) {
    std::string row = format_double(e.timestamp);
    row += ',';
    row += device_id;
    row += ',';
    row += format_double(e.position.x());
    row += ',';
    row += format_double(e.position.y());
    row += ',';
    row += format_double(e.residual_norm);
    row += ',';
    row += std::to_string(e.iterations);
    row += ',';
    row += std::to_string(e.anchors_used);
    row += ',';
    row += e.converged ? '1' : '0';
    row += '\n';
    return row;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path.string());
    }
    out << content;
    if (!out) {
        throw std::runtime_error("short write: " + path.string());
    }
}

}  // namespace

ExperimentResult run_experiment(const SiteConfig& site, const ExperimentOptions& options) {
    if (options.repeats < 1) {
        throw std::invalid_argument("repeats must be >= 1");
    }
    site.plan.validate();

    const bool write = !options.out_dir.empty();
    if (write) {
        std::filesystem::create_directories(options.out_dir);
    }

    ExperimentResult result;
    for (const Scenario& scenario : site.scenarios) {
        for (int k = 0; k < options.repeats; ++k) {
            ExperimentCell cell;
            cell.scenario = scenario.name;
            cell.run_index = k + 1;
            cell.seed = options.base_seed + static_cast<std::uint64_t>(k);
            cell.run = generate_trace(site.plan, scenario.trajectory,
                                      options.sample_period, options.noise_sigma,
                                      cell.seed, options.sim);
            cell.run.scenario = scenario.name;

            TrackerOptions tracker_options;
            tracker_options.window = options.window;
            tracker_options.agg = options.agg;
            tracker_options.lm = options.lm;
            StreamSolver solver(site.plan.anchors, tracker_options,
                                [&cell](const std::string&, const PositionEstimate& e) {
                                    cell.estimates.push_back(e);
                                });
            for (const Measurement& m : cell.run.trace) {
                solver.push(m);
            }
            solver.flush();

            cell.samples = score_run(cell.estimates, cell.run.ground_truth,
                                     scenario.trajectory.walk_end());
            cell.summary = summarize(cell.samples, scenario.name, cell.run_index);

            if (write) {
                const auto path = options.out_dir /
                                  (scenario.name + "_run" + std::to_string(cell.run_index) + ".csv");
                write_file(path, errors_csv(cell.samples, cell.estimates));
                result.files.push_back(path);
            }

            result.summaries.push_back(cell.summary);
            result.cells.push_back(std::move(cell));
        }
    }

    if (write) {
        const auto path = options.out_dir / "summary.csv";
        write_file(path, summary_csv(result.summaries));
        result.files.push_back(path);
    }
    return result;
}

}  // namespace rfloc
