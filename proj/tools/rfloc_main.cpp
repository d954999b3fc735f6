// SPDX-License-Identifier: Apache-2.0
//
// rfloc CLI: simulate traces, solve them, replay them through the ingest
// pipeline, run the full experiment grid, or serve a live listener.

#include <atomic>
#include <chrono>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <thread>

#include "CLI11.hpp"

#include "rfloc/analysis.hpp"
#include "rfloc/config.hpp"
#include "rfloc/ingest.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNotConverged = 3;

std::atomic<bool> g_interrupted{false};

void on_sigint(int) {
    g_interrupted.store(true);
}

rfloc::SiteConfig load_site(const std::string& config_arg) {
    if (config_arg.empty() || config_arg == "builtin") {
        return rfloc::builtin_scenarios();
    }
    return rfloc::load_site_config(config_arg);
}

rfloc::Aggregation parse_agg(const std::string& name) {
    if (name == "mean") return rfloc::Aggregation::MeanDbm;
    if (name == "median") return rfloc::Aggregation::MedianDbm;
    throw CLI::ValidationError("--agg must be 'mean' or 'median'");
}

struct SolveOutput {
    std::ostream* stream = &std::cout;
    std::ofstream file;
    bool any_not_converged = false;

    void open(const std::filesystem::path& dir, const std::string& name) {
        std::filesystem::create_directories(dir);
        file.open(dir / name, std::ios::binary);
        if (!file) {
            throw std::runtime_error("cannot open output file in " + dir.string());
        }
        stream = &file;
    }
};

// Runs a decoded measurement stream through the windowed tracker and
// emits estimate CSV rows.
class CsvSolveSink {
public:
    CsvSolveSink(std::vector<rfloc::Anchor> anchors, rfloc::TrackerOptions options,
                 SolveOutput& out)
        : out_(out),
          solver_(std::move(anchors), options,
                  [this](const std::string& device, const rfloc::PositionEstimate& e) {
                      if (!e.converged) {
                          out_.any_not_converged = true;
                      }
                      *out_.stream << rfloc::estimates_csv_row(device, e);
                      out_.stream->flush();
                  }) {
        *out_.stream << rfloc::estimates_csv_header();
    }

    void push(const rfloc::MeasurementRecord& record) {
        solver_.push(rfloc::to_measurement(record));
    }

    void flush() { solver_.flush(); }

    int skipped_ticks() const { return solver_.skipped_ticks(); }

private:
    SolveOutput& out_;
    rfloc::StreamSolver solver_;
};

int run_simulate(const std::string& config_arg, const std::string& scenario_name,
                 std::uint64_t seed, double sigma, double period,
                 const std::string& out_dir, const rfloc::SimOptions& sim) {
    const rfloc::SiteConfig site = load_site(config_arg);
    std::filesystem::create_directories(out_dir);

    bool found = false;
    for (const rfloc::Scenario& scenario : site.scenarios) {
        if (!scenario_name.empty() && scenario.name != scenario_name) {
            continue;
        }
        found = true;
        const rfloc::ScenarioRun run = rfloc::generate_trace(
            site.plan, scenario.trajectory, period, sigma, seed, sim);
        const auto path =
            std::filesystem::path(out_dir) / (scenario.name + ".trace.jsonl");
        rfloc::write_trace(path, run.trace);
        std::cout << path.string() << " (" << run.trace.size() << " records)\n";
    }
    if (!found) {
        std::cerr << "no scenario named '" << scenario_name << "' in config\n";
        return kExitData;
    }
    return kExitOk;
}

int run_solve_or_replay(const std::string& trace_file, const std::string& config_arg,
                        std::size_t window, const std::string& agg_name, double speed,
                        const std::string& out_dir, bool strict, bool paced) {
    const rfloc::SiteConfig site = load_site(config_arg);

    SolveOutput out;
    if (!out_dir.empty()) {
        out.open(out_dir,
                 std::filesystem::path(trace_file).stem().string() + ".estimates.csv");
    }

    rfloc::TrackerOptions options;
    options.window = window;
    options.agg = parse_agg(agg_name);
    CsvSolveSink sink(site.plan.anchors, options, out);

    const double effective_speed =
        paced ? speed : std::numeric_limits<double>::infinity();
    const rfloc::ReplaySummary summary = rfloc::replay_trace(
        trace_file, effective_speed,
        [&sink](const rfloc::MeasurementRecord& r) { sink.push(r); });
    sink.flush();

    std::cerr << summary.records << " records, " << summary.malformed
              << " malformed";
    if (sink.skipped_ticks() > 0) {
        std::cerr << ", " << sink.skipped_ticks() << " ticks skipped (<3 anchors)";
    }
    std::cerr << "\n";

    if (strict && (sink.skipped_ticks() > 0 || summary.malformed > 0)) {
        return kExitData;
    }
    if (strict && out.any_not_converged) {
        return kExitNotConverged;
    }
    return kExitOk;
}

int run_experiment_cmd(const std::string& config_arg, int repeats, std::uint64_t seed,
                       double sigma, std::size_t window, const std::string& agg_name,
                       const std::string& out_dir, const rfloc::SimOptions& sim,
                       bool strict) {
    const rfloc::SiteConfig site = load_site(config_arg);

    rfloc::ExperimentOptions options;
    options.repeats = repeats;
    options.base_seed = seed;
    options.noise_sigma = sigma;
    options.window = window;
    options.agg = parse_agg(agg_name);
    options.sim = sim;
    options.out_dir = out_dir;

    const rfloc::ExperimentResult result = rfloc::run_experiment(site, options);
    for (const auto& file : result.files) {
        std::cout << file.string() << "\n";
    }
    if (strict) {
        for (const rfloc::ExperimentCell& cell : result.cells) {
            for (const rfloc::PositionEstimate& e : cell.estimates) {
                if (!e.converged) {
                    std::cerr << "non-converged tick in " << cell.scenario << " run "
                              << cell.run_index << " at t=" << e.timestamp << "\n";
                    return kExitNotConverged;
                }
            }
        }
    }
    return kExitOk;
}

int run_serve(const std::string& config_arg, const std::string& bind,
              std::uint16_t port, std::size_t window, const std::string& agg_name,
              const std::string& out_dir) {
    const rfloc::SiteConfig site = load_site(config_arg);

    SolveOutput out;
    if (!out_dir.empty()) {
        out.open(out_dir, "live.estimates.csv");
    }

    rfloc::TrackerOptions options;
    options.window = window;
    options.agg = parse_agg(agg_name);
    CsvSolveSink sink(site.plan.anchors, options, out);

    rfloc::IngestServer server(
        {bind, port},
        [&sink](const rfloc::MeasurementRecord& r) { sink.push(r); });
    server.start();
    std::cerr << "listening on " << bind << ":" << server.port() << "\n";

    std::signal(SIGINT, on_sigint);
    std::signal(SIGTERM, on_sigint);
    while (!g_interrupted.load()) {
        std::this_thread::sleep_for(std::chrono::milliseconds(100));
    }
    server.stop();
    sink.flush();
    std::cerr << "accepted " << server.accepted_count() << " records, "
              << server.malformed_count() << " malformed\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RSSI indoor-positioning toolkit: simulation, trilateration, analysis"};
    app.require_subcommand(1);

    std::string config_arg = "builtin";
    app.add_option("--config", config_arg,
                   "Site config JSON path, or 'builtin' for the bundled plan")
        ->capture_default_str();

    // Shared knobs; each subcommand reads the ones it uses.
    std::uint64_t seed = 1;
    double sigma = 2.0;
    double period = 5.0;
    std::size_t window = 3;
    std::string agg_name = "mean";
    std::string out_dir;
    bool strict = false;
    rfloc::SimOptions sim;

    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic RSSI trace");
    std::string scenario_name;
    simulate->add_option("--scenario", scenario_name, "Scenario name (default: all)");
    simulate->add_option("--seed", seed, "Noise seed")->capture_default_str();
    simulate->add_option("--sigma", sigma, "Shadowing noise stddev (dB)")->capture_default_str();
    simulate->add_option("--period", period, "Sample period (s)")->capture_default_str();
    simulate->add_option("--out", out_dir, "Output directory")->capture_default_str();
    simulate->add_option("--anchor-height", sim.anchor_height_m, "Anchor mount height (m)")
        ->capture_default_str();
    simulate->add_option("--device-height", sim.device_height_m, "Device carry height (m)")
        ->capture_default_str();
    simulate->add_option("--device", sim.device_id, "Device id in generated records")
        ->capture_default_str();

    auto* solve = app.add_subcommand("solve", "Solve a trace file into position estimates");
    std::string trace_file;
    solve->add_option("--trace", trace_file, "Trace file (line protocol)")->required();
    solve->add_option("--window", window, "RSSI window size")->capture_default_str();
    solve->add_option("--agg", agg_name, "Window aggregation: mean|median")->capture_default_str();
    solve->add_option("--out", out_dir, "Output directory (default: stdout)");
    solve->add_flag("--strict", strict, "Exit 3 on any non-converged tick");

    auto* replay = app.add_subcommand("replay", "Replay a trace with pacing into the live solver");
    double speed = std::numeric_limits<double>::infinity();
    replay->add_option("--trace", trace_file, "Trace file (line protocol)")->required();
    replay->add_option("--speed", speed, "Pacing speed multiplier (default: unpaced)");
    replay->add_option("--window", window, "RSSI window size")->capture_default_str();
    replay->add_option("--agg", agg_name, "Window aggregation: mean|median")->capture_default_str();
    replay->add_option("--out", out_dir, "Output directory (default: stdout)");
    replay->add_flag("--strict", strict, "Exit 3 on any non-converged tick");

    auto* experiment = app.add_subcommand(
        "experiment", "Run the scenario x repeat grid and emit error/summary CSVs");
    int repeats = 3;
    experiment->add_option("--repeats", repeats, "Repeats per scenario")->capture_default_str();
    experiment->add_option("--seed", seed, "Base seed; repeat k uses seed+k")->capture_default_str();
    experiment->add_option("--sigma", sigma, "Shadowing noise stddev (dB)")->capture_default_str();
    experiment->add_option("--window", window, "RSSI window size")->capture_default_str();
    experiment->add_option("--agg", agg_name, "Window aggregation: mean|median")->capture_default_str();
    experiment->add_option("--out", out_dir, "Output directory")->required();
    experiment->add_option("--anchor-height", sim.anchor_height_m, "Anchor mount height (m)")
        ->capture_default_str();
    experiment->add_option("--device-height", sim.device_height_m, "Device carry height (m)")
        ->capture_default_str();
    experiment->add_flag("--strict", strict, "Exit 3 on any non-converged tick");

    auto* serve = app.add_subcommand("serve", "Listen for measurement streams and solve live");
    std::string bind = "0.0.0.0";
    std::uint16_t port = 7700;
    serve->add_option("--bind", bind, "Bind address")->capture_default_str();
    serve->add_option("--port", port, "TCP port (0 = ephemeral)")->capture_default_str();
    serve->add_option("--window", window, "RSSI window size")->capture_default_str();
    serve->add_option("--agg", agg_name, "Window aggregation: mean|median")->capture_default_str();
    serve->add_option("--out", out_dir, "Output directory (default: stdout only)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (simulate->parsed()) {
            if (out_dir.empty()) out_dir = ".";
            return run_simulate(config_arg, scenario_name, seed, sigma, period, out_dir, sim);
        }
        if (solve->parsed()) {
            return run_solve_or_replay(trace_file, config_arg, window, agg_name, 0.0,
                                       out_dir, strict, /*paced=*/false);
        }
        if (replay->parsed()) {
            return run_solve_or_replay(trace_file, config_arg, window, agg_name, speed,
                                       out_dir, strict, /*paced=*/true);
        }
        if (experiment->parsed()) {
            return run_experiment_cmd(config_arg, repeats, seed, sigma, window, agg_name,
                                      out_dir, sim, strict);
        }
        if (serve->parsed()) {
            return run_serve(config_arg, bind, port, window, agg_name, out_dir);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
