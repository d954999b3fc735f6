// SPDX-License-Identifier: Apache-2.0
//
// RSSI windows -> distances -> 2D trilateration via the LM solver.
// Mirrors the live pipeline: one window of the last three readings per
// anchor, a solve per sample tick, warm-started per device.

#pragma once

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rfloc/geometry.hpp"
#include "rfloc/lm.hpp"
#include "rfloc/pathloss.hpp"

namespace rfloc {

struct Anchor {
    std::string id;
    Vec2 position = Vec2::Zero();
    PathLossParams params;
};

struct Measurement {
    double timestamp = 0.0;  // seconds, monotonic within a trace
    std::string anchor_id;
    std::string device_id;
    double rssi = 0.0;  // dBm

    // Throws std::invalid_argument on non-finite rssi, negative timestamp
    // or empty ids.
    void validate() const;
};

// Most recent readings for one anchor, oldest first, strict FIFO eviction.
struct RssiWindow {
    std::string anchor_id;
    std::vector<double> values;
    std::size_t capacity = 3;

    void push(double rssi);
    bool empty() const { return values.empty(); }
};

// Per-anchor windows for a single device.
struct WindowSet {
    std::size_t capacity = 3;
    std::map<std::string, RssiWindow> windows;
};

enum class Aggregation {
    MeanDbm,    // arithmetic mean of the stored dBm values (default)
    MedianDbm,
};

struct PositionEstimate {
    Vec2 position = Vec2::Zero();
    double timestamp = 0.0;
    double residual_norm = 0.0;  // meters; Euclidean norm of the residual vector
    int iterations = 0;
    int anchors_used = 0;
    bool converged = false;
};

struct InsufficientAnchorsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Appends m.rssi to the window for m.anchor_id, evicting the oldest
// value once past capacity. Creates the window on first sight.
void push_measurement(WindowSet& set, const Measurement& m);

// Aggregated dBm value of a window. Throws std::runtime_error when empty.
double window_rssi(const RssiWindow& window, Aggregation agg = Aggregation::MeanDbm);

// Distance-space trilateration residuals r_i(P) = ||P - a_i|| - d_i and
// the matching analytic Jacobian. Shared by the solver and the tests.
ResidualFn trilateration_residual(std::vector<Vec2> anchor_positions,
                                  std::vector<double> distances);
JacobianFn trilateration_jacobian(std::vector<Vec2> anchor_positions);

// Converts each non-empty window to a distance via the anchor's path-loss
// params and minimizes the residual system. The initial guess defaults to
// the centroid of the participating anchors. Fewer than three anchors with
// data throws InsufficientAnchorsError; solver non-convergence is reported
// through the returned estimate, not suppressed.
PositionEstimate solve_position(std::span<const Anchor> anchors,
                                const WindowSet& windows,
                                std::optional<Vec2> initial_guess = std::nullopt,
                                const LmConfig& config = {},
                                Aggregation agg = Aggregation::MeanDbm);

struct TrackerOptions {
    std::size_t window = 3;
    Aggregation agg = Aggregation::MeanDbm;
    LmConfig lm;
    bool warm_start = true;
};

// Per-device window state plus warm-start bookkeeping. Single writer per
// device; solving takes a snapshot of the windows and is otherwise pure.
class Tracker {
public:
    Tracker(std::vector<Anchor> anchors, TrackerOptions options = {});

    void push(const Measurement& m);

    // Solves the device's current windows; stamps the estimate with
    // `timestamp` and records it as the next warm start.
    PositionEstimate solve(const std::string& device_id, double timestamp);

    // Number of anchors with at least one reading for the device.
    int anchors_with_data(const std::string& device_id) const;

    const std::vector<Anchor>& anchors() const { return anchors_; }

private:
    struct DeviceState {
        WindowSet windows;
        std::optional<Vec2> last_position;
    };

    std::vector<Anchor> anchors_;
    TrackerOptions options_;
    std::map<std::string, DeviceState> devices_;
};

// Groups a timestamp-ordered measurement stream into ticks and emits one
// estimate per (device, tick) once the next tick begins. flush() closes
// the final tick.
class StreamSolver {
public:
    using Emit = std::function<void(const std::string& device_id, const PositionEstimate&)>;

    StreamSolver(std::vector<Anchor> anchors, TrackerOptions options, Emit emit);

    void push(const Measurement& m);
    void flush();

    // Ticks dropped because fewer than three anchors had data.
    int skipped_ticks() const { return skipped_; }

private:
    void close_tick(const std::string& device_id, double timestamp);

    Tracker tracker_;
    Emit emit_;
    std::map<std::string, std::optional<double>> open_tick_;
    int skipped_ = 0;
};

}  // namespace rfloc
