// SPDX-License-Identifier: Apache-2.0
//
// Subject trajectories: timed waypoints plus a terminal standing dwell.

#pragma once

#include <vector>

#include "rfloc/geometry.hpp"

namespace rfloc {

struct Waypoint {
    Vec2 position = Vec2::Zero();
    double time = 0.0;  // arrival time, seconds
};

struct Trajectory {
    std::vector<Waypoint> waypoints;
    double terminal_dwell = 0.0;  // seconds spent at the final waypoint

    // Arrival times strictly increasing, first >= 0, dwell >= 0, implied
    // speeds <= 2.5 m/s. Throws std::invalid_argument on violation.
    void validate() const;

    double walk_end() const;  // final waypoint arrival time
    double end_time() const;  // walk_end + terminal_dwell
};

// Piecewise-linear interpolation between waypoints; constant at the final
// waypoint during the dwell. Throws std::domain_error outside
// [0, end_time()].
Vec2 position_at(const Trajectory& trajectory, double t);

}  // namespace rfloc
