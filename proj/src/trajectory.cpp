// SPDX-License-Identifier: Apache-2.0

#include "rfloc/trajectory.hpp"

#include <cmath>
#include <stdexcept>

namespace rfloc {

namespace {
constexpr double kMaxWalkingSpeed = 2.5;  // m/s plausibility bound
}

void Trajectory::validate() const {
    if (waypoints.empty()) {
        throw std::invalid_argument("trajectory needs at least one waypoint");
    }
    if (!(waypoints.front().time >= 0.0)) {
        throw std::invalid_argument("first waypoint time must be >= 0");
    }
    if (!(terminal_dwell >= 0.0)) {
        throw std::invalid_argument("terminal dwell must be >= 0");
    }
    for (std::size_t i = 1; i < waypoints.size(); ++i) {
        const double dt = waypoints[i].time - waypoints[i - 1].time;
        if (!(dt > 0.0)) {
            throw std::invalid_argument("waypoint arrival times must be strictly increasing");
        }
        const double speed = (waypoints[i].position - waypoints[i - 1].position).norm() / dt;
        if (speed > kMaxWalkingSpeed) {
            throw std::invalid_argument("implied speed exceeds 2.5 m/s");
        }
    }
}

double Trajectory::walk_end() const {
    return waypoints.empty() ? 0.0 : waypoints.back().time;
}

double Trajectory::end_time() const {
    return walk_end() + terminal_dwell;
}

Vec2 position_at(const Trajectory& trajectory, double t) {
    if (trajectory.waypoints.empty()) {
        throw std::domain_error("empty trajectory");
    }
    if (t < 0.0 || t > trajectory.end_time()) {
        throw std::domain_error("time outside trajectory span");
    }
    const auto& wps = trajectory.waypoints;
    if (t <= wps.front().time) {
        return wps.front().position;
    }
    if (t >= wps.back().time) {
        return wps.back().position;  // terminal dwell
    }
    for (std::size_t i = 1; i < wps.size(); ++i) {
        if (t <= wps[i].time) {
            const double span = wps[i].time - wps[i - 1].time;
            const double frac = (t - wps[i - 1].time) / span;
            return wps[i - 1].position + frac * (wps[i].position - wps[i - 1].position);
        }
    }
    return wps.back().position;
}

}  // namespace rfloc
