// SPDX-License-Identifier: Apache-2.0

#include "rfloc/localizer.hpp"

#include <algorithm>
#include <cmath>

namespace rfloc {

void Measurement::validate() const {
    if (!std::isfinite(rssi)) {
        throw std::invalid_argument("measurement rssi must be finite");
    }
    if (!(timestamp >= 0.0)) {
        throw std::invalid_argument("measurement timestamp must be non-negative");
    }
    if (anchor_id.empty() || device_id.empty()) {
        throw std::invalid_argument("measurement ids must be non-empty");
    }
}

void RssiWindow::push(double rssi) {
    values.push_back(rssi);
    if (values.size() > capacity) {
        values.erase(values.begin(), values.begin() + (values.size() - capacity));
    }
}

void push_measurement(WindowSet& set, const Measurement& m) {
    m.validate();
    auto [it, inserted] = set.windows.try_emplace(m.anchor_id);
    if (inserted) {
        it->second.anchor_id = m.anchor_id;
        it->second.capacity = set.capacity;
    }
    it->second.push(m.rssi);
}

double window_rssi(const RssiWindow& window, Aggregation agg) {
    if (window.values.empty()) {
        throw std::runtime_error("insufficient data: empty RSSI window");
    }
    switch (agg) {
        case Aggregation::MeanDbm: {
            double sum = 0.0;
            for (double v : window.values) sum += v;
            return sum / static_cast<double>(window.values.size());
        }
        case Aggregation::MedianDbm: {
            std::vector<double> sorted = window.values;
            std::sort(sorted.begin(), sorted.end());
            const std::size_t n = sorted.size();
            return (n % 2 == 1) ? sorted[n / 2]
                                : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
        }
    }
    throw std::logic_error("unknown aggregation");
}

ResidualFn trilateration_residual(std::vector<Vec2> anchor_positions,
                                  std::vector<double> distances) {
    if (anchor_positions.size() != distances.size()) {
        throw std::invalid_argument("anchor/distance count mismatch");
    }
    return [anchors = std::move(anchor_positions),
            dists = std::move(distances)](const Eigen::VectorXd& p) {
        Eigen::VectorXd r(static_cast<Eigen::Index>(anchors.size()));
        const Vec2 pos(p(0), p(1));
        for (std::size_t i = 0; i < anchors.size(); ++i) {
            r(static_cast<Eigen::Index>(i)) = (pos - anchors[i]).norm() - dists[i];
        }
        return r;
    };
}

JacobianFn trilateration_jacobian(std::vector<Vec2> anchor_positions) {
    return [anchors = std::move(anchor_positions)](const Eigen::VectorXd& p) {
        Eigen::MatrixXd j(static_cast<Eigen::Index>(anchors.size()), 2);
        const Vec2 pos(p(0), p(1));
        for (std::size_t i = 0; i < anchors.size(); ++i) {
            Vec2 diff = pos - anchors[i];
            // Guard the non-differentiable point at an anchor.
            const double norm = std::max(diff.norm(), 1e-12);
            j(static_cast<Eigen::Index>(i), 0) = diff.x() / norm;
            j(static_cast<Eigen::Index>(i), 1) = diff.y() / norm;
        }
        return j;
    };
}

PositionEstimate solve_position(std::span<const Anchor> anchors,
                                const WindowSet& windows,
                                std::optional<Vec2> initial_guess,
                                const LmConfig& config, Aggregation agg) {
    std::vector<Vec2> positions;
    std::vector<double> distances;
    positions.reserve(anchors.size());
    distances.reserve(anchors.size());

    for (const Anchor& anchor : anchors) {
        const auto it = windows.windows.find(anchor.id);
        if (it == windows.windows.end() || it->second.empty()) {
            continue;
        }
        anchor.params.validate();
        const double rssi = window_rssi(it->second, agg);
        positions.push_back(anchor.position);
        distances.push_back(distance_from_rssi(anchor.params, rssi));
    }

    if (positions.size() < 3) {
        throw InsufficientAnchorsError("at least three anchors with data are required");
    }
    for (std::size_t i = 0; i < positions.size(); ++i) {
        for (std::size_t j = i + 1; j < positions.size(); ++j) {
            if (positions[i] == positions[j]) {
                throw std::invalid_argument("anchor positions must be pairwise distinct");
            }
        }
    }

    Vec2 start = Vec2::Zero();
    if (initial_guess) {
        start = *initial_guess;
    } else {
        for (const Vec2& p : positions) start += p;
        start /= static_cast<double>(positions.size());
    }

    const LmResult lm = minimize(trilateration_residual(positions, distances),
                                 trilateration_jacobian(positions),
                                 Eigen::Vector2d(start), config);

    PositionEstimate estimate;
    estimate.position = Vec2(lm.params(0), lm.params(1));
    estimate.residual_norm = std::sqrt(lm.final_objective);
    estimate.iterations = lm.iterations;
    estimate.anchors_used = static_cast<int>(positions.size());
    estimate.converged = lm.converged;
    return estimate;
}

Tracker::Tracker(std::vector<Anchor> anchors, TrackerOptions options)
    : anchors_(std::move(anchors)), options_(options) {
    for (const Anchor& a : anchors_) {
        a.params.validate();
    }
}

void Tracker::push(const Measurement& m) {
    auto [it, inserted] = devices_.try_emplace(m.device_id);
    if (inserted) {
        it->second.windows.capacity = options_.window;
    }
    push_measurement(it->second.windows, m);
}

int Tracker::anchors_with_data(const std::string& device_id) const {
    const auto dev = devices_.find(device_id);
    if (dev == devices_.end()) {
        return 0;
    }
    int n = 0;
    for (const Anchor& a : anchors_) {
        const auto w = dev->second.windows.windows.find(a.id);
        if (w != dev->second.windows.windows.end() && !w->second.empty()) {
            ++n;
        }
    }
    return n;
}

PositionEstimate Tracker::solve(const std::string& device_id, double timestamp) {
    auto dev = devices_.find(device_id);
    if (dev == devices_.end()) {
        throw InsufficientAnchorsError("no measurements for device " + device_id);
    }
    std::optional<Vec2> start;
    if (options_.warm_start) {
        start = dev->second.last_position;
    }
    PositionEstimate estimate =
        solve_position(anchors_, dev->second.windows, start, options_.lm, options_.agg);
    estimate.timestamp = timestamp;
    dev->second.last_position = estimate.position;
    return estimate;
}

StreamSolver::StreamSolver(std::vector<Anchor> anchors, TrackerOptions options, Emit emit)
    : tracker_(std::move(anchors), options), emit_(std::move(emit)) {}

void StreamSolver::close_tick(const std::string& device_id, double timestamp) {
    if (tracker_.anchors_with_data(device_id) < 3) {
        ++skipped_;
        return;
    }
    emit_(device_id, tracker_.solve(device_id, timestamp));
}

void StreamSolver::push(const Measurement& m) {
    auto [it, inserted] = open_tick_.try_emplace(m.device_id, std::nullopt);
    if (it->second && *it->second != m.timestamp) {
        close_tick(m.device_id, *it->second);
    }
    it->second = m.timestamp;
    tracker_.push(m);
}

void StreamSolver::flush() {
    for (auto& [device, tick] : open_tick_) {
        if (tick) {
            close_tick(device, *tick);
            tick.reset();
        }
    }
}

}  // namespace rfloc
