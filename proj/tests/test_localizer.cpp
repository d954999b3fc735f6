// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"

#include <cmath>
#include <random>

#include "rfloc/localizer.hpp"

using namespace rfloc;

namespace {

const PathLossParams kRadio{-59.0, 2.0};

Measurement meas(double t, const std::string& anchor, double rssi) {
    return {t, anchor, "phone", rssi};
}

// Fills each anchor's window with the exact RSSI for `truth`.
WindowSet exact_windows(const std::vector<Anchor>& anchors, const Vec2& truth) {
    WindowSet set;
    for (const Anchor& a : anchors) {
        const double d = (truth - a.position).norm();
        push_measurement(set, meas(0.0, a.id, rssi_from_distance(a.params, d)));
    }
    return set;
}

// Independent oracle: exhaustive grid search of the same objective.
Vec2 grid_search_optimum(const std::vector<Vec2>& anchors,
                         const std::vector<double>& distances, Vec2 lo, Vec2 hi,
                         double resolution) {
    Vec2 best = lo;
    double best_objective = std::numeric_limits<double>::infinity();
    for (double y = lo.y(); y <= hi.y() + 1e-12; y += resolution) {
        for (double x = lo.x(); x <= hi.x() + 1e-12; x += resolution) {
            double objective = 0.0;
            for (std::size_t i = 0; i < anchors.size(); ++i) {
                const double r = std::hypot(x - anchors[i].x(), y - anchors[i].y()) - distances[i];
                objective += r * r;
            }
            if (objective < best_objective) {
                best_objective = objective;
                best = Vec2(x, y);
            }
        }
    }
    return best;
}

}  // namespace

TEST_CASE("window push: append, FIFO eviction, first element") {
    RssiWindow w;
    w.values = {-70.0, -72.0};
    w.push(-71.0);
    CHECK(w.values == std::vector<double>{-70.0, -72.0, -71.0});
    w.push(-69.0);
    CHECK(w.values == std::vector<double>{-72.0, -71.0, -69.0});

    RssiWindow fresh;
    fresh.push(-80.0);
    CHECK(fresh.values == std::vector<double>{-80.0});
}

TEST_CASE("push_measurement routes by anchor id and respects capacity") {
    WindowSet set;
    set.capacity = 3;
    for (int i = 0; i < 5; ++i) {
        push_measurement(set, meas(i, "L1", -70.0 - i));
    }
    push_measurement(set, meas(5.0, "L2", -60.0));
    CHECK(set.windows.at("L1").values == std::vector<double>{-72.0, -73.0, -74.0});
    CHECK(set.windows.at("L2").values == std::vector<double>{-60.0});
}

TEST_CASE("window aggregation") {
    RssiWindow w;
    w.values = {-70.0, -72.0, -71.0};
    CHECK(window_rssi(w) == doctest::Approx(-71.0));
    w.values = {-80.0};
    CHECK(window_rssi(w) == doctest::Approx(-80.0));
    w.values = {-60.0, -66.0};
    CHECK(window_rssi(w) == doctest::Approx(-63.0));
    w.values = {-60.0, -80.0, -70.0};
    CHECK(window_rssi(w, Aggregation::MedianDbm) == doctest::Approx(-70.0));
    w.values = {};
    CHECK_THROWS_AS(window_rssi(w), std::runtime_error);
}

TEST_CASE("measurement validation") {
    CHECK_NOTHROW(meas(0.0, "L1", -70.0).validate());
    CHECK_THROWS_AS(meas(0.0, "L1", std::numeric_limits<double>::quiet_NaN()).validate(),
                    std::invalid_argument);
    CHECK_THROWS_AS(meas(-1.0, "L1", -70.0).validate(), std::invalid_argument);
    CHECK_THROWS_AS(Measurement{0.0, "", "phone", -70.0}.validate(), std::invalid_argument);
}

TEST_CASE("solve: exact recovery of (1,1) from three anchors") {
    const std::vector<Anchor> anchors = {
        {"L1", {0.0, 0.0}, kRadio}, {"L2", {4.0, 0.0}, kRadio}, {"L3", {0.0, 3.0}, kRadio}};
    const PositionEstimate estimate =
        solve_position(anchors, exact_windows(anchors, {1.0, 1.0}));
    CHECK(estimate.converged);
    CHECK(estimate.anchors_used == 3);
    CHECK((estimate.position - Vec2(1.0, 1.0)).norm() < 1e-6);
    CHECK(estimate.residual_norm < 1e-6);
}

TEST_CASE("solve: rectangle center from four anchors") {
    const std::vector<Anchor> anchors = {{"L1", {0.0, 0.0}, kRadio},
                                         {"L2", {4.0, 0.0}, kRadio},
                                         {"L3", {0.0, 3.0}, kRadio},
                                         {"L4", {4.0, 3.0}, kRadio}};
    const PositionEstimate estimate =
        solve_position(anchors, exact_windows(anchors, {2.0, 1.5}));
    CHECK((estimate.position - Vec2(2.0, 1.5)).norm() < 1e-6);
    CHECK(estimate.anchors_used == 4);
}

TEST_CASE("solve: +1 dB perturbation matches the grid-search oracle") {
    const std::vector<Anchor> anchors = {
        {"L1", {0.0, 0.0}, kRadio}, {"L2", {4.0, 0.0}, kRadio}, {"L3", {0.0, 3.0}, kRadio}};
    WindowSet set;
    std::vector<Vec2> positions;
    std::vector<double> distances;
    for (std::size_t i = 0; i < anchors.size(); ++i) {
        const double d = (Vec2(1.0, 1.0) - anchors[i].position).norm();
        double rssi = rssi_from_distance(kRadio, d);
        if (i == 0) {
            rssi += 1.0;  // one anchor reads 1 dB strong
        }
        push_measurement(set, meas(0.0, anchors[i].id, rssi));
        positions.push_back(anchors[i].position);
        distances.push_back(distance_from_rssi(kRadio, rssi));
    }

    const Vec2 oracle =
        grid_search_optimum(positions, distances, {0.0, 0.0}, {4.0, 3.0}, 0.01);
    const PositionEstimate estimate = solve_position(anchors, set);
    CHECK(estimate.converged);
    CHECK((estimate.position - oracle).norm() < 0.02);
}

TEST_CASE("translation equivariance of the solved position") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> shift(-20.0, 20.0);
    const std::vector<Vec2> base = {{0.0, 0.0}, {4.0, 0.0}, {1.0, 3.5}, {3.0, 2.0}};
    const Vec2 truth{1.4, 1.1};

    for (int trial = 0; trial < 10; ++trial) {
        const Vec2 offset{shift(rng), shift(rng)};
        std::vector<Anchor> anchors;
        std::vector<Anchor> moved;
        for (std::size_t i = 0; i < base.size(); ++i) {
            const std::string id = "A" + std::to_string(i);
            anchors.push_back({id, base[i], kRadio});
            moved.push_back({id, base[i] + offset, kRadio});
        }
        const PositionEstimate original =
            solve_position(anchors, exact_windows(anchors, truth));
        const PositionEstimate shifted =
            solve_position(moved, exact_windows(moved, truth + offset));
        CHECK((shifted.position - (original.position + offset)).norm() < 1e-6);
    }
}

TEST_CASE("rotation equivariance of the solved position") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * 3.14159265358979323846);
    const std::vector<Vec2> base = {{0.0, 0.0}, {4.0, 0.0}, {1.0, 3.5}, {3.0, 2.0}};
    const Vec2 truth{1.4, 1.1};
    const Vec2 pivot{2.0, 1.5};

    for (int trial = 0; trial < 10; ++trial) {
        const double a = angle(rng);
        Eigen::Rotation2Dd rot(a);
        const auto rotate = [&](const Vec2& p) -> Vec2 { return pivot + rot * (p - pivot); };

        std::vector<Anchor> anchors;
        std::vector<Anchor> turned;
        for (std::size_t i = 0; i < base.size(); ++i) {
            const std::string id = "A" + std::to_string(i);
            anchors.push_back({id, base[i], kRadio});
            turned.push_back({id, rotate(base[i]), kRadio});
        }
        const PositionEstimate original =
            solve_position(anchors, exact_windows(anchors, truth));
        const PositionEstimate rotated =
            solve_position(turned, exact_windows(turned, rotate(truth)));
        CHECK((rotated.position - rotate(original.position)).norm() < 1e-6);
    }
}

TEST_CASE("collinear anchors converge to one of the two mirror optima") {
    const std::vector<Anchor> anchors = {
        {"L1", {0.0, 0.0}, kRadio}, {"L2", {2.0, 0.0}, kRadio}, {"L3", {5.0, 0.0}, kRadio}};
    const Vec2 truth{1.0, 1.0};  // mirror twin is (1, -1)
    const PositionEstimate estimate =
        solve_position(anchors, exact_windows(anchors, truth), Vec2{1.2, 0.4});
    CHECK(estimate.residual_norm * estimate.residual_norm < 1e-10);
    CHECK(estimate.position.x() == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(std::abs(estimate.position.y()) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("insufficient anchors and duplicate positions are rejected") {
    const std::vector<Anchor> two = {{"L1", {0.0, 0.0}, kRadio}, {"L2", {4.0, 0.0}, kRadio}};
    CHECK_THROWS_AS(solve_position(two, exact_windows(two, {1.0, 1.0})),
                    InsufficientAnchorsError);

    const std::vector<Anchor> dup = {{"L1", {0.0, 0.0}, kRadio},
                                     {"L2", {0.0, 0.0}, kRadio},
                                     {"L3", {4.0, 0.0}, kRadio}};
    WindowSet set;
    push_measurement(set, meas(0.0, "L1", -70.0));
    push_measurement(set, meas(0.0, "L2", -70.0));
    push_measurement(set, meas(0.0, "L3", -70.0));
    CHECK_THROWS_AS(solve_position(dup, set), std::invalid_argument);

    // Three anchors configured, only two with data.
    const std::vector<Anchor> three = {{"L1", {0.0, 0.0}, kRadio},
                                       {"L2", {4.0, 0.0}, kRadio},
                                       {"L3", {0.0, 3.0}, kRadio}};
    WindowSet partial;
    push_measurement(partial, meas(0.0, "L1", -70.0));
    push_measurement(partial, meas(0.0, "L2", -70.0));
    CHECK_THROWS_AS(solve_position(three, partial), InsufficientAnchorsError);
}

TEST_CASE("tracker: warm start keeps timeline continuous and stamps timestamps") {
    const std::vector<Anchor> anchors = {
        {"L1", {0.0, 0.0}, kRadio}, {"L2", {4.0, 0.0}, kRadio}, {"L3", {0.0, 3.0}, kRadio}};
    Tracker tracker(anchors);
    for (const Anchor& a : anchors) {
        const double d = (Vec2(1.0, 1.0) - a.position).norm();
        tracker.push(meas(0.0, a.id, rssi_from_distance(kRadio, d)));
    }
    CHECK(tracker.anchors_with_data("phone") == 3);
    const PositionEstimate first = tracker.solve("phone", 0.0);
    CHECK(first.timestamp == 0.0);
    CHECK((first.position - Vec2(1.0, 1.0)).norm() < 1e-6);

    for (const Anchor& a : anchors) {
        const double d = (Vec2(1.2, 1.1) - a.position).norm();
        tracker.push(meas(5.0, a.id, rssi_from_distance(kRadio, d)));
    }
    const PositionEstimate second = tracker.solve("phone", 5.0);
    CHECK(second.timestamp == 5.0);
    // Window now mixes two positions; estimate sits between them.
    CHECK(second.position.x() > 0.9);
    CHECK(second.position.x() < 1.3);

    CHECK_THROWS_AS(tracker.solve("unknown-device", 0.0), InsufficientAnchorsError);
}

TEST_CASE("stream solver groups ticks per device and flushes the tail") {
    const std::vector<Anchor> anchors = {
        {"L1", {0.0, 0.0}, kRadio}, {"L2", {4.0, 0.0}, kRadio}, {"L3", {0.0, 3.0}, kRadio}};
    std::vector<PositionEstimate> estimates;
    StreamSolver solver(anchors, {},
                        [&](const std::string&, const PositionEstimate& e) {
                            estimates.push_back(e);
                        });
    for (double t : {0.0, 5.0, 10.0}) {
        for (const Anchor& a : anchors) {
            const double d = (Vec2(1.0, 1.0) - a.position).norm();
            solver.push(meas(t, a.id, rssi_from_distance(kRadio, d)));
        }
    }
    CHECK(estimates.size() == 2);  // third tick still open
    solver.flush();
    CHECK(estimates.size() == 3);
    CHECK(estimates[0].timestamp == 0.0);
    CHECK(estimates[1].timestamp == 5.0);
    CHECK(estimates[2].timestamp == 10.0);
    CHECK(solver.skipped_ticks() == 0);
}
