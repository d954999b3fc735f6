// SPDX-License-Identifier: Apache-2.0

#include "rfloc/simulator.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rfloc/pathloss.hpp"

namespace rfloc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Uniform in (0, 1), never hitting either endpoint.
double to_unit(std::uint64_t x) {
    return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

double shadowing_noise_unit(std::uint64_t seed, std::uint64_t tick_index,
                            std::string_view anchor_id) {
    const std::uint64_t key =
        splitmix64(seed ^ splitmix64(tick_index ^ splitmix64(fnv1a64(anchor_id))));
    const std::uint64_t r1 = splitmix64(key);
    const std::uint64_t r2 = splitmix64(r1);
    const double u1 = to_unit(r1);
    const double u2 = to_unit(r2);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

ScenarioRun generate_trace(const FloorPlan& plan, const Trajectory& trajectory,
                           double sample_period, double noise_sigma,
                           std::uint64_t seed, const SimOptions& options) {
    plan.validate();
    trajectory.validate();
    options.attenuation.validate();
    if (!(sample_period > 0.0)) {
        throw std::invalid_argument("sample period must be > 0");
    }
    if (!(noise_sigma >= 0.0)) {
        throw std::invalid_argument("noise sigma must be >= 0");
    }
    if (plan.anchors.empty()) {
        throw std::invalid_argument("plan has no anchors");
    }

    const double height_gap = options.anchor_height_m - options.device_height_m;
    const double end = trajectory.end_time();

    ScenarioRun run;
    run.trajectory = trajectory;
    run.sample_period = sample_period;
    run.seed = seed;

    for (std::uint64_t tick = 0;; ++tick) {
        const double t = static_cast<double>(tick) * sample_period;
        if (t > end + 1e-9) {
            break;
        }
        const Vec2 pos = position_at(trajectory, std::min(t, end));
        run.ground_truth.push_back({t, pos});

        for (const Anchor& anchor : plan.anchors) {
            const double planar = (pos - anchor.position).norm();
            double dist = std::hypot(planar, height_gap);
            if (dist < options.min_distance_m) {
                dist = options.min_distance_m;
            }
            double rssi = rssi_from_distance(anchor.params, dist);
            rssi -= wall_attenuation(plan, pos, anchor.position, options.attenuation);
            rssi -= noise_sigma * shadowing_noise_unit(seed, tick, anchor.id);
            run.trace.push_back({t, anchor.id, options.device_id, rssi});
        }
    }
    return run;
}

SiteConfig builtin_scenarios() {
    SiteConfig site;

    const PathLossParams radio{-59.0, 3.0};

    site.plan.rooms = {
        {"bedroom", {{0.0, 0.0}, {4.0, 0.0}, {4.0, 4.0}, {0.0, 4.0}}},
        {"hallway", {{4.0, 0.0}, {7.0, 0.0}, {7.0, 4.0}, {4.0, 4.0}}},
        {"office", {{7.0, 0.0}, {10.0, 0.0}, {10.0, 4.0}, {7.0, 4.0}}},
    };

    const double ext = 0.35;  // exterior brick
    const double in = 0.17;   // interior cement
    site.plan.walls = {
        {{0.0, 0.0}, {10.0, 0.0}, Material::Brick, ext},
        {{10.0, 0.0}, {10.0, 4.0}, Material::Brick, ext},
        {{10.0, 4.0}, {0.0, 4.0}, Material::Brick, ext},
        {{0.0, 4.0}, {0.0, 0.0}, Material::Brick, ext},
        // Interior partitions, each with a 1 m doorway at y in [1.2, 2.2].
        {{4.0, 0.0}, {4.0, 1.2}, Material::Cement, in},
        {{4.0, 2.2}, {4.0, 4.0}, Material::Cement, in},
        {{7.0, 0.0}, {7.0, 1.2}, Material::Cement, in},
        {{7.0, 2.2}, {7.0, 4.0}, Material::Cement, in},
    };

    site.plan.anchors = {
        {"L1", {2.0, 2.0}, radio},
        {"L2", {5.5, 2.0}, radio},
        {"L3", {8.5, 2.0}, radio},
    };

    const Vec2 bed{1.0, 3.2};
    const Vec2 door1{4.0, 1.7};
    const Vec2 door2{7.0, 1.7};
    const Vec2 closet{6.5, 3.4};
    const Vec2 desk_chair{8.8, 1.0};
    const double dwell = 60.0;

    // Stop-and-go timing: the monitored person moves slowly enough that
    // each walking phase spans several 5 s sample ticks.
    site.scenarios = {
        {"bed_to_closet",
         {{{bed, 0.0}, {{2.6, 2.4}, 12.0}, {door1, 24.0}, {{4.9, 2.1}, 35.0}, {closet, 45.0}},
          dwell}},
        {"closet_to_bed",
         {{{closet, 0.0}, {{4.9, 2.1}, 11.0}, {door1, 21.0}, {{2.6, 2.4}, 33.0}, {bed, 45.0}},
          dwell}},
        {"bed_to_desk",
         {{{bed, 0.0}, {{2.6, 2.4}, 12.0}, {door1, 24.0}, {{5.5, 1.6}, 36.0}, {door2, 48.0},
           {desk_chair, 60.0}},
          dwell}},
    };

    return site;
}

}  // namespace rfloc
