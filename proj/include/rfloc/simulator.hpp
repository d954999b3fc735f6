// SPDX-License-Identifier: Apache-2.0
//
// Deterministic RSSI trace generator: forward path-loss model plus wall
// absorption and lognormal shadowing noise over a floor plan.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rfloc/floorplan.hpp"
#include "rfloc/localizer.hpp"
#include "rfloc/trajectory.hpp"

namespace rfloc {

struct Scenario {
    std::string name;
    Trajectory trajectory;
};

// A floor plan plus the scenarios that play out on it; what the JSON
// configuration file holds.
struct SiteConfig {
    FloorPlan plan;
    std::vector<Scenario> scenarios;
};

struct SimOptions {
    // Anchors are ceiling-mounted while the device rides at body height;
    // traces carry the true 3D distance although solving stays 2D.
    double anchor_height_m = 2.6;
    double device_height_m = 1.0;
    double min_distance_m = 0.1;  // floor applied when subject meets anchor
    std::string device_id = "phone";
    AttenuationTable attenuation;
};

struct GroundTruthPoint {
    double timestamp = 0.0;
    Vec2 position = Vec2::Zero();
};

struct ScenarioRun {
    std::string scenario;
    Trajectory trajectory;
    double sample_period = 5.0;
    std::uint64_t seed = 0;
    std::vector<Measurement> trace;  // one measurement per anchor per tick
    std::vector<GroundTruthPoint> ground_truth;
};

// Zero-mean unit-variance draw keyed by (seed, tick, anchor). Independent
// of evaluation order, so parallel generation stays reproducible.
double shadowing_noise_unit(std::uint64_t seed, std::uint64_t tick_index,
                            std::string_view anchor_id);

// Samples the trajectory every `sample_period` seconds; for each tick and
// anchor emits rssi = model(distance) - wall attenuation - noise. Pure in
// all of its inputs: equal inputs give bit-identical traces.
ScenarioRun generate_trace(const FloorPlan& plan, const Trajectory& trajectory,
                           double sample_period, double noise_sigma,
                           std::uint64_t seed, const SimOptions& options = {});

// Three-room apartment with one ceiling anchor per room and the three
// standard walks (bed -> closet, closet -> bed, bed -> desk chair), each
// ending in a 60 s stand. Geometry choices are documented in
// configs/builtin_site.json, which mirrors this plan exactly.
SiteConfig builtin_scenarios();

}  // namespace rfloc
