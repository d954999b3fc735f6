// SPDX-License-Identifier: Apache-2.0
//
// Rooms, walls with material absorption, and anchor placement.

#pragma once

#include <string>
#include <vector>

#include "rfloc/geometry.hpp"
#include "rfloc/localizer.hpp"

namespace rfloc {

enum class Material {
    Brick,
    Cement,
    Glass,
    MetalDoor,
    Plasterboard,
    Window,
};

const char* to_string(Material m);
Material material_from_string(const std::string& name);  // throws on unknown names

struct WallSegment {
    Vec2 p1 = Vec2::Zero();
    Vec2 p2 = Vec2::Zero();
    Material material = Material::Cement;
    double thickness_m = 0.17;

    void validate() const;  // endpoints distinct, thickness > 0
};

// Absorption in dB for a wall at the reference thickness (0.17 m interior
// wall). Ranged materials are resolved to the midpoint of their published
// range; attenuation scales linearly with thickness.
struct AttenuationTable {
    double brick = 10.5;        // published range 6-15
    double cement = 5.0;        // 4-6
    double glass = 6.0;
    double metal_door = 8.0;    // 6-10
    double plasterboard = 4.0;  // 3-5
    double window = 3.0;
    double reference_thickness_m = 0.17;

    double db_at_reference(Material m) const;
    double db_for(Material m, double thickness_m) const;
    void validate() const;  // all entries >= 0, reference thickness > 0
};

struct Room {
    std::string name;
    Polygon polygon;
};

struct FloorPlan {
    std::vector<Room> rooms;
    std::vector<WallSegment> walls;
    std::vector<Anchor> anchors;

    // Room polygons simple, walls valid, anchors distinct and each inside
    // some room. Throws std::invalid_argument on violation.
    void validate() const;
};

// Total absorption along the open sight line (from, to): sum of the
// per-material attenuation of every wall segment the line crosses.
double wall_attenuation(const FloorPlan& plan, const Vec2& from, const Vec2& to,
                        const AttenuationTable& table = {});

}  // namespace rfloc
