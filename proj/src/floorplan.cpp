// SPDX-License-Identifier: Apache-2.0

#include "rfloc/floorplan.hpp"

#include <cmath>
#include <stdexcept>

namespace rfloc {

const char* to_string(Material m) {
    switch (m) {
        case Material::Brick: return "brick";
        case Material::Cement: return "cement";
        case Material::Glass: return "glass";
        case Material::MetalDoor: return "metal_door";
        case Material::Plasterboard: return "plasterboard";
        case Material::Window: return "window";
    }
    return "unknown";
}

Material material_from_string(const std::string& name) {
    if (name == "brick") return Material::Brick;
    if (name == "cement") return Material::Cement;
    if (name == "glass") return Material::Glass;
    if (name == "metal_door") return Material::MetalDoor;
    if (name == "plasterboard") return Material::Plasterboard;
    if (name == "window") return Material::Window;
    throw std::invalid_argument("unknown wall material: " + name);
}

void WallSegment::validate() const {
    if (p1 == p2) {
        throw std::invalid_argument("wall endpoints must be distinct");
    }
    if (!(thickness_m > 0.0) || !std::isfinite(thickness_m)) {
        throw std::invalid_argument("wall thickness must be > 0");
    }
}

double AttenuationTable::db_at_reference(Material m) const {
    switch (m) {
        case Material::Brick: return brick;
        case Material::Cement: return cement;
        case Material::Glass: return glass;
        case Material::MetalDoor: return metal_door;
        case Material::Plasterboard: return plasterboard;
        case Material::Window: return window;
    }
    throw std::logic_error("unknown material");
}

double AttenuationTable::db_for(Material m, double thickness_m) const {
    return db_at_reference(m) * (thickness_m / reference_thickness_m);
}

void AttenuationTable::validate() const {
    for (double v : {brick, cement, glass, metal_door, plasterboard, window}) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument("attenuation values must be >= 0");
        }
    }
    if (!(reference_thickness_m > 0.0)) {
        throw std::invalid_argument("reference thickness must be > 0");
    }
}

void FloorPlan::validate() const {
    for (const Room& room : rooms) {
        if (room.polygon.size() < 3 || !polygon_is_simple(room.polygon)) {
            throw std::invalid_argument("room polygon must be simple: " + room.name);
        }
    }
    for (const WallSegment& wall : walls) {
        wall.validate();
    }
    for (std::size_t i = 0; i < anchors.size(); ++i) {
        anchors[i].params.validate();
        for (std::size_t j = i + 1; j < anchors.size(); ++j) {
            if (anchors[i].position == anchors[j].position) {
                throw std::invalid_argument("anchor positions must be pairwise distinct");
            }
            if (anchors[i].id == anchors[j].id) {
                throw std::invalid_argument("anchor ids must be unique");
            }
        }
        bool housed = false;
        for (const Room& room : rooms) {
            if (point_in_polygon(anchors[i].position, room.polygon)) {
                housed = true;
                break;
            }
        }
        if (!housed) {
            throw std::invalid_argument("anchor " + anchors[i].id + " lies outside every room");
        }
    }
}

double wall_attenuation(const FloorPlan& plan, const Vec2& from, const Vec2& to,
                        const AttenuationTable& table) {
    double total_db = 0.0;
    for (const WallSegment& wall : plan.walls) {
        if (open_segment_crosses(from, to, wall.p1, wall.p2)) {
            total_db += table.db_for(wall.material, wall.thickness_m);
        }
    }
    return total_db;
}

}  // namespace rfloc
