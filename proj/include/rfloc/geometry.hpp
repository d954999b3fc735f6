// SPDX-License-Identifier: Apache-2.0
//
// Small 2D helpers shared by the floor-plan and simulator code.

#pragma once

#include <Eigen/Dense>
#include <vector>

namespace rfloc {

using Vec2 = Eigen::Vector2d;
using Polygon = std::vector<Vec2>;

double cross2(const Vec2& a, const Vec2& b);

// True when the open segment (a0, a1) crosses the closed segment (b0, b1).
// Parallel and collinear overlaps do not count as crossings.
bool open_segment_crosses(const Vec2& a0, const Vec2& a1,
                          const Vec2& b0, const Vec2& b1);

// Ray-casting test; points on the boundary count as inside.
bool point_in_polygon(const Vec2& p, const Polygon& poly);

// A polygon is simple when no two non-adjacent edges intersect and
// adjacent edges meet only at their shared vertex.
bool polygon_is_simple(const Polygon& poly);

}  // namespace rfloc
