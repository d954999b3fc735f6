// SPDX-License-Identifier: Apache-2.0

#include "rfloc/geometry.hpp"

#include <cmath>

namespace rfloc {

double cross2(const Vec2& a, const Vec2& b) {
    return a.x() * b.y() - a.y() * b.x();
}

bool open_segment_crosses(const Vec2& a0, const Vec2& a1,
                          const Vec2& b0, const Vec2& b1) {
    const Vec2 r = a1 - a0;
    const Vec2 s = b1 - b0;
    const double denom = cross2(r, s);
    if (denom == 0.0) {
        return false;
    }
    const Vec2 qp = b0 - a0;
    const double t = cross2(qp, s) / denom;  // along (a0, a1)
    const double u = cross2(qp, r) / denom;  // along (b0, b1)
    return t > 0.0 && t < 1.0 && u >= 0.0 && u <= 1.0;
}

bool point_in_polygon(const Vec2& p, const Polygon& poly) {
    const std::size_t n = poly.size();
    if (n < 3) {
        return false;
    }
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[j];

        // On-edge check: collinear and within the bounding range.
        const double cr = cross2(b - a, p - a);
        if (cr == 0.0 && (p - a).dot(p - b) <= 0.0) {
            return true;
        }
        if ((a.y() > p.y()) != (b.y() > p.y())) {
            const double x_at =
                a.x() + (p.y() - a.y()) / (b.y() - a.y()) * (b.x() - a.x());
            if (p.x() < x_at) {
                inside = !inside;
            }
        }
    }
    return inside;
}

namespace {

bool closed_segments_intersect(const Vec2& a0, const Vec2& a1,
                               const Vec2& b0, const Vec2& b1) {
    const Vec2 r = a1 - a0;
    const Vec2 s = b1 - b0;
    const double denom = cross2(r, s);
    const Vec2 qp = b0 - a0;
    if (denom == 0.0) {
        if (cross2(qp, r) != 0.0) {
            return false;  // parallel, disjoint lines
        }
        // Collinear: overlap iff the parameter ranges intersect.
        const double rr = r.dot(r);
        if (rr == 0.0) {
            return (b0 - a0).dot(b1 - a0) <= 0.0;
        }
        double t0 = qp.dot(r) / rr;
        double t1 = (b1 - a0).dot(r) / rr;
        if (t0 > t1) std::swap(t0, t1);
        return t0 <= 1.0 && t1 >= 0.0;
    }
    const double t = cross2(qp, s) / denom;
    const double u = cross2(qp, r) / denom;
    return t >= 0.0 && t <= 1.0 && u >= 0.0 && u <= 1.0;
}

}  // namespace

bool polygon_is_simple(const Polygon& poly) {
    const std::size_t n = poly.size();
    if (n < 3) {
        return false;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (poly[i] == poly[(i + 1) % n]) {
            return false;  // degenerate edge
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a0 = poly[i];
        const Vec2& a1 = poly[(i + 1) % n];
        for (std::size_t j = i + 1; j < n; ++j) {
            const Vec2& b0 = poly[j];
            const Vec2& b1 = poly[(j + 1) % n];
            const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            if (adjacent) {
                // Adjacent edges may only touch at the shared vertex.
                if (cross2(a1 - a0, b1 - b0) == 0.0 &&
                    closed_segments_intersect(a0, a1, b0, b1)) {
                    const Vec2& shared = (j == i + 1) ? a1 : a0;
                    const Vec2& other_a = (j == i + 1) ? a0 : a1;
                    const Vec2& other_b = (j == i + 1) ? b1 : b0;
                    // Collinear neighbours folding back over each other.
                    if ((other_a - shared).dot(other_b - shared) > 0.0) {
                        return false;
                    }
                }
                continue;
            }
            if (closed_segments_intersect(a0, a1, b0, b1)) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace rfloc
