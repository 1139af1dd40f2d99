#include "sct/geometry.hpp"

#include <algorithm>
#include <limits>

namespace sct {

namespace {

// Projection interval of a rectangle onto a unit axis.
std::pair<double, double> project(const std::array<Vec2, 4>& corners, const Vec2& axis) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& c : corners) {
        const double p = c.dot(axis);
        lo = std::min(lo, p);
        hi = std::max(hi, p);
    }
    return {lo, hi};
}

}  // namespace

bool rects_overlap(const OrientedRect& a, const OrientedRect& b, double margin) {
    const auto ca = a.corners();
    const auto cb = b.corners();
    const Vec2 axes[4] = {
        a.pose.forward(),
        {-a.pose.forward().y, a.pose.forward().x},
        b.pose.forward(),
        {-b.pose.forward().y, b.pose.forward().x},
    };
    for (const auto& axis : axes) {
        const auto [alo, ahi] = project(ca, axis);
        const auto [blo, bhi] = project(cb, axis);
        if (ahi - margin <= blo + margin || bhi - margin <= alo + margin) return false;
    }
    return true;
}

}  // namespace sct
