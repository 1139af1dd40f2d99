#pragma once

#include <cmath>
#include <array>

namespace sct {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
};

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

// Position plus heading (radians, counterclockwise from +x).
struct Pose {
    Vec2 position;
    double heading = 0.0;

    Vec2 forward() const { return {std::cos(heading), std::sin(heading)}; }

    // Transform a point from this pose's local frame to the world frame.
    Vec2 to_world(const Vec2& local) const {
        const double c = std::cos(heading), s = std::sin(heading);
        return {position.x + c * local.x - s * local.y,
                position.y + s * local.x + c * local.y};
    }
};

inline double wrap_angle(double a) {
    while (a > M_PI) a -= 2.0 * M_PI;
    while (a < -M_PI) a += 2.0 * M_PI;
    return a;
}

// Oriented rectangle given by center pose and full extents.
struct OrientedRect {
    Pose pose;
    double length = 1.0;  // along heading
    double width = 1.0;   // across heading

    std::array<Vec2, 4> corners() const {
        const double hl = 0.5 * length, hw = 0.5 * width;
        return {pose.to_world({hl, hw}), pose.to_world({hl, -hw}),
                pose.to_world({-hl, -hw}), pose.to_world({-hl, hw})};
    }
};

// Separating-axis overlap test. `margin` shrinks both rectangles, so touching
// boundaries with margin > 0 do not count as overlap.
bool rects_overlap(const OrientedRect& a, const OrientedRect& b, double margin = 0.0);

}  // namespace sct
