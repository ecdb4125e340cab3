#pragma once

#include <cmath>

namespace uniseek {

/// Plain 2-vector for positions and gradients in the plane.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
};

[[nodiscard]] inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }

/// Symmetric 2x2 matrix (enough for Hessians of scalar fields).
struct Mat2 {
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;
};

/// Wrap an angle into (-pi, pi]. Used for reporting and angle comparison;
/// simulation state keeps angles unwrapped.
[[nodiscard]] inline double wrap_angle(double a) {
    const double two_pi = 2.0 * M_PI;
    double w = std::remainder(a, two_pi);  // (-pi, pi) plus the boundary cases
    if (w <= -M_PI) w += two_pi;
    return w;
}

/// Absolute difference between two angles measured on the circle, in [0, pi].
[[nodiscard]] inline double angle_distance(double a, double b) {
    return std::fabs(wrap_angle(a - b));
}

}  // namespace uniseek
