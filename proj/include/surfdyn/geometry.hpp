#pragma once

#include <cmath>

namespace surfdyn {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }

    double norm() const { return std::hypot(x, y); }
    double norm2() const { return x * x + y * y; }
};

inline Vec2 operator*(double s, const Vec2& v) { return {s * v.x, s * v.y}; }
inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Wrap an angle into [0, 2*pi).
inline double wrap_angle(double a) {
    a = std::fmod(a, kTwoPi);
    if (a < 0) a += kTwoPi;
    return a;
}

// Circular distance between two angles, in [0, pi].
inline double angle_dist(double a, double b) {
    double d = std::fabs(wrap_angle(a) - wrap_angle(b));
    return d > kTwoPi / 2 ? kTwoPi - d : d;
}

// Distance from point p to segment [a, b].
inline double point_segment_dist(const Vec2& p, const Vec2& a, const Vec2& b) {
    Vec2 ab = b - a;
    double t = ab.norm2() > 0 ? dot(p - a, ab) / ab.norm2() : 0.0;
    if (t < 0) t = 0;
    if (t > 1) t = 1;
    return (p - (a + ab * t)).norm();
}

}  // namespace surfdyn
