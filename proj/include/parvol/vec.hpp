#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace parvol {

/// Largest ambient dimension handled anywhere in the library.
inline constexpr int kMaxDim = 4;

/// Point in R^n for n <= kMaxDim. Coordinates past the ambient dimension stay zero.
using Coords = std::array<double, kMaxDim>;

inline Coords operator+(const Coords& a, const Coords& b) {
    Coords r{};
    for (int i = 0; i < kMaxDim; ++i) r[i] = a[i] + b[i];
    return r;
}

inline Coords operator-(const Coords& a, const Coords& b) {
    Coords r{};
    for (int i = 0; i < kMaxDim; ++i) r[i] = a[i] - b[i];
    return r;
}

inline Coords operator*(double s, const Coords& a) {
    Coords r{};
    for (int i = 0; i < kMaxDim; ++i) r[i] = s * a[i];
    return r;
}

inline double dot(const Coords& a, const Coords& b) {
    double s = 0.0;
    for (int i = 0; i < kMaxDim; ++i) s += a[i] * b[i];
    return s;
}

inline double norm(const Coords& a) { return std::sqrt(dot(a, a)); }

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }

/// Twice the signed area of triangle (a, b, c); positive when counter-clockwise.
inline double orient2d(Vec2 a, Vec2 b, Vec2 c) { return cross(b - a, c - a); }

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(Vec3 a, Vec3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }
inline bool operator==(Vec3 a, Vec3 b) { return a.x == b.x && a.y == b.y && a.z == b.z; }

inline Vec2 to_vec2(const Coords& c) { return {c[0], c[1]}; }
inline Vec3 to_vec3(const Coords& c) { return {c[0], c[1], c[2]}; }
inline Coords to_coords(Vec2 v) { return {v.x, v.y, 0.0, 0.0}; }
inline Coords to_coords(Vec3 v) { return {v.x, v.y, v.z, 0.0}; }

/// Volume of the Euclidean unit ball in dimension n.
inline double unit_ball_volume(int n) {
    return std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

}  // namespace parvol
