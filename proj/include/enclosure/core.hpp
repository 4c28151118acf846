#pragma once

#include <cmath>
#include <complex>
#include <limits>

namespace enclosure {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEulerGamma = 0.57721566490153286061;

// Planar point / vector.
struct Vec2 {
  double x1 = 0.0;
  double x2 = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x1, s * a.x2}; }
inline Vec2 operator*(Vec2 a, double s) { return s * a; }
inline Vec2 operator/(Vec2 a, double s) { return {a.x1 / s, a.x2 / s}; }
inline Vec2 operator-(Vec2 a) { return {-a.x1, -a.x2}; }

inline double dot(Vec2 a, Vec2 b) { return a.x1 * b.x1 + a.x2 * b.x2; }
inline double cross(Vec2 a, Vec2 b) { return a.x1 * b.x2 - a.x2 * b.x1; }
inline double norm(Vec2 a) { return std::hypot(a.x1, a.x2); }
inline double norm_sq(Vec2 a) { return a.x1 * a.x1 + a.x2 * a.x2; }

// Rotate by +90 degrees (counterclockwise).
inline Vec2 perp(Vec2 a) { return {-a.x2, a.x1}; }

// Complex 2-vector; holds probe wave vectors and complex gradients.
struct CVec2 {
  Complex x1{0.0, 0.0};
  Complex x2{0.0, 0.0};
};

inline Complex dot(const CVec2& a, Vec2 b) { return a.x1 * b.x1 + a.x2 * b.x2; }
inline Complex dot(Vec2 b, const CVec2& a) { return dot(a, b); }
inline CVec2 operator*(Complex s, const CVec2& a) { return {s * a.x1, s * a.x2}; }
inline CVec2 operator*(Complex s, Vec2 a) { return {s * a.x1, s * a.x2}; }
inline CVec2 operator+(const CVec2& a, const CVec2& b) { return {a.x1 + b.x1, a.x2 + b.x2}; }

// Sentinel for the log-magnitude of an exactly zero quantity.
inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

}  // namespace enclosure
