#pragma once

#include <array>
#include <cmath>

namespace randfem {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }

inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }

inline bool is_finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

// Signed twice-area of the triangle (a, b, c); positive for counterclockwise order.
inline double signed_double_area(Point2 a, Point2 b, Point2 c) {
  return cross(b - a, c - a);
}

inline double triangle_area_of(Point2 a, Point2 b, Point2 c) {
  return 0.5 * std::abs(signed_double_area(a, b, c));
}

// Affine map p -> linear * p + offset with an invertible linear part.
struct AffineMap {
  double a11 = 1.0, a12 = 0.0;
  double a21 = 0.0, a22 = 1.0;
  Point2 offset{};

  Point2 operator()(Point2 p) const {
    return {a11 * p.x + a12 * p.y + offset.x, a21 * p.x + a22 * p.y + offset.y};
  }

  double det() const { return a11 * a22 - a12 * a21; }

  AffineMap inverse() const {
    const double d = det();
    AffineMap inv;
    inv.a11 = a22 / d;
    inv.a12 = -a12 / d;
    inv.a21 = -a21 / d;
    inv.a22 = a11 / d;
    inv.offset = {-(inv.a11 * offset.x + inv.a12 * offset.y),
                  -(inv.a21 * offset.x + inv.a22 * offset.y)};
    return inv;
  }
};

// Barycentric coordinates of p with respect to (v0, v1, v2), in vertex order.
inline std::array<double, 3> barycentric_coordinates(Point2 p, Point2 v0, Point2 v1,
                                                     Point2 v2) {
  const double d = signed_double_area(v0, v1, v2);
  return {signed_double_area(p, v1, v2) / d, signed_double_area(v0, p, v2) / d,
          signed_double_area(v0, v1, p) / d};
}

} // namespace randfem
