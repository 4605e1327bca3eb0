#include "randfem/quadrature.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <string>

#include "randfem/errors.hpp"

namespace randfem {

namespace {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// Grundmann-Moeller rule of index s for the 2-simplex, degree d = 2s+1.
// Points have barycentric coordinates (2k+1)/(d+2-2i) over all k in N_0^3
// with |k| = s-i; the weight of group i is
//   (-1)^i 2^(-2s) (d+2-2i)^d / (i! (d+2-i)!).
// All quantities stay well inside double range for s <= 5.
TriangleRule build_gm_rule(int s) {
  const int d = 2 * s + 1;
  TriangleRule rule;
  rule.degree = d;
  for (int i = 0; i <= s; ++i) {
    const int denom = d + 2 - 2 * i;
    const double w = ((i % 2 == 0) ? 1.0 : -1.0) * std::pow(2.0, -2 * s) *
                     std::pow(static_cast<double>(denom), d) /
                     (factorial(i) * factorial(d + 2 - i));
    const int m = s - i;
    for (int k0 = 0; k0 <= m; ++k0) {
      for (int k1 = 0; k1 <= m - k0; ++k1) {
        const int k2 = m - k0 - k1;
        rule.points.push_back({(2.0 * k1 + 1.0) / denom, (2.0 * k2 + 1.0) / denom});
        rule.weights.push_back(w);
      }
    }
  }
  return rule;
}

std::array<TriangleRule, 6> build_all_rules() {
  std::array<TriangleRule, 6> rules;
  for (int s = 0; s <= 5; ++s) rules[s] = build_gm_rule(s);
  return rules;
}

} // namespace

const TriangleRule& triangle_rule(int degree) {
  if (degree < 1 || degree > 11)
    throw param_error("triangle rule degree " + std::to_string(degree) + " outside [1, 11]");
  static const std::array<TriangleRule, 6> rules = build_all_rules();
  return rules[degree / 2];
}

double monte_carlo_quadrature(const Integrand& v, const TriangleMesh& mesh,
                              const QuadratureDraw& draw) {
  if (draw.kind != DrawKind::uniform_per_triangle)
    throw param_error("monte_carlo_quadrature requires a uniform-kind draw");
  if (static_cast<int>(draw.points.size()) != mesh.num_triangles())
    throw param_error("draw does not cover every triangle exactly once");
  double sum = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    double value = v(draw.at(t));
    if (!std::isfinite(value)) {
      value = v(resample_uniform_point(mesh, t, draw));
      if (!std::isfinite(value))
        throw numeric_error("integrand non-finite on triangle " + std::to_string(t) +
                            " after resample (seed " + std::to_string(draw.seed) +
                            ", replication " + std::to_string(draw.replication) + ")");
    }
    sum += triangle_area(mesh, t) * value;
  }
  return sum;
}

double barycentric_quadrature(const Integrand& v, const TriangleMesh& mesh) {
  double sum = 0.0;
  int bad = 0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const double value = v(barycenter(mesh, t));
    if (!std::isfinite(value)) ++bad;
    sum += triangle_area(mesh, t) * value;
  }
  if (bad > 0)
    std::fprintf(stderr, "barycentric_quadrature: %d non-finite barycenter value(s)\n", bad);
  return sum;
}

double gauss_on_triangle(const Integrand& v, Point2 a, Point2 b, Point2 c, int degree) {
  if (degree < 2 || degree > 10)
    throw param_error("gauss quadrature degree " + std::to_string(degree) + " outside [2, 10]");
  const TriangleRule& rule = triangle_rule(degree);
  const Point2 e1 = b - a;
  const Point2 e2 = c - a;
  const double jac = std::abs(cross(e1, e2)); // 2 |T|
  double sum = 0.0;
  for (std::size_t k = 0; k < rule.points.size(); ++k) {
    const SimplexPoint z = rule.points[k];
    const Point2 p = a + z.alpha * e1 + z.beta * e2;
    sum += rule.weights[k] * v(p);
  }
  return jac * sum;
}

double gauss_quadrature(const Integrand& v, const TriangleMesh& mesh, int degree) {
  double sum = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    sum += gauss_on_triangle(v, mesh.vertices[tri[0]], mesh.vertices[tri[1]],
                             mesh.vertices[tri[2]], degree);
  }
  return sum;
}

} // namespace randfem
