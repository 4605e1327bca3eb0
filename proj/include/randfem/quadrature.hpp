#pragma once

#include <functional>
#include <vector>

#include "randfem/geometry.hpp"
#include "randfem/mesh.hpp"
#include "randfem/sampling.hpp"

namespace randfem {

// Scalar integrand, defined almost everywhere; evaluations may come back
// non-finite on null sets (handled by the resample policy).
using Integrand = std::function<double(Point2)>;

// Stratified Monte Carlo integral over the triangulation: sum of |T| v(Z_T)
// with one uniform point per triangle. A non-finite evaluation is retried
// once on a fresh derived stream; a second failure raises numeric_error.
double monte_carlo_quadrature(const Integrand& v, const TriangleMesh& mesh,
                              const QuadratureDraw& draw);

// One-point rule at the barycenters: sum of |T| v(z_T). Non-finite values
// propagate into the result (with a note on stderr), they do not throw.
double barycentric_quadrature(const Integrand& v, const TriangleMesh& mesh);

// Symmetric rule on the reference simplex with positive degree of exactness.
// Weights sum to the simplex area 1/2.
struct TriangleRule {
  int degree = 1;
  std::vector<SimplexPoint> points;
  std::vector<double> weights;
};

// Grundmann-Moeller simplex rule of index s = ceil((degree-1)/2), exact for
// polynomials up to degree 2s+1 >= degree. Supported for degree 1..11.
const TriangleRule& triangle_rule(int degree);

// High-order deterministic quadrature over one triangle or a whole mesh,
// exact per triangle for polynomials up to `degree`. Degree must be in
// [2, 10]; the integrand must be smooth on each triangle.
double gauss_on_triangle(const Integrand& v, Point2 a, Point2 b, Point2 c, int degree);
double gauss_quadrature(const Integrand& v, const TriangleMesh& mesh, int degree);

} // namespace randfem
