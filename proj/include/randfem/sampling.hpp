#pragma once

#include <cstdint>
#include <vector>

#include "randfem/geometry.hpp"
#include "randfem/mesh.hpp"
#include "randfem/rng.hpp"

namespace randfem {

struct SimplexPoint {
  double alpha = 0.0;
  double beta = 0.0;
};

// Fold of the unit square onto the closed standard 2-simplex: keeps (u1, u2)
// when u1 + u2 <= 1, otherwise reflects to (1-u1, 1-u2). Measure preserving,
// so uniform inputs give a uniform point on the simplex.
inline SimplexPoint fold_to_simplex(double u1, double u2) {
  if (u1 + u2 <= 1.0) return {u1, u2};
  return {1.0 - u1, 1.0 - u2};
}

inline SimplexPoint sample_uniform_simplex(RngStream& rng) {
  const double u1 = rng.next_u01();
  const double u2 = rng.next_u01();
  return fold_to_simplex(u1, u2);
}

Point2 sample_uniform_triangle(const TriangleMesh& mesh, int t, RngStream& rng);

// Density 6 * phi_hat on the simplex (0 outside), where phi_hat is the hat
// of the given local vertex: 1-a-b, a, or b. Integrates to 1.
double hat_density_reference(int local_vertex, double alpha, double beta);

// Rejection acceptance test with uniform proposal density g = 2 on the
// simplex, envelope constant c = 3, and y ~ U(0, c): accept iff
// y * g(z) <= density(z). Equality accepts.
inline bool hat_accept(int local_vertex, SimplexPoint z, double y) {
  return y * 2.0 <= hat_density_reference(local_vertex, z.alpha, z.beta);
}

inline constexpr double kRejectionEnvelope = 3.0; // expected proposals per accept

// Rejection sampler for the hat density on the reference simplex.
SimplexPoint sample_hat_reference(int local_vertex, RngStream& rng);

// Point on triangle t distributed with density 3 |T|^-1 phi_j, where phi_j is
// the hat function of interior node j. Requires t incident to the node.
Point2 sample_hat_triangle(const TriangleMesh& mesh, int t, int j, RngStream& rng);

enum class DrawKind { uniform_per_triangle, hat_per_triangle_vertex };

// Materialized sampling points of one replication, with the (seed, stream)
// provenance needed to reproduce or resample them. Uniform draws hold one
// point per triangle; hat draws hold one point per (triangle, local vertex)
// slot, valid where the vertex is an interior node.
struct QuadratureDraw {
  DrawKind kind = DrawKind::uniform_per_triangle;
  std::uint64_t seed = 0;
  std::uint64_t replication = 0;
  StreamPurpose purpose = StreamPurpose::quadrature;
  std::vector<Point2> points;
  std::vector<std::uint8_t> valid; // hat kind only, size 3 * #triangles

  const Point2& at(int t) const { return points[t]; }
  const Point2& at(int t, int local_vertex) const { return points[3 * t + local_vertex]; }
  bool slot_valid(int t, int local_vertex) const {
    return valid[3 * t + local_vertex] != 0;
  }
};

QuadratureDraw draw_uniform_points(const TriangleMesh& mesh, std::uint64_t seed,
                                   std::uint64_t replication, StreamPurpose purpose);

QuadratureDraw draw_hat_points(const TriangleMesh& mesh, std::uint64_t seed,
                               std::uint64_t replication);

// Fresh point for the resample-once singularity policy, drawn from the
// stream derived with the resample tag.
Point2 resample_uniform_point(const TriangleMesh& mesh, int t, const QuadratureDraw& draw);
Point2 resample_hat_point(const TriangleMesh& mesh, int t, int local_vertex,
                          const QuadratureDraw& draw);

} // namespace randfem
