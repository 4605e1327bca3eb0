#include "randfem/sampling.hpp"

#include <string>

#include "randfem/errors.hpp"

namespace randfem {

namespace {

constexpr int kMaxRejectionIterations = 1000000;

Point2 map_simplex_point(const AffineMap& gamma_inv, SimplexPoint z) {
  return gamma_inv(Point2{z.alpha, z.beta});
}

} // namespace

Point2 sample_uniform_triangle(const TriangleMesh& mesh, int t, RngStream& rng) {
  const AffineMap gamma_inv = from_reference(mesh, t);
  return map_simplex_point(gamma_inv, sample_uniform_simplex(rng));
}

double hat_density_reference(int local_vertex, double alpha, double beta) {
  if (local_vertex < 0 || local_vertex > 2)
    throw param_error("local vertex must be 0, 1 or 2");
  if (alpha < 0.0 || beta < 0.0 || alpha + beta > 1.0) return 0.0;
  switch (local_vertex) {
    case 0: return 6.0 * (1.0 - alpha - beta);
    case 1: return 6.0 * alpha;
    default: return 6.0 * beta;
  }
}

SimplexPoint sample_hat_reference(int local_vertex, RngStream& rng) {
  for (int iter = 0; iter < kMaxRejectionIterations; ++iter) {
    const SimplexPoint z = sample_uniform_simplex(rng);
    const double y = kRejectionEnvelope * rng.next_u01();
    if (hat_accept(local_vertex, z, y)) return z;
  }
  throw numeric_error("rejection sampler exceeded " +
                      std::to_string(kMaxRejectionIterations) + " iterations");
}

Point2 sample_hat_triangle(const TriangleMesh& mesh, int t, int j, RngStream& rng) {
  if (j < 0 || j >= mesh.num_interior())
    throw param_error("interior node index " + std::to_string(j) + " out of range");
  const int local = local_vertex_index(mesh, t, mesh.interior_nodes[j]);
  if (local < 0)
    throw param_error("triangle " + std::to_string(t) + " is not incident to node " +
                      std::to_string(j));
  const AffineMap gamma_inv = from_reference(mesh, t);
  return map_simplex_point(gamma_inv, sample_hat_reference(local, rng));
}

QuadratureDraw draw_uniform_points(const TriangleMesh& mesh, std::uint64_t seed,
                                   std::uint64_t replication, StreamPurpose purpose) {
  QuadratureDraw draw;
  draw.kind = DrawKind::uniform_per_triangle;
  draw.seed = seed;
  draw.replication = replication;
  draw.purpose = purpose;
  draw.points.resize(mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    RngStream rng(seed, derive_stream(replication, t, 0, purpose));
    draw.points[t] = sample_uniform_triangle(mesh, t, rng);
  }
  return draw;
}

QuadratureDraw draw_hat_points(const TriangleMesh& mesh, std::uint64_t seed,
                               std::uint64_t replication) {
  QuadratureDraw draw;
  draw.kind = DrawKind::hat_per_triangle_vertex;
  draw.seed = seed;
  draw.replication = replication;
  draw.purpose = StreamPurpose::load_is;
  draw.points.resize(3 * mesh.num_triangles());
  draw.valid.assign(3 * mesh.num_triangles(), 0);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const AffineMap gamma_inv = from_reference(mesh, t);
    for (int k = 0; k < 3; ++k) {
      if (mesh.interior_index[mesh.triangles[t][k]] < 0) continue;
      RngStream rng(seed, derive_stream(replication, t, k, StreamPurpose::load_is));
      draw.points[3 * t + k] = map_simplex_point(gamma_inv, sample_hat_reference(k, rng));
      draw.valid[3 * t + k] = 1;
    }
  }
  return draw;
}

Point2 resample_uniform_point(const TriangleMesh& mesh, int t, const QuadratureDraw& draw) {
  RngStream rng(draw.seed, derive_stream(draw.replication, t, 0, draw.purpose, true));
  return sample_uniform_triangle(mesh, t, rng);
}

Point2 resample_hat_point(const TriangleMesh& mesh, int t, int local_vertex,
                          const QuadratureDraw& draw) {
  RngStream rng(draw.seed,
                derive_stream(draw.replication, t, local_vertex, draw.purpose, true));
  const AffineMap gamma_inv = from_reference(mesh, t);
  return map_simplex_point(gamma_inv, sample_hat_reference(local_vertex, rng));
}

} // namespace randfem
