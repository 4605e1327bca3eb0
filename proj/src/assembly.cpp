#include "randfem/assembly.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "randfem/errors.hpp"

namespace randfem {

namespace {

void check_uniform_draw(const TriangleMesh& mesh, const QuadratureDraw& draw,
                        const char* where) {
  if (draw.kind != DrawKind::uniform_per_triangle)
    throw param_error(std::string(where) + " requires a uniform-kind draw");
  if (static_cast<int>(draw.points.size()) != mesh.num_triangles())
    throw param_error(std::string(where) + ": draw does not cover every triangle");
}

double evaluate_with_resample(const Integrand& f, const TriangleMesh& mesh, int t,
                              const QuadratureDraw& draw, Point2& point) {
  double value = f(point);
  if (!std::isfinite(value)) {
    point = resample_uniform_point(mesh, t, draw);
    value = f(point);
    if (!std::isfinite(value))
      throw numeric_error("integrand non-finite on triangle " + std::to_string(t) +
                          " after resample (seed " + std::to_string(draw.seed) +
                          ", replication " + std::to_string(draw.replication) + ")");
  }
  return value;
}

} // namespace

SparseSpdMatrix assemble_stiffness_exact(const TriangleMesh& mesh) {
  std::vector<Triplet> triplets;
  triplets.reserve(9 * mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry g = element_geometry(mesh, t);
    const auto& tri = mesh.triangles[t];
    for (int a = 0; a < 3; ++a) {
      const int i = mesh.interior_index[tri[a]];
      if (i < 0) continue;
      for (int b = 0; b < 3; ++b) {
        const int j = mesh.interior_index[tri[b]];
        if (j < 0) continue;
        triplets.push_back({i, j, g.area * dot(g.gradient[a], g.gradient[b])});
      }
    }
  }
  return SparseSpdMatrix::from_triplets(mesh.num_interior(), std::move(triplets));
}

// TODO: reuse the CSR sparsity pattern across replications; the triplet sort
// dominates when this is called once per realization with variable sigma.
SparseSpdMatrix assemble_stiffness_mc(const TriangleMesh& mesh, const CoefficientField& sigma,
                                      const QuadratureDraw& draw) {
  check_uniform_draw(mesh, draw, "assemble_stiffness_mc");
  std::vector<Triplet> triplets;
  triplets.reserve(9 * mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    Point2 z = draw.at(t);
    const double s = evaluate_with_resample(sigma.evaluate, mesh, t, draw, z);
    if (s < sigma.lower_bound - 1e-12)
      throw data_error("coefficient sample " + std::to_string(s) + " on triangle " +
                       std::to_string(t) + " below the declared lower bound " +
                       std::to_string(sigma.lower_bound));
    const ElementGeometry g = element_geometry(mesh, t);
    const auto& tri = mesh.triangles[t];
    for (int a = 0; a < 3; ++a) {
      const int i = mesh.interior_index[tri[a]];
      if (i < 0) continue;
      for (int b = 0; b < 3; ++b) {
        const int j = mesh.interior_index[tri[b]];
        if (j < 0) continue;
        triplets.push_back({i, j, g.area * s * dot(g.gradient[a], g.gradient[b])});
      }
    }
  }
  return SparseSpdMatrix::from_triplets(mesh.num_interior(), std::move(triplets));
}

FemCoefficients assemble_load_monte_carlo(const TriangleMesh& mesh, const Integrand& f,
                                          const QuadratureDraw& draw) {
  check_uniform_draw(mesh, draw, "assemble_load_monte_carlo");
  FemCoefficients load(mesh.num_interior(), 0.0);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    Point2 z = draw.at(t);
    const double value = evaluate_with_resample(f, mesh, t, draw, z);
    const auto& tri = mesh.triangles[t];
    const Point2 v0 = mesh.vertices[tri[0]];
    const Point2 v1 = mesh.vertices[tri[1]];
    const Point2 v2 = mesh.vertices[tri[2]];
    const auto lambda = barycentric_coordinates(z, v0, v1, v2);
    const double area = triangle_area_of(v0, v1, v2);
    for (int a = 0; a < 3; ++a) {
      const int j = mesh.interior_index[tri[a]];
      if (j >= 0) load[j] += area * value * lambda[a];
    }
  }
  return load;
}

FemCoefficients assemble_load_importance(const TriangleMesh& mesh, const Integrand& f,
                                         const QuadratureDraw& draw) {
  if (draw.kind != DrawKind::hat_per_triangle_vertex)
    throw param_error("assemble_load_importance requires a hat-kind draw");
  if (draw.points.size() != 3 * static_cast<std::size_t>(mesh.num_triangles()))
    throw param_error("assemble_load_importance: draw does not cover the mesh");
  FemCoefficients load(mesh.num_interior(), 0.0);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const double weight = triangle_area(mesh, t) / 3.0;
    for (int a = 0; a < 3; ++a) {
      const int j = mesh.interior_index[tri[a]];
      if (j < 0) continue;
      if (!draw.slot_valid(t, a))
        throw param_error("hat draw is missing the point for triangle " + std::to_string(t) +
                          ", local vertex " + std::to_string(a));
      Point2 y = draw.at(t, a);
      double value = f(y);
      if (!std::isfinite(value)) {
        y = resample_hat_point(mesh, t, a, draw);
        value = f(y);
        if (!std::isfinite(value))
          throw numeric_error("integrand non-finite on triangle " + std::to_string(t) +
                              " after resample (seed " + std::to_string(draw.seed) +
                              ", replication " + std::to_string(draw.replication) + ")");
      }
      load[j] += weight * value;
    }
  }
  return load;
}

FemCoefficients assemble_load_barycentric(const TriangleMesh& mesh, const Integrand& f) {
  FemCoefficients load(mesh.num_interior(), 0.0);
  int bad = 0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const double value = f(barycenter(mesh, t));
    if (!std::isfinite(value)) ++bad;
    const double weight = triangle_area(mesh, t) / 3.0;
    for (int a = 0; a < 3; ++a) {
      const int j = mesh.interior_index[mesh.triangles[t][a]];
      if (j >= 0) load[j] += weight * value;
    }
  }
  if (bad > 0)
    std::fprintf(stderr, "assemble_load_barycentric: %d non-finite barycenter value(s)\n", bad);
  return load;
}

SparseSpdMatrix assemble_mass(const TriangleMesh& mesh) {
  std::vector<Triplet> triplets;
  triplets.reserve(9 * mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const double area = triangle_area(mesh, t);
    const auto& tri = mesh.triangles[t];
    for (int a = 0; a < 3; ++a) {
      const int i = mesh.interior_index[tri[a]];
      if (i < 0) continue;
      for (int b = 0; b < 3; ++b) {
        const int j = mesh.interior_index[tri[b]];
        if (j < 0) continue;
        triplets.push_back({i, j, area / 12.0 * (a == b ? 2.0 : 1.0)});
      }
    }
  }
  return SparseSpdMatrix::from_triplets(mesh.num_interior(), std::move(triplets));
}

} // namespace randfem
