#include "randfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "randfem/errors.hpp"

namespace randfem {

namespace {

constexpr double kDegenerateArea = 1e-14;
constexpr double kAreaSumTol = 1e-12;
constexpr double kGeomTol = 1e-12;

void check_triangle_index(const TriangleMesh& mesh, int t) {
  if (t < 0 || t >= mesh.num_triangles())
    throw param_error("triangle index " + std::to_string(t) + " out of range");
}

void check_node_index(const TriangleMesh& mesh, int j) {
  if (j < 0 || j >= mesh.num_interior())
    throw param_error("interior node index " + std::to_string(j) + " out of range");
}

// Fills interior numbering, adjacency and max_edge from vertices, triangles
// and boundary flags.
void finalize_connectivity(TriangleMesh& mesh) {
  const int nv = mesh.num_vertices();
  mesh.interior_index.assign(nv, -1);
  mesh.interior_nodes.clear();
  for (int v = 0; v < nv; ++v) {
    if (!mesh.on_boundary[v]) {
      mesh.interior_index[v] = static_cast<int>(mesh.interior_nodes.size());
      mesh.interior_nodes.push_back(v);
    }
  }
  mesh.node_to_triangles.assign(mesh.interior_nodes.size(), {});
  double h2 = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) {
      const int j = mesh.interior_index[tri[k]];
      if (j >= 0) mesh.node_to_triangles[j].push_back(t);
      const Point2 e = mesh.vertices[tri[(k + 1) % 3]] - mesh.vertices[tri[k]];
      h2 = std::max(h2, dot(e, e));
    }
  }
  mesh.max_edge = std::sqrt(h2);
}

} // namespace

TriangleMesh build_structured_mesh(int n) {
  if (n < 1 || n > 12)
    throw param_error("mesh level n = " + std::to_string(n) + " outside [1, 12]");
  const int m = 1 << n;
  const double h = 1.0 / m;

  TriangleMesh mesh;
  mesh.level = n;
  mesh.grid_spacing = h;
  mesh.vertices.reserve((m + 1) * (m + 1));
  mesh.on_boundary.reserve((m + 1) * (m + 1));
  for (int jy = 0; jy <= m; ++jy) {
    for (int ix = 0; ix <= m; ++ix) {
      mesh.vertices.push_back({ix * h, jy * h});
      mesh.on_boundary.push_back(ix == 0 || ix == m || jy == 0 || jy == m);
    }
  }

  mesh.triangles.reserve(2 * m * m);
  for (int jy = 0; jy < m; ++jy) {
    for (int ix = 0; ix < m; ++ix) {
      const int ll = jy * (m + 1) + ix;
      const int lr = ll + 1;
      const int ul = ll + (m + 1);
      const int ur = ul + 1;
      // Diagonal from upper-left to lower-right corner; both halves CCW.
      mesh.triangles.push_back({ll, lr, ul});
      mesh.triangles.push_back({lr, ur, ul});
    }
  }

  finalize_connectivity(mesh);
  return mesh;
}

double triangle_area(const TriangleMesh& mesh, int t) {
  check_triangle_index(mesh, t);
  const auto& tri = mesh.triangles[t];
  const double area = triangle_area_of(mesh.vertices[tri[0]], mesh.vertices[tri[1]],
                                       mesh.vertices[tri[2]]);
  if (area < kDegenerateArea)
    throw data_error("degenerate triangle " + std::to_string(t));
  return area;
}

Point2 barycenter(const TriangleMesh& mesh, int t) {
  check_triangle_index(mesh, t);
  const auto& tri = mesh.triangles[t];
  const Point2 a = mesh.vertices[tri[0]];
  const Point2 b = mesh.vertices[tri[1]];
  const Point2 c = mesh.vertices[tri[2]];
  return {(a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0};
}

int local_vertex_index(const TriangleMesh& mesh, int t, int v) {
  check_triangle_index(mesh, t);
  const auto& tri = mesh.triangles[t];
  for (int k = 0; k < 3; ++k)
    if (tri[k] == v) return k;
  return -1;
}

ElementGeometry element_geometry(const TriangleMesh& mesh, int t) {
  check_triangle_index(mesh, t);
  const auto& tri = mesh.triangles[t];
  const Point2 v0 = mesh.vertices[tri[0]];
  const Point2 v1 = mesh.vertices[tri[1]];
  const Point2 v2 = mesh.vertices[tri[2]];
  const double d = signed_double_area(v0, v1, v2);
  ElementGeometry g;
  g.area = 0.5 * std::abs(d);
  const std::array<Point2, 3> v = {v0, v1, v2};
  for (int k = 0; k < 3; ++k) {
    const Point2 e = v[(k + 2) % 3] - v[(k + 1) % 3];
    g.gradient[k] = {-e.y / d, e.x / d};
  }
  return g;
}

double basis_value(const TriangleMesh& mesh, int j, Point2 p) {
  check_node_index(mesh, j);
  const int vj = mesh.interior_nodes[j];
  // Hat support first: the triangles incident to the node.
  for (int t : mesh.node_to_triangles[j]) {
    const auto& tri = mesh.triangles[t];
    const auto lambda = barycentric_coordinates(p, mesh.vertices[tri[0]],
                                                mesh.vertices[tri[1]], mesh.vertices[tri[2]]);
    if (lambda[0] >= -kGeomTol && lambda[1] >= -kGeomTol && lambda[2] >= -kGeomTol) {
      for (int k = 0; k < 3; ++k)
        if (tri[k] == vj) return std::clamp(lambda[k], 0.0, 1.0);
    }
  }
  // Outside the support: still require p inside the closed domain.
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const auto lambda = barycentric_coordinates(p, mesh.vertices[tri[0]],
                                                mesh.vertices[tri[1]], mesh.vertices[tri[2]]);
    if (lambda[0] >= -kGeomTol && lambda[1] >= -kGeomTol && lambda[2] >= -kGeomTol)
      return 0.0;
  }
  throw param_error("point outside the mesh domain");
}

Point2 basis_gradient_on_triangle(const TriangleMesh& mesh, int j, int t) {
  check_node_index(mesh, j);
  const int k = local_vertex_index(mesh, t, mesh.interior_nodes[j]);
  if (k < 0) return {0.0, 0.0};
  return element_geometry(mesh, t).gradient[k];
}

AffineMap from_reference(const TriangleMesh& mesh, int t, std::array<int, 3> ordering) {
  check_triangle_index(mesh, t);
  std::array<int, 3> sorted = ordering;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != std::array<int, 3>{0, 1, 2})
    throw param_error("vertex ordering must be a permutation of {0,1,2}");
  const auto& tri = mesh.triangles[t];
  const Point2 v0 = mesh.vertices[tri[ordering[0]]];
  const Point2 v1 = mesh.vertices[tri[ordering[1]]];
  const Point2 v2 = mesh.vertices[tri[ordering[2]]];
  AffineMap map;
  map.a11 = v1.x - v0.x;
  map.a21 = v1.y - v0.y;
  map.a12 = v2.x - v0.x;
  map.a22 = v2.y - v0.y;
  map.offset = v0;
  if (std::abs(map.det()) < 2.0 * kDegenerateArea)
    throw data_error("degenerate triangle " + std::to_string(t));
  return map;
}

AffineMap to_reference(const TriangleMesh& mesh, int t, std::array<int, 3> ordering) {
  return from_reference(mesh, t, ordering).inverse();
}

MeshValidationReport validate_mesh(const TriangleMesh& mesh) {
  MeshValidationReport report;
  report.vertices = mesh.num_vertices();
  report.triangles = mesh.num_triangles();
  report.interior = mesh.num_interior();
  report.max_edge = mesh.max_edge;

  if (mesh.num_vertices() < 3 || mesh.num_triangles() < 1)
    throw data_error("mesh is empty");
  if (mesh.on_boundary.size() != mesh.vertices.size())
    throw data_error("boundary flag count does not match vertex count");

  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const Point2 p = mesh.vertices[v];
    if (!is_finite(p)) throw data_error("non-finite vertex " + std::to_string(v));
    if (p.x < -kGeomTol || p.x > 1.0 + kGeomTol || p.y < -kGeomTol || p.y > 1.0 + kGeomTol)
      throw data_error("vertex " + std::to_string(v) + " outside the unit square");
    const bool on_square_boundary = std::abs(p.x) <= kGeomTol || std::abs(p.x - 1.0) <= kGeomTol ||
                                    std::abs(p.y) <= kGeomTol || std::abs(p.y - 1.0) <= kGeomTol;
    if (on_square_boundary != static_cast<bool>(mesh.on_boundary[v]))
      throw data_error("boundary flag of vertex " + std::to_string(v) +
                       " disagrees with its position");
  }

  report.min_area = std::numeric_limits<double>::max();
  double h2 = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) {
      if (tri[k] < 0 || tri[k] >= mesh.num_vertices())
        throw data_error("triangle " + std::to_string(t) + " references a missing vertex");
      const Point2 e = mesh.vertices[tri[(k + 1) % 3]] - mesh.vertices[tri[k]];
      h2 = std::max(h2, dot(e, e));
    }
    const double signed2 = signed_double_area(mesh.vertices[tri[0]], mesh.vertices[tri[1]],
                                              mesh.vertices[tri[2]]);
    if (signed2 <= 0.0)
      throw data_error("triangle " + std::to_string(t) + " is not counterclockwise");
    const double area = 0.5 * signed2;
    if (area < kDegenerateArea) throw data_error("degenerate triangle " + std::to_string(t));
    report.min_area = std::min(report.min_area, area);
    report.max_area = std::max(report.max_area, area);
    report.total_area += area;
  }
  const double h = std::sqrt(h2);
  if (std::abs(h - mesh.max_edge) > kGeomTol)
    throw data_error("stored max edge length disagrees with geometry");
  if (std::abs(report.total_area - 1.0) > kAreaSumTol)
    throw data_error("triangle areas sum to " + std::to_string(report.total_area) +
                     ", expected 1");
  if (report.max_area > std::sqrt(3.0) / 4.0 * h2 + kGeomTol)
    throw data_error("a triangle violates the area bound (sqrt(3)/4) h^2");
  report.quasi_uniformity_constant = report.min_area / h2;

  // Edge conformity. Interior edges must be shared by exactly two triangles;
  // edges of a single triangle must lie on the square's boundary, and along
  // each side consecutive boundary vertices must be joined by an edge (no
  // vertex inside another triangle's edge).
  std::map<std::pair<int, int>, int> edge_count;
  for (const auto& tri : mesh.triangles) {
    for (int k = 0; k < 3; ++k) {
      int a = tri[k], b = tri[(k + 1) % 3];
      if (a > b) std::swap(a, b);
      ++edge_count[{a, b}];
    }
  }
  for (const auto& [edge, count] : edge_count) {
    if (count > 2)
      throw data_error("edge shared by more than two triangles");
    if (count == 1) {
      const Point2 a = mesh.vertices[edge.first];
      const Point2 b = mesh.vertices[edge.second];
      const bool on_side = (std::abs(a.x) <= kGeomTol && std::abs(b.x) <= kGeomTol) ||
                           (std::abs(a.x - 1.0) <= kGeomTol && std::abs(b.x - 1.0) <= kGeomTol) ||
                           (std::abs(a.y) <= kGeomTol && std::abs(b.y) <= kGeomTol) ||
                           (std::abs(a.y - 1.0) <= kGeomTol && std::abs(b.y - 1.0) <= kGeomTol);
      if (!on_side)
        throw data_error("boundary edge of the triangulation not on the domain boundary");
    }
  }
  for (int side = 0; side < 4; ++side) {
    std::vector<std::pair<double, int>> along; // (coordinate along the side, vertex)
    for (int v = 0; v < mesh.num_vertices(); ++v) {
      const Point2 p = mesh.vertices[v];
      const bool hit = (side == 0 && std::abs(p.y) <= kGeomTol) ||
                       (side == 1 && std::abs(p.y - 1.0) <= kGeomTol) ||
                       (side == 2 && std::abs(p.x) <= kGeomTol) ||
                       (side == 3 && std::abs(p.x - 1.0) <= kGeomTol);
      if (hit) along.emplace_back(side < 2 ? p.x : p.y, v);
    }
    std::sort(along.begin(), along.end());
    for (std::size_t i = 0; i + 1 < along.size(); ++i) {
      int a = along[i].second, b = along[i + 1].second;
      if (a > b) std::swap(a, b);
      if (edge_count.find({a, b}) == edge_count.end())
        throw data_error("hanging vertex on the domain boundary");
    }
  }

  // Adjacency lists must be exactly the incident triangles.
  if (mesh.node_to_triangles.size() != mesh.interior_nodes.size())
    throw data_error("adjacency list count does not match interior node count");
  std::vector<std::vector<int>> expected(mesh.interior_nodes.size());
  for (int t = 0; t < mesh.num_triangles(); ++t)
    for (int v : mesh.triangles[t]) {
      const int j = mesh.interior_index[v];
      if (j >= 0) expected[j].push_back(t);
    }
  for (std::size_t j = 0; j < expected.size(); ++j) {
    std::vector<int> got = mesh.node_to_triangles[j];
    std::sort(got.begin(), got.end());
    if (got != expected[j])
      throw data_error("adjacency list of interior node " + std::to_string(j) + " is wrong");
  }

  return report;
}

void write_mesh(std::ostream& out, const TriangleMesh& mesh) {
  out << "vertices " << mesh.num_vertices() << " triangles " << mesh.num_triangles() << "\n";
  char buf[96];
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g %d\n", mesh.vertices[v].x, mesh.vertices[v].y,
                  static_cast<int>(mesh.on_boundary[v]));
    out << buf;
  }
  for (const auto& tri : mesh.triangles)
    out << tri[0] << " " << tri[1] << " " << tri[2] << "\n";
}

TriangleMesh read_mesh(std::istream& in) {
  std::string word;
  int nv = 0, nt = 0;
  if (!(in >> word) || word != "vertices" || !(in >> nv) || !(in >> word) ||
      word != "triangles" || !(in >> nt) || nv < 3 || nt < 1)
    throw data_error("malformed mesh header");
  TriangleMesh mesh;
  mesh.vertices.resize(nv);
  mesh.on_boundary.resize(nv);
  for (int v = 0; v < nv; ++v) {
    int flag = 0;
    if (!(in >> mesh.vertices[v].x >> mesh.vertices[v].y >> flag))
      throw data_error("malformed vertex line " + std::to_string(v));
    mesh.on_boundary[v] = flag != 0;
  }
  mesh.triangles.resize(nt);
  for (int t = 0; t < nt; ++t) {
    auto& tri = mesh.triangles[t];
    if (!(in >> tri[0] >> tri[1] >> tri[2]))
      throw data_error("malformed triangle line " + std::to_string(t));
    for (int k = 0; k < 3; ++k)
      if (tri[k] < 0 || tri[k] >= nv)
        throw data_error("triangle " + std::to_string(t) + " references a missing vertex");
  }
  finalize_connectivity(mesh);
  return mesh;
}

} // namespace randfem
