#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "randfem/geometry.hpp"

namespace randfem {

// Conforming P1 triangulation of the closed unit square with homogeneous
// Dirichlet boundary. Immutable after construction; safe for concurrent reads.
struct TriangleMesh {
  std::vector<Point2> vertices;
  std::vector<std::array<int, 3>> triangles; // counterclockwise vertex triples
  std::vector<std::uint8_t> on_boundary;     // one flag per vertex

  // Interior (degree-of-freedom) numbering. interior_nodes[j] is the vertex
  // index of node j; interior_index[v] is the node index of vertex v or -1.
  std::vector<int> interior_nodes;
  std::vector<int> interior_index;

  // For each interior node, indices of the triangles having it as a vertex
  // (the support of its hat function), in increasing order.
  std::vector<std::vector<int>> node_to_triangles;

  double max_edge = 0.0;     // h, maximal edge length over all triangles
  double grid_spacing = 0.0; // 2^-n for structured meshes, 0 when unknown
  int level = 0;             // n for structured meshes, 0 when unknown

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }
  int num_interior() const { return static_cast<int>(interior_nodes.size()); }
};

// Uniform criss-cross mesh: squares of side 2^-n, each bisected along the
// diagonal from its upper-left to its lower-right corner. Vertices are
// numbered row-major over the (2^n+1)^2 grid, interior nodes row-major over
// the (2^n-1)^2 interior grid points. Requires 1 <= n <= 12.
TriangleMesh build_structured_mesh(int n);

double triangle_area(const TriangleMesh& mesh, int t);
Point2 barycenter(const TriangleMesh& mesh, int t);

// Value at p of the hat function of interior node j; zero outside its
// support. Throws param_error if p lies outside the closed domain.
double basis_value(const TriangleMesh& mesh, int j, Point2 p);

// Constant gradient of the hat function of interior node j on triangle t;
// zero vector when t is not incident to the node.
Point2 basis_gradient_on_triangle(const TriangleMesh& mesh, int j, int t);

// Per-triangle hat gradients for all three local vertices plus the area.
struct ElementGeometry {
  std::array<Point2, 3> gradient;
  double area;
};
ElementGeometry element_geometry(const TriangleMesh& mesh, int t);

// Affine maps between triangle t and the reference simplex. `ordering`
// selects which physical vertex is sent to (0,0), (1,0), (0,1); the identity
// ordering is {0,1,2}. from_reference maps the simplex onto the triangle and
// |det| of its linear part equals twice the triangle area.
AffineMap from_reference(const TriangleMesh& mesh, int t,
                         std::array<int, 3> ordering = {0, 1, 2});
AffineMap to_reference(const TriangleMesh& mesh, int t,
                       std::array<int, 3> ordering = {0, 1, 2});

// Local index (0..2) of vertex v in triangle t, or -1.
int local_vertex_index(const TriangleMesh& mesh, int t, int v);

struct MeshValidationReport {
  int vertices = 0;
  int triangles = 0;
  int interior = 0;
  double max_edge = 0.0;
  double min_area = 0.0;
  double max_area = 0.0;
  double total_area = 0.0;
  double quasi_uniformity_constant = 0.0; // min |T| / h^2
};

// Admissibility checks for a mesh of the unit square: positive CCW areas,
// areas summing to 1, Weitzenboeck bound |T| <= (sqrt(3)/4) h^2, edge
// conformity (every interior edge shared by exactly two triangles, boundary
// edges on the square's sides with no hanging vertex), flag/geometry
// consistency, and adjacency consistency. Throws data_error on violation.
MeshValidationReport validate_mesh(const TriangleMesh& mesh);

// Plain-text format: "vertices <count> triangles <count>", one vertex per
// line "x y boundary_flag" (17 significant digits), one triangle per line
// "i j k" (0-based). Round-trips exactly.
void write_mesh(std::ostream& out, const TriangleMesh& mesh);
TriangleMesh read_mesh(std::istream& in);

} // namespace randfem
