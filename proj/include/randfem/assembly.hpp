#pragma once

#include <functional>
#include <string>

#include "randfem/mesh.hpp"
#include "randfem/quadrature.hpp"
#include "randfem/sampling.hpp"
#include "randfem/sparse.hpp"

namespace randfem {

// Diffusion coefficient with a declared positive lower bound. `unit` marks
// the identically-one field, for which the randomized stiffness coincides
// with the exact one.
struct CoefficientField {
  std::function<double(Point2)> evaluate;
  double lower_bound = 1.0;
  bool unit = false;
  std::string name = "custom";
};

// Exact stiffness for unit diffusion: entries sum |T| grad(phi_i) . grad(phi_j)
// over shared triangles. Symmetric positive definite.
SparseSpdMatrix assemble_stiffness_exact(const TriangleMesh& mesh);

// Randomized stiffness: per triangle |T| sigma(Z_T) grad(phi_i) . grad(phi_j)
// with the draw's uniform point Z_T. Samples below the declared lower bound
// raise data_error; non-finite samples fall under the resample-once policy.
SparseSpdMatrix assemble_stiffness_mc(const TriangleMesh& mesh, const CoefficientField& sigma,
                                      const QuadratureDraw& draw);

// Load vector estimators for the entries integral(f phi_j). The Monte Carlo
// variant shares one uniform point per triangle across all of its basis
// functions; the importance variant draws one hat-distributed point per
// (triangle, interior vertex) pair and weighs it |T|/3.
FemCoefficients assemble_load_monte_carlo(const TriangleMesh& mesh, const Integrand& f,
                                          const QuadratureDraw& draw);
FemCoefficients assemble_load_importance(const TriangleMesh& mesh, const Integrand& f,
                                         const QuadratureDraw& draw);

// Deterministic one-point rule: entry j gets sum (|T|/3) f(z_T) over incident
// triangles. Non-finite values propagate (with a note on stderr).
FemCoefficients assemble_load_barycentric(const TriangleMesh& mesh, const Integrand& f);

// Exact P1 mass matrix, element contribution (|T|/12)(1 + delta_ij).
SparseSpdMatrix assemble_mass(const TriangleMesh& mesh);

} // namespace randfem
