#pragma once

#include <cstdint>
#include <utility>

#include "randfem/assembly.hpp"
#include "randfem/forcing.hpp"
#include "randfem/mesh.hpp"
#include "randfem/sparse.hpp"

namespace randfem {

struct SolveReport {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

// Unpreconditioned conjugate gradients for an SPD system. Stops when
// ||b - A x|| <= tol ||b||; non-convergence is reported, not thrown.
std::pair<FemCoefficients, SolveReport> solve_spd(const SparseSpdMatrix& A,
                                                  const FemCoefficients& b, double tol = 1e-10,
                                                  int max_iterations = 0);

enum class Estimator { mc, is, barycentric };

const char* estimator_name(Estimator e);

struct RealizationResult {
  FemCoefficients coefficients;
  SolveReport report;
  double load_seconds = 0.0; // wall time of load sampling + assembly only
};

// One realization of the randomized finite element solution: assembles the
// stiffness and the load for the chosen estimator, solves, and reports the
// wall time of the load-vector step alone. The is and barycentric estimators
// require the unit coefficient field. When sigma is unit and an exact
// stiffness is supplied it is reused; the randomized stiffness would be
// identical since the element gradients are constant.
RealizationResult run_realization(const TriangleMesh& mesh, const CoefficientField& sigma,
                                  const ForcingTerm& f, Estimator estimator,
                                  std::uint64_t seed, std::uint64_t replication,
                                  const SparseSpdMatrix* stiffness_if_unit = nullptr,
                                  double tol = 1e-10, int max_iterations = 0);

} // namespace randfem
