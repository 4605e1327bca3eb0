#include "randfem/solver.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "randfem/errors.hpp"

namespace randfem {

namespace {

double norm2(const FemCoefficients& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double dot_vec(const FemCoefficients& a, const FemCoefficients& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

} // namespace

std::pair<FemCoefficients, SolveReport> solve_spd(const SparseSpdMatrix& A,
                                                  const FemCoefficients& b, double tol,
                                                  int max_iterations) {
  const int n = A.dimension();
  if (static_cast<int>(b.size()) != n)
    throw param_error("right-hand side length does not match matrix dimension");
  if (!(tol > 0.0 && tol < 1.0)) throw param_error("solver tolerance must lie in (0, 1)");
  if (max_iterations <= 0) max_iterations = 10 * n;

  FemCoefficients x(n, 0.0);
  SolveReport report;
  const double norm_b = norm2(b);
  if (norm_b == 0.0) {
    report.converged = true;
    return {x, report};
  }

  FemCoefficients r = b;
  FemCoefficients p = r;
  FemCoefficients q(n, 0.0);
  double rs = dot_vec(r, r);

  for (int it = 1; it <= max_iterations; ++it) {
    A.multiply(p, q);
    const double pq = dot_vec(p, q);
    if (!(pq > 0.0))
      throw numeric_error("conjugate gradients: matrix is not positive definite");
    const double alpha = rs / pq;
    for (int i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    const double rs_new = dot_vec(r, r);
    report.iterations = it;
    report.relative_residual = std::sqrt(rs_new) / norm_b;
    if (report.relative_residual <= tol) {
      report.converged = true;
      return {x, report};
    }
    const double beta = rs_new / rs;
    for (int i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
    rs = rs_new;
  }
  report.converged = false;
  return {x, report};
}

const char* estimator_name(Estimator e) {
  switch (e) {
    case Estimator::mc: return "mc";
    case Estimator::is: return "is";
    default: return "barycentric";
  }
}

RealizationResult run_realization(const TriangleMesh& mesh, const CoefficientField& sigma,
                                  const ForcingTerm& f, Estimator estimator,
                                  std::uint64_t seed, std::uint64_t replication,
                                  const SparseSpdMatrix* stiffness_if_unit, double tol,
                                  int max_iterations) {
  if ((estimator == Estimator::is || estimator == Estimator::barycentric) && !sigma.unit)
    throw param_error(std::string(estimator_name(estimator)) +
                      " estimator requires sigma=unit");

  SparseSpdMatrix stiffness_local;
  const SparseSpdMatrix* stiffness = nullptr;
  if (sigma.unit && stiffness_if_unit != nullptr) {
    stiffness = stiffness_if_unit;
  } else if (estimator == Estimator::mc) {
    const QuadratureDraw z1 =
        draw_uniform_points(mesh, seed, replication, StreamPurpose::stiffness);
    stiffness_local = assemble_stiffness_mc(mesh, sigma, z1);
    stiffness = &stiffness_local;
  } else {
    stiffness_local = assemble_stiffness_exact(mesh);
    stiffness = &stiffness_local;
  }

  RealizationResult result;
  const auto start = std::chrono::steady_clock::now();
  FemCoefficients load;
  switch (estimator) {
    case Estimator::mc: {
      const QuadratureDraw z2 =
          draw_uniform_points(mesh, seed, replication, StreamPurpose::load_mc);
      load = assemble_load_monte_carlo(mesh, f.evaluate, z2);
      break;
    }
    case Estimator::is: {
      const QuadratureDraw y = draw_hat_points(mesh, seed, replication);
      load = assemble_load_importance(mesh, f.evaluate, y);
      break;
    }
    case Estimator::barycentric:
      load = assemble_load_barycentric(mesh, f.evaluate);
      break;
  }
  result.load_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  auto [coefficients, report] = solve_spd(*stiffness, load, tol, max_iterations);
  result.coefficients = std::move(coefficients);
  result.report = report;
  return result;
}

} // namespace randfem
