#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "oracles.hpp"
#include "randfem/errors.hpp"
#include "randfem/experiments.hpp"
#include "randfem/forcing.hpp"
#include "randfem/quadrature.hpp"

using namespace randfem;

namespace {

double simplex_monomial(int i, int j) {
  // integral over the reference simplex of a^i b^j = i! j! / (i+j+2)!
  double result = 1.0;
  for (int k = 1; k <= i; ++k) result *= k;
  for (int k = 1; k <= j; ++k) result *= k;
  for (int k = 1; k <= i + j + 2; ++k) result /= k;
  return result;
}

} // namespace

TEST_SUITE("quadrature") {

TEST_CASE("triangle rules integrate monomials exactly") {
  for (int degree = 1; degree <= 11; ++degree) {
    const TriangleRule& rule = triangle_rule(degree);
    CHECK(rule.degree >= degree);
    for (int i = 0; i <= rule.degree; ++i) {
      for (int j = 0; i + j <= rule.degree; ++j) {
        double sum = 0.0;
        for (std::size_t k = 0; k < rule.points.size(); ++k)
          sum += rule.weights[k] * std::pow(rule.points[k].alpha, i) *
                 std::pow(rule.points[k].beta, j);
        CHECK(sum == doctest::Approx(simplex_monomial(i, j)).epsilon(1e-12));
      }
    }
  }
  CHECK_THROWS_AS(triangle_rule(0), param_error);
  CHECK_THROWS_AS(triangle_rule(12), param_error);
}

TEST_CASE("gauss quadrature examples") {
  // x^2 y over the reference simplex.
  const double val = gauss_on_triangle([](Point2 p) { return p.x * p.x * p.y; }, {0, 0},
                                       {1, 0}, {0, 1}, 4);
  CHECK(val == doctest::Approx(1.0 / 60.0).epsilon(1e-13));

  const TriangleMesh mesh = build_structured_mesh(2);
  CHECK(gauss_quadrature([](Point2) { return 1.0; }, mesh, 2) ==
        doctest::Approx(1.0).epsilon(1e-14));
  const ForcingTerm f2 = forcing_f2();
  CHECK(gauss_quadrature(f2.evaluate, mesh, 5) == doctest::Approx(2.0 / 9.0).epsilon(1e-13));

  CHECK_THROWS_AS(gauss_quadrature([](Point2) { return 1.0; }, mesh, 1), param_error);
  CHECK_THROWS_AS(gauss_quadrature([](Point2) { return 1.0; }, mesh, 11), param_error);
}

TEST_CASE("monte carlo quadrature basics") {
  const TriangleMesh mesh = build_structured_mesh(2);
  const QuadratureDraw draw = draw_uniform_points(mesh, 11, 0, StreamPurpose::quadrature);
  CHECK(monte_carlo_quadrature([](Point2) { return 1.0; }, mesh, draw) == 1.0);

  // Single reference triangle with a pinned draw point.
  TriangleMesh ref;
  ref.vertices = {{0, 0}, {1, 0}, {0, 1}};
  ref.triangles = {{0, 1, 2}};
  ref.on_boundary = {1, 1, 1};
  ref.interior_index = {-1, -1, -1};
  QuadratureDraw pinned;
  pinned.kind = DrawKind::uniform_per_triangle;
  pinned.points = {{1.0 / 3.0, 1.0 / 3.0}};
  CHECK(monte_carlo_quadrature([](Point2 p) { return p.x; }, ref, pinned) ==
        doctest::Approx(1.0 / 6.0).epsilon(1e-15));

  const QuadratureDraw hat = draw_hat_points(mesh, 11, 0);
  CHECK_THROWS_AS(monte_carlo_quadrature([](Point2) { return 1.0; }, mesh, hat), param_error);
}

TEST_CASE("monte carlo quadrature is unbiased") {
  const TriangleMesh mesh = build_structured_mesh(2);
  const std::vector<Integrand> integrands = {
      [](Point2) { return 1.0; },
      [](Point2 p) { return p.x; },
      [](Point2 p) { return p.x * p.y; },
      forcing_f2().evaluate,
  };
  const int m = 10000;
  for (std::size_t which = 0; which < integrands.size(); ++which) {
    const Integrand& v = integrands[which];
    double s = 0.0, ss = 0.0;
    for (int rep = 0; rep < m; ++rep) {
      const QuadratureDraw draw = draw_uniform_points(mesh, 7, rep, StreamPurpose::quadrature);
      const double q = monte_carlo_quadrature(v, mesh, draw);
      s += q;
      ss += q * q;
    }
    const double mean = s / m;
    const double se = std::sqrt(std::max(0.0, ss / m - mean * mean) / m);
    const double exact = gauss_quadrature(v, mesh, 5);
    CHECK(std::abs(mean - exact) <= 4.0 * se + 1e-13);
  }
  CHECK(gauss_quadrature(integrands[1], mesh, 2) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("results ignore changes on null sets") {
  const TriangleMesh mesh = build_structured_mesh(2);
  const auto v = [](Point2 p) { return p.x * p.y; };
  const auto v_tilde = [](Point2 p) {
    if (p.x == 0.5 && p.y == 0.5) return 1.0e9;
    return p.x * p.y;
  };
  int mismatches = 0;
  for (int rep = 0; rep < 10000; ++rep) {
    const QuadratureDraw draw = draw_uniform_points(mesh, 23, rep, StreamPurpose::quadrature);
    if (monte_carlo_quadrature(v, mesh, draw) != monte_carlo_quadrature(v_tilde, mesh, draw))
      ++mismatches;
  }
  CHECK(mismatches == 0);
}

TEST_CASE("resample policy") {
  const TriangleMesh mesh = build_structured_mesh(2);
  const QuadratureDraw draw = draw_uniform_points(mesh, 3, 5, StreamPurpose::quadrature);

  // Non-finite exactly at the original draw point of triangle 0: one
  // resample recovers, the result stays finite.
  const Point2 bad = draw.at(0);
  const auto v = [bad](Point2 p) {
    if (p.x == bad.x && p.y == bad.y) return std::numeric_limits<double>::infinity();
    return 1.0;
  };
  CHECK(monte_carlo_quadrature(v, mesh, draw) == 1.0);

  // Always non-finite: fails after the single resample.
  const auto always_bad = [](Point2) { return std::numeric_limits<double>::quiet_NaN(); };
  CHECK_THROWS_AS(monte_carlo_quadrature(always_bad, mesh, draw), numeric_error);
}

TEST_CASE("barycentric rule") {
  const TriangleMesh mesh = build_structured_mesh(3);
  CHECK(barycentric_quadrature([](Point2 p) { return p.x + p.y; }, mesh) ==
        doctest::Approx(1.0).epsilon(1e-13));
  CHECK(barycentric_quadrature([](Point2) { return 3.5; }, mesh) ==
        doctest::Approx(3.5).epsilon(1e-13));

  const TriangleMesh fine = build_structured_mesh(4);
  const ForcingTerm f2 = forcing_f2();
  const double approx = barycentric_quadrature(f2.evaluate, fine);
  CHECK(std::abs(approx - 2.0 / 9.0) / (2.0 / 9.0) <= 1e-2);

  // The singular forcing hits barycenters on the diagonal.
  const ForcingTerm f1 = forcing_f1();
  CHECK(!std::isfinite(barycentric_quadrature(f1.evaluate, mesh)));
}

TEST_CASE("reference values for the singular forcing") {
  const double power_a = testing::diagonal_power_integral(0.49, 40);
  const double power_b = testing::diagonal_power_integral(0.49, 48);
  CHECK(std::abs(power_a - power_b) / power_b < 1e-6);
  // Closed form of the diagonal part: 2 / ((1-q)(2-q)).
  CHECK(power_b == doctest::Approx(2.0 / (0.51 * 1.51)).epsilon(1e-10));
  // Closed form of the interface part: 10 / (8 pi).
  const double interface = testing::sine_interface_integral(10.0, 8);
  CHECK(interface == doctest::Approx(10.0 / (8.0 * M_PI)).epsilon(1e-12));
}

TEST_CASE("mean-square error rates") {
  // RMS error of the randomized rule against fixed references, fitted over
  // levels 2..5 with a modest replication count; slope near 1 for the
  // singular forcing and near 2 for the smooth one.
  const ForcingTerm f1 = forcing_f1();
  const ForcingTerm f2 = forcing_f2();
  const double ref_f1 = testing::diagonal_power_integral(0.49, 48) +
                        testing::sine_interface_integral(10.0, 8);
  const double ref_f2 = 2.0 / 9.0;

  std::vector<double> hs, rms_f1, rms_f2;
  const int m = 400;
  for (int n = 2; n <= 5; ++n) {
    const TriangleMesh mesh = build_structured_mesh(n);
    double se1 = 0.0, se2 = 0.0;
    for (int rep = 0; rep < m; ++rep) {
      const QuadratureDraw draw = draw_uniform_points(mesh, 77, rep, StreamPurpose::quadrature);
      const double q1 = monte_carlo_quadrature(f1.evaluate, mesh, draw);
      const double q2 = monte_carlo_quadrature(f2.evaluate, mesh, draw);
      se1 += (q1 - ref_f1) * (q1 - ref_f1);
      se2 += (q2 - ref_f2) * (q2 - ref_f2);
    }
    hs.push_back(mesh.grid_spacing);
    rms_f1.push_back(std::sqrt(se1 / m));
    rms_f2.push_back(std::sqrt(se2 / m));
  }
  CHECK(fit_convergence_order(hs, rms_f1) >= 0.8);
  CHECK(fit_convergence_order(hs, rms_f2) >= 1.7);
}

} // TEST_SUITE
