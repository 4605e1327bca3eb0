#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "randfem/assembly.hpp"
#include "randfem/geometry.hpp"

namespace randfem {

inline double sign_of(double x) {
  if (x < 0.0) return -1.0;
  if (x > 0.0) return 1.0;
  return 0.0;
}

enum class ForcingId { f1, f1_eps, f2, constant };

struct ForcingTerm {
  ForcingId id = ForcingId::f2;
  std::string name = "f2";
  std::function<double(Point2)> evaluate;
};

// Singular but square-integrable: |x-y|^-q + 10 sin(8 pi x) sgn(2y - x) with
// q = 0.49. Evaluates to +inf on the line x = y.
inline ForcingTerm forcing_f1() {
  return {ForcingId::f1, "f1", [](Point2 p) {
            return std::pow(std::abs(p.x - p.y), -0.49) +
                   10.0 * std::sin(8.0 * M_PI * p.x) * sign_of(2.0 * p.y - p.x);
          }};
}

// f1 with |x-y| replaced by (eps + |x-y|), eps the double machine epsilon;
// finite everywhere but of size eps^-0.49 on the singular line.
inline ForcingTerm forcing_f1_eps() {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  return {ForcingId::f1_eps, "f1eps", [](Point2 p) {
            return std::pow(eps + std::abs(p.x - p.y), -0.49) +
                   10.0 * std::sin(8.0 * M_PI * p.x) * sign_of(2.0 * p.y - p.x);
          }};
}

// Smooth polynomial forcing 8 x (1-x) y (1-y).
inline ForcingTerm forcing_f2() {
  return {ForcingId::f2, "f2", [](Point2 p) {
            return 8.0 * p.x * (1.0 - p.x) * p.y * (1.0 - p.y);
          }};
}

inline ForcingTerm forcing_constant(double c = 1.0) {
  return {ForcingId::constant, "const", [c](Point2) { return c; }};
}

inline CoefficientField sigma_unit() {
  CoefficientField field;
  field.evaluate = [](Point2) { return 1.0; };
  field.lower_bound = 1.0;
  field.unit = true;
  field.name = "unit";
  return field;
}

inline CoefficientField sigma_sine() {
  CoefficientField field;
  field.evaluate = [](Point2 p) {
    return 1.0 + 0.5 * std::sin(M_PI * p.x) * std::sin(M_PI * p.y);
  };
  field.lower_bound = 1.0;
  field.unit = false;
  field.name = "sine";
  return field;
}

} // namespace randfem
