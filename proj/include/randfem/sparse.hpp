#pragma once

#include <iosfwd>
#include <vector>

namespace randfem {

// Coefficient vector over the interior nodes of a mesh.
using FemCoefficients = std::vector<double>;

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

// Sparse symmetric positive (semi)definite matrix in compressed row form.
// Column indices are sorted within each row; duplicate triplets are summed
// during construction in a fixed order, so assembly is reproducible.
class SparseSpdMatrix {
public:
  SparseSpdMatrix() = default;

  static SparseSpdMatrix from_triplets(int dimension, std::vector<Triplet> triplets);

  int dimension() const { return dimension_; }
  int nonzeros() const { return static_cast<int>(values_.size()); }

  // y = A x
  void multiply(const FemCoefficients& x, FemCoefficients& y) const;

  // v^T A v
  double quadratic_form(const FemCoefficients& v) const;

  // Stored value at (i, j), zero if the entry is absent.
  double entry(int i, int j) const;

  // max |A_ij - A_ji| over stored entries.
  double max_asymmetry() const;

  // Coordinate text format: one "row col value" per line, sorted by
  // (row, col), 17 significant digits.
  void write_coordinate(std::ostream& out) const;

  const std::vector<int>& row_pointers() const { return row_ptr_; }
  const std::vector<int>& column_indices() const { return col_idx_; }
  const std::vector<double>& values() const { return values_; }

private:
  int dimension_ = 0;
  std::vector<int> row_ptr_;
  std::vector<int> col_idx_;
  std::vector<double> values_;
};

} // namespace randfem
