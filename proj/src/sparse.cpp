#include "randfem/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "randfem/errors.hpp"

namespace randfem {

SparseSpdMatrix SparseSpdMatrix::from_triplets(int dimension, std::vector<Triplet> triplets) {
  if (dimension <= 0) throw param_error("matrix dimension must be positive");
  for (const Triplet& t : triplets)
    if (t.row < 0 || t.row >= dimension || t.col < 0 || t.col >= dimension)
      throw param_error("triplet index out of range");

  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  SparseSpdMatrix m;
  m.dimension_ = dimension;
  m.row_ptr_.assign(dimension + 1, 0);
  for (std::size_t i = 0; i < triplets.size();) {
    const int row = triplets[i].row;
    const int col = triplets[i].col;
    double sum = 0.0;
    for (; i < triplets.size() && triplets[i].row == row && triplets[i].col == col; ++i)
      sum += triplets[i].value;
    m.col_idx_.push_back(col);
    m.values_.push_back(sum);
    ++m.row_ptr_[row + 1];
  }
  for (int r = 0; r < dimension; ++r) m.row_ptr_[r + 1] += m.row_ptr_[r];
  return m;
}

void SparseSpdMatrix::multiply(const FemCoefficients& x, FemCoefficients& y) const {
  if (static_cast<int>(x.size()) != dimension_)
    throw param_error("vector length does not match matrix dimension");
  y.assign(dimension_, 0.0);
  for (int r = 0; r < dimension_; ++r) {
    double sum = 0.0;
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) sum += values_[k] * x[col_idx_[k]];
    y[r] = sum;
  }
}

double SparseSpdMatrix::quadratic_form(const FemCoefficients& v) const {
  if (static_cast<int>(v.size()) != dimension_)
    throw param_error("vector length does not match matrix dimension");
  double total = 0.0;
  for (int r = 0; r < dimension_; ++r) {
    double sum = 0.0;
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) sum += values_[k] * v[col_idx_[k]];
    total += v[r] * sum;
  }
  return total;
}

double SparseSpdMatrix::entry(int i, int j) const {
  if (i < 0 || i >= dimension_ || j < 0 || j >= dimension_)
    throw param_error("matrix index out of range");
  const auto begin = col_idx_.begin() + row_ptr_[i];
  const auto end = col_idx_.begin() + row_ptr_[i + 1];
  const auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) return 0.0;
  return values_[row_ptr_[i] + (it - begin)];
}

double SparseSpdMatrix::max_asymmetry() const {
  double worst = 0.0;
  for (int r = 0; r < dimension_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      worst = std::max(worst, std::abs(values_[k] - entry(col_idx_[k], r)));
  return worst;
}

void SparseSpdMatrix::write_coordinate(std::ostream& out) const {
  char buf[64];
  for (int r = 0; r < dimension_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", r, col_idx_[k], values_[k]);
      out << buf;
    }
}

} // namespace randfem
