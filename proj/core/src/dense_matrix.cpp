#include "lazypca/dense_matrix.hpp"

#include <cmath>
#include <cstdlib>

#include "lazypca/error.hpp"

namespace lazypca {

DenseMatrix::DenseMatrix(index_t rows, index_t cols) : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw InvalidArgumentError("dense matrix dimensions must be non-negative");
  data_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0.0);
}

DenseMatrix::DenseMatrix(index_t rows, index_t cols, std::vector<double> column_major)
    : rows_(rows), cols_(cols), data_(std::move(column_major)) {
  if (rows < 0 || cols < 0) throw InvalidArgumentError("dense matrix dimensions must be non-negative");
  if (data_.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
    throw DimensionError("dense matrix: buffer size does not match rows*cols");
}

DenseMatrix DenseMatrix::identity(index_t n) {
  DenseMatrix eye(n, n);
  for (index_t i = 0; i < n; ++i) eye(i, i) = 1.0;
  return eye;
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix out(cols_, rows_);
  constexpr index_t tile = 64;
  for (index_t j0 = 0; j0 < cols_; j0 += tile)
    for (index_t i0 = 0; i0 < rows_; i0 += tile) {
      const index_t jmax = j0 + tile < cols_ ? j0 + tile : cols_;
      const index_t imax = i0 + tile < rows_ ? i0 + tile : rows_;
      for (index_t j = j0; j < jmax; ++j)
        for (index_t i = i0; i < imax; ++i) out(j, i) = (*this)(i, j);
    }
  return out;
}

double DenseMatrix::max_asymmetry() const {
  if (rows_ != cols_) throw DimensionError("max_asymmetry requires a square matrix");
  double worst = 0.0;
  for (index_t j = 0; j < cols_; ++j)
    for (index_t i = j + 1; i < rows_; ++i) {
      const double gap = std::abs((*this)(i, j) - (*this)(j, i));
      if (gap > worst) worst = gap;
    }
  return worst;
}

}  // namespace lazypca
