#pragma once

#include <vector>

#include "lazypca/threading.hpp"

namespace lazypca {

// Column-major dense matrix of doubles. Entries are expected to stay finite;
// file readers reject NaN/Inf and the kernels cannot manufacture them from
// finite inputs.
class DenseMatrix {
 public:
  DenseMatrix() : rows_(0), cols_(0) {}
  DenseMatrix(index_t rows, index_t cols);  // zero-initialized
  DenseMatrix(index_t rows, index_t cols, std::vector<double> column_major);

  static DenseMatrix identity(index_t n);

  index_t rows() const { return rows_; }
  index_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double& operator()(index_t i, index_t j) { return data_[static_cast<std::size_t>(j * rows_ + i)]; }
  double operator()(index_t i, index_t j) const { return data_[static_cast<std::size_t>(j * rows_ + i)]; }

  double* col(index_t j) { return data_.data() + j * rows_; }
  const double* col(index_t j) const { return data_.data() + j * rows_; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  DenseMatrix transposed() const;

  // Largest |a_ij - a_ji| over all pairs; matrix must be square.
  double max_asymmetry() const;

 private:
  index_t rows_, cols_;
  std::vector<double> data_;
};

}  // namespace lazypca
