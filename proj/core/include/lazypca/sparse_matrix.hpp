#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "lazypca/dense_matrix.hpp"
#include "lazypca/threading.hpp"

namespace lazypca {

struct Triplet {
  index_t row, col;
  double value;
};

// Compressed sparse column matrix. Canonical form is an invariant of the type:
// col_ptr is non-decreasing with col_ptr[0] == 0 and col_ptr[cols] == nnz,
// row indices are strictly increasing within each column, and no stored value
// is an exact zero. from_triplets sums duplicates and drops zeros to get there.
class SparseMatrix {
 public:
  SparseMatrix() : rows_(0), cols_(0), col_ptr_{0} {}

  static SparseMatrix from_triplets(index_t rows, index_t cols, std::vector<Triplet> entries);
  // Adopts CSC arrays after validating the canonical-form invariants.
  static SparseMatrix from_csc(index_t rows, index_t cols, std::vector<index_t> col_ptr,
                               std::vector<index_t> row_idx, std::vector<double> values);
  static SparseMatrix identity(index_t n);

  index_t rows() const { return rows_; }
  index_t cols() const { return cols_; }
  index_t nnz() const { return static_cast<index_t>(values_.size()); }
  double density() const;

  const std::vector<index_t>& col_ptr() const { return col_ptr_; }
  const std::vector<index_t>& row_idx() const { return row_idx_; }
  const std::vector<double>& values() const { return values_; }

  DenseMatrix to_dense() const;

  // Rows [row_begin, row_end) as a new matrix with row indices shifted to 0.
  SparseMatrix slice_rows(index_t row_begin, index_t row_end) const;

 private:
  index_t rows_, cols_;
  std::vector<index_t> col_ptr_, row_idx_;
  std::vector<double> values_;
};

// One horizontal slice of a row-partitioned matrix. Slice s covers rows
// [s*block_rows, min((s+1)*block_rows, m)).
struct RowBlock {
  index_t slice_index = 0;
  SparseMatrix block;
};

// Source of consecutive row blocks, produced lazily so that only one block is
// resident at a time. next() returns blocks with slice_index 0,1,2,... and
// std::nullopt after the last one.
class RowBlockStream {
 public:
  virtual ~RowBlockStream() = default;
  virtual std::optional<RowBlock> next() = 0;
};

// Lazy row partition of an in-memory matrix.
class SliceRowBlockStream final : public RowBlockStream {
 public:
  SliceRowBlockStream(const SparseMatrix& x, index_t block_rows);
  std::optional<RowBlock> next() override;

 private:
  const SparseMatrix* x_;
  index_t block_rows_, next_slice_, slice_count_;
};

// Eager partition into ceil(rows/block_rows) blocks; the final block may be short.
std::vector<RowBlock> split_rows(const SparseMatrix& x, index_t block_rows);

}  // namespace lazypca
