#include "lazypca/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lazypca/error.hpp"

namespace lazypca {

SparseMatrix SparseMatrix::from_triplets(index_t rows, index_t cols, std::vector<Triplet> entries) {
  if (rows < 0 || cols < 0) throw InvalidArgumentError("sparse matrix dimensions must be non-negative");
  for (const Triplet& t : entries) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
      throw DimensionError("triplet index (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                           ") outside " + std::to_string(rows) + "x" + std::to_string(cols));
    if (!std::isfinite(t.value)) throw InvalidArgumentError("triplet value is not finite");
  }
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.col != b.col ? a.col < b.col : a.row < b.row;
  });

  SparseMatrix out;
  out.rows_ = rows;
  out.cols_ = cols;
  out.col_ptr_.assign(static_cast<std::size_t>(cols) + 1, 0);
  out.row_idx_.reserve(entries.size());
  out.values_.reserve(entries.size());

  std::size_t i = 0;
  for (index_t j = 0; j < cols; ++j) {
    while (i < entries.size() && entries[i].col == j) {
      double sum = entries[i].value;
      const index_t row = entries[i].row;
      ++i;
      while (i < entries.size() && entries[i].col == j && entries[i].row == row) {
        sum += entries[i].value;  // duplicates are summed
        ++i;
      }
      if (sum != 0.0) {
        out.row_idx_.push_back(row);
        out.values_.push_back(sum);
      }
    }
    out.col_ptr_[static_cast<std::size_t>(j) + 1] = static_cast<index_t>(out.row_idx_.size());
  }
  return out;
}

SparseMatrix SparseMatrix::from_csc(index_t rows, index_t cols, std::vector<index_t> col_ptr,
                                    std::vector<index_t> row_idx, std::vector<double> values) {
  if (rows < 0 || cols < 0) throw InvalidArgumentError("sparse matrix dimensions must be non-negative");
  if (col_ptr.size() != static_cast<std::size_t>(cols) + 1)
    throw DimensionError("csc: col_ptr must have cols+1 entries");
  if (col_ptr.front() != 0) throw InvalidArgumentError("csc: col_ptr[0] must be 0");
  if (row_idx.size() != values.size()) throw DimensionError("csc: row_idx and values sizes differ");
  if (col_ptr.back() != static_cast<index_t>(values.size()))
    throw DimensionError("csc: col_ptr[cols] must equal nnz");
  for (index_t j = 0; j < cols; ++j) {
    const index_t lo = col_ptr[static_cast<std::size_t>(j)];
    const index_t hi = col_ptr[static_cast<std::size_t>(j) + 1];
    if (hi < lo) throw InvalidArgumentError("csc: col_ptr must be non-decreasing");
    for (index_t p = lo; p < hi; ++p) {
      const index_t r = row_idx[static_cast<std::size_t>(p)];
      if (r < 0 || r >= rows) throw DimensionError("csc: row index out of range in column " + std::to_string(j));
      if (p > lo && r <= row_idx[static_cast<std::size_t>(p) - 1])
        throw InvalidArgumentError("csc: row indices must be strictly increasing in column " + std::to_string(j));
      const double v = values[static_cast<std::size_t>(p)];
      if (v == 0.0) throw InvalidArgumentError("csc: explicit zero stored in column " + std::to_string(j));
      if (!std::isfinite(v)) throw InvalidArgumentError("csc: non-finite value in column " + std::to_string(j));
    }
  }
  SparseMatrix out;
  out.rows_ = rows;
  out.cols_ = cols;
  out.col_ptr_ = std::move(col_ptr);
  out.row_idx_ = std::move(row_idx);
  out.values_ = std::move(values);
  return out;
}

SparseMatrix SparseMatrix::identity(index_t n) {
  std::vector<index_t> ptr(static_cast<std::size_t>(n) + 1), idx(static_cast<std::size_t>(n));
  std::vector<double> val(static_cast<std::size_t>(n), 1.0);
  for (index_t j = 0; j <= n; ++j) ptr[static_cast<std::size_t>(j)] = j;
  for (index_t j = 0; j < n; ++j) idx[static_cast<std::size_t>(j)] = j;
  return from_csc(n, n, std::move(ptr), std::move(idx), std::move(val));
}

double SparseMatrix::density() const {
  const double cells = static_cast<double>(rows_) * static_cast<double>(cols_);
  return cells == 0.0 ? 0.0 : static_cast<double>(nnz()) / cells;
}

DenseMatrix SparseMatrix::to_dense() const {
  DenseMatrix out(rows_, cols_);
  for (index_t j = 0; j < cols_; ++j)
    for (index_t p = col_ptr_[static_cast<std::size_t>(j)]; p < col_ptr_[static_cast<std::size_t>(j) + 1]; ++p)
      out(row_idx_[static_cast<std::size_t>(p)], j) = values_[static_cast<std::size_t>(p)];
  return out;
}

SparseMatrix SparseMatrix::slice_rows(index_t row_begin, index_t row_end) const {
  if (row_begin < 0 || row_end < row_begin || row_end > rows_)
    throw DimensionError("slice_rows: bad row range [" + std::to_string(row_begin) + ", " +
                         std::to_string(row_end) + ") for " + std::to_string(rows_) + " rows");
  SparseMatrix out;
  out.rows_ = row_end - row_begin;
  out.cols_ = cols_;
  out.col_ptr_.assign(static_cast<std::size_t>(cols_) + 1, 0);
  for (index_t j = 0; j < cols_; ++j) {
    const auto begin = row_idx_.begin() + col_ptr_[static_cast<std::size_t>(j)];
    const auto end = row_idx_.begin() + col_ptr_[static_cast<std::size_t>(j) + 1];
    const auto lo = std::lower_bound(begin, end, row_begin);
    const auto hi = std::lower_bound(lo, end, row_end);
    for (auto it = lo; it != hi; ++it) {
      out.row_idx_.push_back(*it - row_begin);
      out.values_.push_back(values_[static_cast<std::size_t>(it - row_idx_.begin())]);
    }
    out.col_ptr_[static_cast<std::size_t>(j) + 1] = static_cast<index_t>(out.row_idx_.size());
  }
  return out;
}

SliceRowBlockStream::SliceRowBlockStream(const SparseMatrix& x, index_t block_rows)
    : x_(&x), block_rows_(block_rows), next_slice_(0) {
  if (block_rows < 1) throw InvalidArgumentError("block_rows must be at least 1");
  slice_count_ = (x.rows() + block_rows - 1) / block_rows;
}

std::optional<RowBlock> SliceRowBlockStream::next() {
  if (next_slice_ >= slice_count_) return std::nullopt;
  const index_t lo = next_slice_ * block_rows_;
  index_t hi = lo + block_rows_;
  if (hi > x_->rows()) hi = x_->rows();
  RowBlock out{next_slice_, x_->slice_rows(lo, hi)};
  ++next_slice_;
  return out;
}

std::vector<RowBlock> split_rows(const SparseMatrix& x, index_t block_rows) {
  SliceRowBlockStream stream(x, block_rows);
  std::vector<RowBlock> out;
  while (auto blk = stream.next()) out.push_back(std::move(*blk));
  return out;
}

}  // namespace lazypca
