#pragma once

// File formats.
//
// Sparse matrices travel as Matrix Market coordinate files (real, general,
// 1-based indices); duplicate entries are summed and explicit zeros dropped on
// read, matching the canonical CSC form. Dense matrices travel either as Matrix
// Market array files (column-major) or as CSV (one row per line). All values
// are written with enough digits to round-trip exactly, and readers reject
// non-finite values, so save/load is lossless and byte-stable.

#include <iosfwd>
#include <string>

#include "lazypca/dense_matrix.hpp"
#include "lazypca/sparse_matrix.hpp"

namespace lazypca {

SparseMatrix read_sparse_matrix_market(std::istream& in);
SparseMatrix read_sparse_matrix_market_file(const std::string& path);
void write_sparse_matrix_market(const SparseMatrix& x, std::ostream& out);
void write_sparse_matrix_market_file(const SparseMatrix& x, const std::string& path);

DenseMatrix read_dense_matrix_market(std::istream& in);
DenseMatrix read_dense_matrix_market_file(const std::string& path);
void write_dense_matrix_market(const DenseMatrix& x, std::ostream& out);
void write_dense_matrix_market_file(const DenseMatrix& x, const std::string& path);

DenseMatrix read_dense_csv(std::istream& in);
DenseMatrix read_dense_csv_file(const std::string& path);
void write_dense_csv(const DenseMatrix& x, std::ostream& out);
void write_dense_csv_file(const DenseMatrix& x, const std::string& path);

// Dense to sparse, dropping exact zeros.
SparseMatrix sparsify(const DenseMatrix& x);

// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

// Row blocks straight from a Matrix Market coordinate file with only one block
// resident at a time. Construction runs a counting pass (validating the file
// and recording per-block entry counts); each next() then scans the file once
// more, keeping only the rows of the current block, into storage sized from
// the counting pass.
class MatrixMarketRowBlockStream final : public RowBlockStream {
 public:
  MatrixMarketRowBlockStream(const std::string& path, index_t block_rows);
  std::optional<RowBlock> next() override;
  index_t rows() const { return rows_; }
  index_t cols() const { return cols_; }

 private:
  std::string path_;
  index_t block_rows_, rows_ = 0, cols_ = 0;
  index_t next_slice_ = 0, slice_count_ = 0;
  std::vector<index_t> block_nnz_;
};

// Row blocks from a CSV file; rows are contiguous on disk so this is a single
// forward pass.
class CsvRowBlockStream final : public RowBlockStream {
 public:
  CsvRowBlockStream(const std::string& path, index_t block_rows);
  ~CsvRowBlockStream();
  std::optional<RowBlock> next() override;
  index_t cols() const { return cols_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  index_t block_rows_, cols_ = 0, next_slice_ = 0;
};

}  // namespace lazypca
