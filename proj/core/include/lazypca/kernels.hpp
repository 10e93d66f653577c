#pragma once

// Multiplication and norm kernels shared by the reducers, metrics, and tests.
//
// Every kernel here is bitwise deterministic for a given input, independent of
// the configured thread count: parallelism is always over output columns (or
// disjoint column tiles), and the accumulation order for each output element is
// a fixed function of the input shapes. Internal tile sizes depend only on the
// matrix dimensions, never on thread count or machine state.

#include "lazypca/dense_matrix.hpp"
#include "lazypca/sparse_matrix.hpp"

namespace lazypca {

// out = a * b, sparse times dense.
DenseMatrix spmm(const SparseMatrix& a, const DenseMatrix& b);

// out = a * b with both factors sparse; the product is returned dense because
// in this library's use (data times projection) it is essentially full.
DenseMatrix spmm(const SparseMatrix& a, const SparseMatrix& b);

// out = a^T * x, dense (m x l) transposed against sparse (m x n) -> (l x n).
// Row-blocked: a is repacked row-major one block at a time so the inner update
// is a contiguous length-l axpy per stored entry of x.
DenseMatrix gemm_t(const DenseMatrix& a, const SparseMatrix& x);

// acc += a^T * x. gemm_t is exactly: zeros, then one gemm_t_add. The streaming
// reducers accumulate per-block products through this same routine, which is
// why a single-block stream reproduces the in-core result bit for bit.
void gemm_t_add(const DenseMatrix& a, const SparseMatrix& x, DenseMatrix& acc);

// Dense products, column-major friendly, used at small and moderate sizes.
DenseMatrix dense_gemm(const DenseMatrix& a, const DenseMatrix& b);   // a * b
DenseMatrix dense_at_b(const DenseMatrix& a, const DenseMatrix& b);   // a^T * b
DenseMatrix dense_aat(const DenseMatrix& a);                          // a * a^T (bitwise symmetric)

// y = a * x and y = a^T * x for contiguous vectors.
void spmv(const SparseMatrix& a, const double* x, double* y);
void spmv_t(const SparseMatrix& a, const double* x, double* y);

double frobenius_norm(const DenseMatrix& a);
double frobenius_norm(const SparseMatrix& a);

}  // namespace lazypca
