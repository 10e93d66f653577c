#include "lazypca/lazy_projector.hpp"

#include <cmath>
#include <string>

#include "lazypca/error.hpp"
#include "lazypca/kernels.hpp"
#include "lazypca/threading.hpp"

namespace lazypca {

Cholesky::Cholesky(const DenseMatrix& g) {
  if (g.rows() != g.cols())
    throw DimensionError("cholesky: matrix must be square, got " + std::to_string(g.rows()) + "x" +
                         std::to_string(g.cols()));
  const index_t n = g.rows();
  double max_diag = 0.0;
  for (index_t j = 0; j < n; ++j) max_diag = std::max(max_diag, g(j, j));
  const double pivot_tol = 1e-14 * max_diag;

  l_ = DenseMatrix(n, n);
  for (index_t j = 0; j < n; ++j) {
    double d = g(j, j);
    for (index_t r = 0; r < j; ++r) d -= l_(j, r) * l_(j, r);
    if (d <= pivot_tol)
      throw RankDeficiencyError("cholesky: pivot " + std::to_string(j) +
                                    " is not positive definite (value " + std::to_string(d) + ")",
                                j);
    const double djj = std::sqrt(d);
    l_(j, j) = djj;
    for (index_t i = j + 1; i < n; ++i) {
      double v = g(i, j);
      for (index_t r = 0; r < j; ++r) v -= l_(i, r) * l_(j, r);
      l_(i, j) = v / djj;
    }
  }
}

void Cholesky::solve_lower_in_place(DenseMatrix& b) const {
  const index_t n = l_.rows();
  if (b.rows() != n) throw DimensionError("cholesky solve: row count mismatch");
  parallel_for(0, b.cols(), [&](index_t c) {
    double* col = b.col(c);
    for (index_t i = 0; i < n; ++i) {
      double v = col[i];
      for (index_t r = 0; r < i; ++r) v -= l_(i, r) * col[r];
      col[i] = v / l_(i, i);
    }
  }, 8);
}

void Cholesky::solve_in_place(DenseMatrix& b) const {
  const index_t n = l_.rows();
  if (b.rows() != n) throw DimensionError("cholesky solve: row count mismatch");
  parallel_for(0, b.cols(), [&](index_t c) {
    double* col = b.col(c);
    for (index_t i = 0; i < n; ++i) {  // L y = b
      double v = col[i];
      for (index_t r = 0; r < i; ++r) v -= l_(i, r) * col[r];
      col[i] = v / l_(i, i);
    }
    for (index_t i = n - 1; i >= 0; --i) {  // L^T x = y
      double v = col[i];
      for (index_t r = i + 1; r < n; ++r) v -= l_(r, i) * col[r];
      col[i] = v / l_(i, i);
    }
  }, 8);
}

DenseMatrix apply_lazy_projector(const DenseMatrix& u, const SparseMatrix& x) {
  if (u.rows() != x.rows())
    throw DimensionError("apply_lazy_projector: U has " + std::to_string(u.rows()) +
                         " rows but X has " + std::to_string(x.rows()));
  const DenseMatrix gram = dense_at_b(u, u);
  const Cholesky chol(gram);

  const DenseMatrix f = gemm_t(u, x);
  DenseMatrix w = f;
  chol.solve_in_place(w);

  // One refinement step: solve again against the residual of the Gram system.
  DenseMatrix residual = dense_gemm(gram, w);
  for (index_t c = 0; c < residual.cols(); ++c) {
    double* rc = residual.col(c);
    const double* fc = f.col(c);
    for (index_t i = 0; i < residual.rows(); ++i) rc[i] = fc[i] - rc[i];
  }
  chol.solve_in_place(residual);
  for (index_t c = 0; c < w.cols(); ++c) {
    double* wc = w.col(c);
    const double* rc = residual.col(c);
    for (index_t i = 0; i < w.rows(); ++i) wc[i] += rc[i];
  }
  return dense_gemm(u, w);
}

}  // namespace lazypca
