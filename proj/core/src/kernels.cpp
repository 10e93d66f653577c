#include "lazypca/kernels.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "lazypca/error.hpp"

namespace lazypca {

namespace {

void check_inner(index_t a_cols, index_t b_rows, const char* op) {
  if (a_cols != b_rows)
    throw DimensionError(std::string(op) + ": inner dimensions differ (" + std::to_string(a_cols) +
                         " vs " + std::to_string(b_rows) + ")");
}

// Row-block height for gemm_t packing. Fixed function of l alone so the
// accumulation schedule is reproducible; aims at ~8 MB of scratch.
index_t gemm_t_block_rows(index_t l) {
  index_t rb = l > 0 ? (1 << 20) / l : 8192;
  if (rb < 256) rb = 256;
  if (rb > 8192) rb = 8192;
  return rb;
}

}  // namespace

DenseMatrix spmm(const SparseMatrix& a, const DenseMatrix& b) {
  check_inner(a.cols(), b.rows(), "spmm");
  DenseMatrix out(a.rows(), b.cols());
  const auto& ptr = a.col_ptr();
  const auto& idx = a.row_idx();
  const auto& val = a.values();
  parallel_for(0, b.cols(), [&](index_t c) {
    double* ocol = out.col(c);
    const double* bcol = b.col(c);
    for (index_t j = 0; j < a.cols(); ++j) {
      const double w = bcol[j];
      if (w == 0.0) continue;
      for (index_t p = ptr[static_cast<std::size_t>(j)]; p < ptr[static_cast<std::size_t>(j) + 1]; ++p)
        ocol[idx[static_cast<std::size_t>(p)]] += val[static_cast<std::size_t>(p)] * w;
    }
  });
  return out;
}

DenseMatrix spmm(const SparseMatrix& a, const SparseMatrix& b) {
  check_inner(a.cols(), b.rows(), "spmm");
  DenseMatrix out(a.rows(), b.cols());
  const auto& aptr = a.col_ptr();
  const auto& aidx = a.row_idx();
  const auto& aval = a.values();
  const auto& bptr = b.col_ptr();
  const auto& bidx = b.row_idx();
  const auto& bval = b.values();
  parallel_for(0, b.cols(), [&](index_t c) {
    double* ocol = out.col(c);
    for (index_t q = bptr[static_cast<std::size_t>(c)]; q < bptr[static_cast<std::size_t>(c) + 1]; ++q) {
      const index_t j = bidx[static_cast<std::size_t>(q)];
      const double w = bval[static_cast<std::size_t>(q)];
      for (index_t p = aptr[static_cast<std::size_t>(j)]; p < aptr[static_cast<std::size_t>(j) + 1]; ++p)
        ocol[aidx[static_cast<std::size_t>(p)]] += aval[static_cast<std::size_t>(p)] * w;
    }
  });
  return out;
}

void gemm_t_add(const DenseMatrix& a, const SparseMatrix& x, DenseMatrix& acc) {
  check_inner(a.rows(), x.rows(), "gemm_t");
  if (acc.rows() != a.cols() || acc.cols() != x.cols())
    throw DimensionError("gemm_t: accumulator shape mismatch");
  const index_t m = a.rows();
  const index_t l = a.cols();
  const index_t n = x.cols();
  const index_t rb = gemm_t_block_rows(l);

  std::vector<double> scratch(static_cast<std::size_t>(rb) * static_cast<std::size_t>(l));
  std::vector<index_t> cursor(x.col_ptr().begin(), x.col_ptr().end() - 1);
  const auto& ptr = x.col_ptr();
  const auto& idx = x.row_idx();
  const auto& val = x.values();

  for (index_t r0 = 0; r0 < m; r0 += rb) {
    const index_t r1 = r0 + rb < m ? r0 + rb : m;
    // Pack rows [r0, r1) of a into row-major scratch, tiled to keep both the
    // column reads and the strided writes cache-resident.
    constexpr index_t tile = 64;
    parallel_for(0, l, [&](index_t c) {
      const double* acol = a.col(c) + r0;
      for (index_t i = 0; i < r1 - r0; ++i) scratch[static_cast<std::size_t>(i * l + c)] = acol[i];
    }, tile);
    parallel_for(0, n, [&](index_t j) {
      index_t p = cursor[static_cast<std::size_t>(j)];
      const index_t pend = ptr[static_cast<std::size_t>(j) + 1];
      double* fcol = acc.col(j);
      while (p < pend && idx[static_cast<std::size_t>(p)] < r1) {
        const double v = val[static_cast<std::size_t>(p)];
        const double* arow = scratch.data() + static_cast<std::size_t>(idx[static_cast<std::size_t>(p)] - r0) * l;
        for (index_t c = 0; c < l; ++c) fcol[c] += v * arow[c];
        ++p;
      }
      cursor[static_cast<std::size_t>(j)] = p;
    });
  }
}

DenseMatrix gemm_t(const DenseMatrix& a, const SparseMatrix& x) {
  DenseMatrix out(a.cols(), x.cols());
  gemm_t_add(a, x, out);
  return out;
}

DenseMatrix dense_gemm(const DenseMatrix& a, const DenseMatrix& b) {
  check_inner(a.cols(), b.rows(), "dense_gemm");
  DenseMatrix out(a.rows(), b.cols());
  parallel_for(0, b.cols(), [&](index_t c) {
    double* ocol = out.col(c);
    const double* bcol = b.col(c);
    for (index_t j = 0; j < a.cols(); ++j) {
      const double w = bcol[j];
      if (w == 0.0) continue;
      const double* acol = a.col(j);
      for (index_t i = 0; i < a.rows(); ++i) ocol[i] += w * acol[i];
    }
  });
  return out;
}

DenseMatrix dense_at_b(const DenseMatrix& a, const DenseMatrix& b) {
  check_inner(a.rows(), b.rows(), "dense_at_b");
  DenseMatrix out(a.cols(), b.cols());
  const index_t m = a.rows();
  parallel_for(0, b.cols(), [&](index_t c) {
    const double* bcol = b.col(c);
    double* ocol = out.col(c);
    for (index_t r = 0; r < a.cols(); ++r) {
      const double* acol = a.col(r);
      double dot = 0.0;
      for (index_t i = 0; i < m; ++i) dot += acol[i] * bcol[i];
      ocol[r] = dot;
    }
  });
  return out;
}

DenseMatrix dense_aat(const DenseMatrix& a) {
  const index_t l = a.rows();
  const index_t n = a.cols();
  DenseMatrix out(l, l);
  // Tiles of output columns; within a tile, one pass over a. Each out(r, c)
  // accumulates in ascending j order regardless of tiling or threads, and the
  // (r, c) / (c, r) accumulation sequences are identical, so the result is
  // bitwise symmetric.
  constexpr index_t tile = 64;
  const index_t tiles = (l + tile - 1) / tile;
  parallel_for(0, tiles, [&](index_t t) {
    const index_t c0 = t * tile;
    const index_t c1 = c0 + tile < l ? c0 + tile : l;
    for (index_t j = 0; j < n; ++j) {
      const double* acol = a.col(j);
      for (index_t c = c0; c < c1; ++c) {
        const double w = acol[c];
        if (w == 0.0) continue;
        double* ocol = out.col(c);
        for (index_t r = 0; r < l; ++r) ocol[r] += w * acol[r];
      }
    }
  });
  return out;
}

void spmv(const SparseMatrix& a, const double* x, double* y) {
  for (index_t i = 0; i < a.rows(); ++i) y[i] = 0.0;
  const auto& ptr = a.col_ptr();
  const auto& idx = a.row_idx();
  const auto& val = a.values();
  for (index_t j = 0; j < a.cols(); ++j) {
    const double w = x[j];
    if (w == 0.0) continue;
    for (index_t p = ptr[static_cast<std::size_t>(j)]; p < ptr[static_cast<std::size_t>(j) + 1]; ++p)
      y[idx[static_cast<std::size_t>(p)]] += val[static_cast<std::size_t>(p)] * w;
  }
}

void spmv_t(const SparseMatrix& a, const double* x, double* y) {
  const auto& ptr = a.col_ptr();
  const auto& idx = a.row_idx();
  const auto& val = a.values();
  for (index_t j = 0; j < a.cols(); ++j) {
    double dot = 0.0;
    for (index_t p = ptr[static_cast<std::size_t>(j)]; p < ptr[static_cast<std::size_t>(j) + 1]; ++p)
      dot += val[static_cast<std::size_t>(p)] * x[idx[static_cast<std::size_t>(p)]];
    y[j] = dot;
  }
}

double frobenius_norm(const DenseMatrix& a) {
  double sum = 0.0;
  const double* d = a.data();
  const std::size_t count = static_cast<std::size_t>(a.rows()) * static_cast<std::size_t>(a.cols());
  for (std::size_t i = 0; i < count; ++i) sum += d[i] * d[i];
  return std::sqrt(sum);
}

double frobenius_norm(const SparseMatrix& a) {
  double sum = 0.0;
  for (double v : a.values()) sum += v * v;
  return std::sqrt(sum);
}

}  // namespace lazypca
