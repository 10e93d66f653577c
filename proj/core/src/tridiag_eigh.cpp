#include "lazypca/tridiag_eigh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "lazypca/error.hpp"
#include "lazypca/kernels.hpp"

namespace lazypca {

namespace {

// Householder reduction to tridiagonal form, eliminating columns from the
// right. After step i the trailing rows/columns i..n-1 are in final
// tridiagonal shape: d is not read yet (the diagonal survives in `a`), e[i]
// holds the subdiagonal entry coupling i-1 and i, and rows 0..i-2 of column i
// hold the (scaled) Householder vector u with its Gram factor in h[i]
// (h = u'u / 2; h == 0 marks a step that needed no reflector). The active
// leading block stays symmetric, so every access below runs down a column.
void householder_tridiag(DenseMatrix& a, std::vector<double>& e, std::vector<double>& h) {
  const index_t n = a.rows();
  std::vector<double> p(static_cast<std::size_t>(n));
  std::vector<double> q(static_cast<std::size_t>(n));
  for (index_t i = n - 1; i >= 1; --i) {
    const index_t m = i;  // length of the column piece to eliminate
    double* const ui = a.col(i);
    if (m == 1) {  // nothing above the subdiagonal entry
      e[static_cast<std::size_t>(i)] = ui[0];
      h[static_cast<std::size_t>(i)] = 0.0;
      continue;
    }
    double scale = 0.0;
    for (index_t k = 0; k < m; ++k) scale += std::abs(ui[k]);
    if (scale == 0.0) {  // column already reduced
      e[static_cast<std::size_t>(i)] = 0.0;
      h[static_cast<std::size_t>(i)] = 0.0;
      continue;
    }
    double sigma = 0.0;
    for (index_t k = 0; k < m; ++k) {
      ui[k] /= scale;
      sigma += ui[k] * ui[k];
    }
    const double f = ui[m - 1];
    const double g = f >= 0.0 ? -std::sqrt(sigma) : std::sqrt(sigma);
    e[static_cast<std::size_t>(i)] = scale * g;
    const double hh = sigma - f * g;  // = u'u / 2 once ui[m-1] is updated
    ui[m - 1] = f - g;
    h[static_cast<std::size_t>(i)] = hh;

    // p = A u / h over the active block, accumulated column by column.
    for (index_t r = 0; r < m; ++r) p[static_cast<std::size_t>(r)] = 0.0;
    for (index_t c = 0; c < m; ++c) {
      const double uc = ui[c];
      if (uc == 0.0) continue;
      const double* ac = a.col(c);
      for (index_t r = 0; r < m; ++r) p[static_cast<std::size_t>(r)] += ac[r] * uc;
    }
    double udotp = 0.0;
    for (index_t r = 0; r < m; ++r) {
      p[static_cast<std::size_t>(r)] /= hh;
      udotp += ui[r] * p[static_cast<std::size_t>(r)];
    }
    const double kk = udotp / (2.0 * hh);
    for (index_t r = 0; r < m; ++r)
      q[static_cast<std::size_t>(r)] = p[static_cast<std::size_t>(r)] - kk * ui[r];

    // A <- A - u q' - q u' on the active block (P A P with P = I - u u'/h).
    for (index_t c = 0; c < m; ++c) {
      double* ac = a.col(c);
      const double uc = ui[c];
      const double qc = q[static_cast<std::size_t>(c)];
      for (index_t r = 0; r < m; ++r) ac[r] -= ui[r] * qc + q[static_cast<std::size_t>(r)] * uc;
    }
  }
  e[0] = 0.0;
}

// Q = P_{n-1} ... P_1 built by applying the stored reflectors to the identity
// in construction order. When P_i is applied, columns c >= i of the product
// still have zeros throughout rows 0..i-1, so the reflector provably leaves
// them alone and the column loop stops at i.
DenseMatrix accumulate_q(const DenseMatrix& a, const std::vector<double>& h) {
  const index_t n = a.rows();
  DenseMatrix qmat = DenseMatrix::identity(n);
  for (index_t i = 1; i < n; ++i) {
    const double hi = h[static_cast<std::size_t>(i)];
    if (hi == 0.0) continue;
    const double* u = a.col(i);
    for (index_t c = 0; c < i; ++c) {
      double* qc = qmat.col(c);
      double s = 0.0;
      for (index_t r = 0; r < i; ++r) s += u[r] * qc[r];
      s /= hi;
      for (index_t r = 0; r < i; ++r) qc[r] -= s * u[r];
    }
  }
  return qmat;
}

// Implicit-shift QL on the tridiagonal (d, e), rotating the columns of z along
// so z ends up holding the eigenvectors of the original matrix. e arrives in
// the e[i]-couples-(i-1,i) convention and is shifted down one slot first.
void ql_implicit(std::vector<double>& d, std::vector<double>& e, DenseMatrix& z) {
  const index_t n = static_cast<index_t>(d.size());
  if (n < 2) return;
  for (index_t i = 1; i < n; ++i) e[static_cast<std::size_t>(i - 1)] = e[static_cast<std::size_t>(i)];
  e[static_cast<std::size_t>(n - 1)] = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();

  for (index_t l = 0; l < n; ++l) {
    int iter = 0;
    index_t m = l;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[static_cast<std::size_t>(m)]) +
                          std::abs(d[static_cast<std::size_t>(m + 1)]);
        if (std::abs(e[static_cast<std::size_t>(m)]) <= eps * dd) break;
      }
      if (m == l) break;
      if (iter++ == 60)
        throw ConvergenceError("tridiag_eigh: QL iteration failed to deflate eigenvalue " +
                                   std::to_string(l) + " after 60 steps",
                               std::abs(e[static_cast<std::size_t>(l)]));
      double g = (d[static_cast<std::size_t>(l + 1)] - d[static_cast<std::size_t>(l)]) /
                 (2.0 * e[static_cast<std::size_t>(l)]);
      double r = std::hypot(g, 1.0);
      g = d[static_cast<std::size_t>(m)] - d[static_cast<std::size_t>(l)] +
          e[static_cast<std::size_t>(l)] / (g + std::copysign(r, g));
      double s = 1.0;
      double c = 1.0;
      double pshift = 0.0;
      bool underflow = false;
      for (index_t i = m; i-- > l;) {
        double f = s * e[static_cast<std::size_t>(i)];
        const double b = c * e[static_cast<std::size_t>(i)];
        r = std::hypot(f, g);
        e[static_cast<std::size_t>(i + 1)] = r;
        if (r == 0.0) {  // rotation chain collapsed; split and restart the scan
          d[static_cast<std::size_t>(i + 1)] -= pshift;
          e[static_cast<std::size_t>(m)] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[static_cast<std::size_t>(i + 1)] - pshift;
        r = (d[static_cast<std::size_t>(i)] - g) * s + 2.0 * c * b;
        pshift = s * r;
        d[static_cast<std::size_t>(i + 1)] = g + pshift;
        g = c * r - b;
        double* zi = z.col(i);
        double* zi1 = z.col(i + 1);
        for (index_t k = 0; k < n; ++k) {
          f = zi1[k];
          zi1[k] = s * zi[k] + c * f;
          zi[k] = c * zi[k] - s * f;
        }
      }
      if (underflow) continue;
      d[static_cast<std::size_t>(l)] -= pshift;
      e[static_cast<std::size_t>(l)] = g;
      e[static_cast<std::size_t>(m)] = 0.0;
    } while (m != l);
  }
}

}  // namespace

EigenDecomposition tridiag_eigh(const DenseMatrix& a) {
  if (a.rows() != a.cols())
    throw DimensionError("tridiag_eigh: matrix must be square, got " + std::to_string(a.rows()) +
                         "x" + std::to_string(a.cols()));
  const index_t n = a.rows();
  EigenDecomposition out;
  if (n == 0) {
    out.eigenvectors = DenseMatrix(0, 0);
    return out;
  }
  const double fnorm = frobenius_norm(a);
  if (a.max_asymmetry() > 1e-10 * fnorm)
    throw InvalidArgumentError("tridiag_eigh: input is not symmetric (max |a_ij - a_ji| = " +
                               std::to_string(a.max_asymmetry()) + ")");

  DenseMatrix work = a;
  for (index_t j = 0; j < n; ++j)  // enforce exact symmetry, as jacobi_eigh does
    for (index_t i = j + 1; i < n; ++i) work(i, j) = work(j, i);

  std::vector<double> e(static_cast<std::size_t>(n), 0.0);
  std::vector<double> h(static_cast<std::size_t>(n), 0.0);
  householder_tridiag(work, e, h);
  DenseMatrix z = accumulate_q(work, h);
  std::vector<double> d(static_cast<std::size_t>(n));
  for (index_t i = 0; i < n; ++i) d[static_cast<std::size_t>(i)] = work(i, i);
  ql_implicit(d, e, z);

  std::vector<index_t> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), index_t{0});
  std::stable_sort(order.begin(), order.end(), [&](index_t x, index_t y) {
    return d[static_cast<std::size_t>(x)] > d[static_cast<std::size_t>(y)];
  });

  out.eigenvalues.resize(static_cast<std::size_t>(n));
  out.eigenvectors = DenseMatrix(n, n);
  for (index_t jj = 0; jj < n; ++jj) {
    const index_t src = order[static_cast<std::size_t>(jj)];
    out.eigenvalues[static_cast<std::size_t>(jj)] = d[static_cast<std::size_t>(src)];
    const double* from = z.col(src);
    double* to = out.eigenvectors.col(jj);
    for (index_t i = 0; i < n; ++i) to[i] = from[i];
  }
  return out;
}

}  // namespace lazypca
