#include "lazypca/qr.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "lazypca/error.hpp"
#include "lazypca/kernels.hpp"
#include "lazypca/threading.hpp"

namespace lazypca {

namespace {

// Reflectors are applied in panels of this many columns: the panel stays cache
// resident while each target column is swept once, instead of streaming the
// whole trailing matrix per reflector. The arithmetic per column is identical
// to the unblocked algorithm (reflectors hit each column in ascending order),
// so results do not depend on the panel width; 32 is a throughput choice.
constexpr index_t kPanel = 32;

// Applies reflector j (stored in w column j below the diagonal, implicit unit
// head) to one column. `head` is the row of the implicit 1.
inline void apply_reflector(const DenseMatrix& w, index_t head, double tau, double* col,
                            index_t m) {
  const double* v = w.col(head);
  double d = col[head];
  for (index_t i = head + 1; i < m; ++i) d += v[i] * col[i];
  d *= tau;
  col[head] -= d;
  for (index_t i = head + 1; i < m; ++i) col[i] -= d * v[i];
}

// In-place panel factorization of w (m x l). On return the strict lower part of
// each column holds the scaled reflector, the upper triangle including the
// diagonal holds R, and tau holds the reflector coefficients.
void factorize(DenseMatrix& w, std::vector<double>& tau, double fnorm) {
  const index_t m = w.rows();
  const index_t l = w.cols();
  const double rank_tol = 1e-12 * fnorm;
  tau.assign(static_cast<std::size_t>(l), 0.0);

  for (index_t p0 = 0; p0 < l; p0 += kPanel) {
    const index_t p1 = p0 + kPanel < l ? p0 + kPanel : l;
    for (index_t j = p0; j < p1; ++j) {
      double* colj = w.col(j);
      for (index_t r = p0; r < j; ++r)
        apply_reflector(w, r, tau[static_cast<std::size_t>(r)], colj, m);

      const double alpha = colj[j];
      double tail2 = 0.0;
      for (index_t i = j + 1; i < m; ++i) tail2 += colj[i] * colj[i];
      const double normx = std::sqrt(alpha * alpha + tail2);
      if (normx <= rank_tol)
        throw RankDeficiencyError(
            "qr: column " + std::to_string(j) + " is numerically dependent on earlier columns" +
                " (remaining norm " + std::to_string(normx) + ")",
            j);
      const double beta = alpha >= 0.0 ? -normx : normx;
      tau[static_cast<std::size_t>(j)] = (beta - alpha) / beta;
      const double scale = 1.0 / (alpha - beta);
      for (index_t i = j + 1; i < m; ++i) colj[i] *= scale;
      colj[j] = beta;  // R diagonal entry
    }
    // Panel done; sweep it across the trailing columns.
    parallel_for(p1, l, [&](index_t c) {
      double* colc = w.col(c);
      for (index_t j = p0; j < p1; ++j)
        apply_reflector(w, j, tau[static_cast<std::size_t>(j)], colc, m);
    }, 8);
  }
}

DenseMatrix extract_r(const DenseMatrix& w) {
  const index_t l = w.cols();
  DenseMatrix r(l, l);
  for (index_t j = 0; j < l; ++j)
    for (index_t i = 0; i <= j; ++i) r(i, j) = w(i, j);
  return r;
}

// Flips R rows (and Q columns, when present) so every diagonal entry of R is
// non-negative.
void normalize_signs(DenseMatrix& r, DenseMatrix* q) {
  const index_t l = r.cols();
  for (index_t j = 0; j < l; ++j) {
    if (r(j, j) >= 0.0) continue;
    for (index_t c = j; c < l; ++c) r(j, c) = -r(j, c);
    if (q) {
      double* qc = q->col(j);
      for (index_t i = 0; i < q->rows(); ++i) qc[i] = -qc[i];
    }
  }
}

void check_shape(const DenseMatrix& a) {
  if (a.rows() < a.cols() || a.cols() < 1)
    throw DimensionError("qr: need m >= l >= 1, got " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()));
}

}  // namespace

QRFactors householder_qr(const DenseMatrix& a) {
  check_shape(a);
  const index_t m = a.rows();
  const index_t l = a.cols();
  DenseMatrix w = a;
  std::vector<double> tau;
  factorize(w, tau, frobenius_norm(a));

  // Q = H_0 ... H_{l-1} applied to the first l identity columns. Reflector
  // H_j only disturbs identity columns c >= j, so working panels from the back
  // lets each target column be swept once while the panel is hot.
  DenseMatrix q(m, l);
  for (index_t j = 0; j < l; ++j) q(j, j) = 1.0;
  index_t first_panel = ((l - 1) / kPanel) * kPanel;
  for (index_t p0 = first_panel; p0 >= 0; p0 -= kPanel) {
    const index_t p1 = p0 + kPanel < l ? p0 + kPanel : l;
    parallel_for(p0, l, [&](index_t c) {
      double* colc = q.col(c);
      const index_t jmax = c < p1 ? c : p1 - 1;
      for (index_t j = jmax; j >= p0; --j)
        apply_reflector(w, j, tau[static_cast<std::size_t>(j)], colc, m);
    }, 8);
    if (p0 == 0) break;
  }

  QRFactors out{std::move(q), extract_r(w)};
  normalize_signs(out.r, &out.q);
  return out;
}

DenseMatrix householder_qr_r_only(const DenseMatrix& a) {
  check_shape(a);
  DenseMatrix w = a;
  std::vector<double> tau;
  factorize(w, tau, frobenius_norm(a));
  DenseMatrix r = extract_r(w);
  normalize_signs(r, nullptr);
  return r;
}

}  // namespace lazypca
