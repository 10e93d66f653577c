#include "lazypca/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "lazypca/error.hpp"
#include "lazypca/kernels.hpp"

namespace lazypca {

namespace {

// Round-robin pair schedule (circle method): player l-1 is pinned, the rest
// rotate, every unordered pair appears exactly once per sweep. Computed once;
// the fixed order keeps the floating-point result reproducible.
std::vector<std::pair<index_t, index_t>> tournament_pairs(index_t l) {
  std::vector<std::pair<index_t, index_t>> pairs;
  if (l < 2) return pairs;
  const index_t players = l % 2 == 0 ? l : l + 1;  // odd l gets a bye slot
  pairs.reserve(static_cast<std::size_t>(l * (l - 1) / 2));
  for (index_t round = 0; round < players - 1; ++round) {
    for (index_t k = 0; k < players / 2; ++k) {
      index_t a = k == 0 ? players - 1 : (round + k) % (players - 1);
      index_t b = (round + players - 1 - k) % (players - 1);
      if (a >= l || b >= l || a == b) continue;  // bye
      if (a > b) std::swap(a, b);
      pairs.emplace_back(a, b);
    }
  }
  return pairs;
}

double max_offdiag(const DenseMatrix& b) {
  double worst = 0.0;
  for (index_t j = 0; j < b.cols(); ++j)
    for (index_t i = 0; i < j; ++i) worst = std::max(worst, std::abs(b(i, j)));
  return worst;
}

}  // namespace

EigenDecomposition jacobi_eigh(const DenseMatrix& a) {
  if (a.rows() != a.cols())
    throw DimensionError("jacobi_eigh: matrix must be square, got " + std::to_string(a.rows()) +
                         "x" + std::to_string(a.cols()));
  const index_t l = a.rows();
  const double fnorm = frobenius_norm(a);
  if (l > 0 && a.max_asymmetry() > 1e-10 * fnorm)
    throw InvalidArgumentError("jacobi_eigh: input is not symmetric (max |a_ij - a_ji| = " +
                               std::to_string(a.max_asymmetry()) + ")");

  DenseMatrix b = a;
  for (index_t j = 0; j < l; ++j)  // enforce exact symmetry
    for (index_t i = j + 1; i < l; ++i) b(i, j) = b(j, i);
  DenseMatrix v = DenseMatrix::identity(l);

  const double tol = 1e-14 * fnorm;
  const double skip_tol = 0.1 * tol;
  const auto pairs = tournament_pairs(l);
  std::vector<double> wp(static_cast<std::size_t>(l)), wq(static_cast<std::size_t>(l));

  constexpr int max_sweeps = 50;
  int sweep = 0;
  double off = max_offdiag(b);
  while (off > tol) {
    if (sweep++ >= max_sweeps)
      throw ConvergenceError("jacobi_eigh: off-diagonal " + std::to_string(off) +
                                 " still above " + std::to_string(tol) + " after " +
                                 std::to_string(max_sweeps) + " sweeps",
                             off);
    for (const auto& [p, q] : pairs) {
      const double apq = b(p, q);
      if (std::abs(apq) <= skip_tol) continue;
      const double app = b(p, p);
      const double aqq = b(q, q);
      const double theta = (aqq - app) / (2.0 * apq);
      const double t = theta >= 0.0 ? 1.0 / (theta + std::sqrt(theta * theta + 1.0))
                                    : -1.0 / (-theta + std::sqrt(theta * theta + 1.0));
      const double c = 1.0 / std::sqrt(t * t + 1.0);
      const double s = t * c;

      // New columns p and q; by symmetry these same vectors are also the new
      // rows p and q, so one pass computes everything.
      const double* bp = b.col(p);
      const double* bq = b.col(q);
      for (index_t i = 0; i < l; ++i) {
        wp[static_cast<std::size_t>(i)] = c * bp[i] - s * bq[i];
        wq[static_cast<std::size_t>(i)] = s * bp[i] + c * bq[i];
      }
      double* bpm = b.col(p);
      double* bqm = b.col(q);
      for (index_t i = 0; i < l; ++i) {
        bpm[i] = wp[static_cast<std::size_t>(i)];
        bqm[i] = wq[static_cast<std::size_t>(i)];
      }
      for (index_t i = 0; i < l; ++i) {
        b(p, i) = wp[static_cast<std::size_t>(i)];
        b(q, i) = wq[static_cast<std::size_t>(i)];
      }
      b(p, p) = app - t * apq;
      b(q, q) = aqq + t * apq;
      b(p, q) = 0.0;
      b(q, p) = 0.0;

      double* vp = v.col(p);
      double* vq = v.col(q);
      for (index_t i = 0; i < l; ++i) {
        const double x = vp[i];
        const double y = vq[i];
        vp[i] = c * x - s * y;
        vq[i] = s * x + c * y;
      }
    }
    off = max_offdiag(b);
  }

  std::vector<index_t> order(static_cast<std::size_t>(l));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](index_t x, index_t y) { return b(x, x) > b(y, y); });

  EigenDecomposition out;
  out.eigenvalues.resize(static_cast<std::size_t>(l));
  out.eigenvectors = DenseMatrix(l, l);
  for (index_t r = 0; r < l; ++r) {
    const index_t src = order[static_cast<std::size_t>(r)];
    out.eigenvalues[static_cast<std::size_t>(r)] = b(src, src);
    const double* vcol = v.col(src);
    double* ocol = out.eigenvectors.col(r);
    for (index_t i = 0; i < l; ++i) ocol[i] = vcol[i];
  }
  return out;
}

}  // namespace lazypca
