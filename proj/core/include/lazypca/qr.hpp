#pragma once

#include "lazypca/dense_matrix.hpp"

namespace lazypca {

// Thin QR of an m x l matrix (m >= l): q is m x l with orthonormal columns,
// r is l x l upper triangular with non-negative diagonal and exact zeros below
// the diagonal.
struct QRFactors {
  DenseMatrix q;
  DenseMatrix r;
};

// Householder factorization. A column whose remaining norm falls at or below
// 1e-12 * ||A||_F is reported as rank deficiency, naming the column.
QRFactors householder_qr(const DenseMatrix& a);

// Same factorization without forming Q. This is the streaming update's
// workhorse, where only R is carried forward.
DenseMatrix householder_qr_r_only(const DenseMatrix& a);

}  // namespace lazypca
