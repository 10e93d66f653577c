#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include "lazypca/dense_matrix.hpp"
#include "lazypca/sparse_matrix.hpp"

namespace lazypca {

enum class ProjectionKind { gaussian, very_sparse };

// How the nonzero fraction of a very sparse projection is picked from the
// target dimension: aggressive = ln(k)/k, conservative = 1/sqrt(k), or an
// explicit value in (0, 1].
struct DensityPolicy {
  enum class Mode { aggressive, conservative, explicit_value };
  Mode mode = Mode::conservative;
  double value = 0.0;  // used by explicit_value

  static DensityPolicy aggressive() { return {Mode::aggressive, 0.0}; }
  static DensityPolicy conservative() { return {Mode::conservative, 0.0}; }
  static DensityPolicy explicit_value(double v) { return {Mode::explicit_value, v}; }

  // Parses "aggressive", "conservative", or "value:<float>".
  static DensityPolicy parse(const std::string& text);
  std::string to_string() const;
};

// Nonzero fraction for target dimension k (k >= 2), clamped into (0, 1].
double density_for(const DensityPolicy& policy, index_t k);

// Everything that determines a projection matrix, bit for bit: (kind, n, l,
// density, seed). Columns are generated from independent counter-based streams
// derived from (seed, column), so regeneration in any order or thread count
// reproduces the same matrix.
struct ProjectionSpec {
  ProjectionKind kind = ProjectionKind::gaussian;
  index_t n = 0;       // data dimensionality (rows of the projection)
  index_t l = 0;       // sketch width (columns)
  double density = 1.0;  // nonzero fraction; meaningful for very_sparse
  std::uint64_t seed = 0;

  void validate() const;  // 2 <= l <= n, density in (0, 1]
};

// A generated projection: dense n x l for Gaussian entries, sparse CSC for the
// {-1, 0, +1} very sparse family. scale is the constant c such that (1/c) * omega
// is the variance-preserving map actually applied to data.
struct ProjectionMatrix {
  ProjectionSpec spec;
  double scale = 1.0;
  std::variant<DenseMatrix, SparseMatrix> omega;

  bool is_dense() const { return std::holds_alternative<DenseMatrix>(omega); }
  const DenseMatrix& dense() const { return std::get<DenseMatrix>(omega); }
  const SparseMatrix& sparse() const { return std::get<SparseMatrix>(omega); }

  // (1/scale) * omega as a dense matrix, regardless of storage.
  DenseMatrix scaled_dense() const;
};

// Entry-wise N(0, 1); scale = sqrt(l).
ProjectionMatrix gen_gaussian(const ProjectionSpec& spec);

// Entries -1 and +1 each with probability density/2, zero otherwise;
// scale = sqrt(l * density).
ProjectionMatrix gen_very_sparse(const ProjectionSpec& spec);

// Dispatch on spec.kind.
ProjectionMatrix regenerate(const ProjectionSpec& spec);

std::string to_string(ProjectionKind kind);
ProjectionKind projection_kind_from_string(const std::string& text);

}  // namespace lazypca
