#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lazypca/dense_matrix.hpp"
#include "lazypca/reducer.hpp"
#include "lazypca/sparse_matrix.hpp"

namespace lazypca {

// Chordal distance between the column spaces of two orthonormal bases,
// sqrt(k1 + k2 - 2 * ||V1^T V2||_F^2), evaluated through the equivalent
// cancellation-free residual form so near-identical subspaces resolve at full
// precision. Works through small k x k and n x k products, never through
// n x n projectors. Both inputs must have orthonormal columns (checked to a
// 1e-8 scale tolerance); identical subspaces give 0 up to roundoff.
double chordal_distance(const DenseMatrix& v1, const DenseMatrix& v2);

// The residual bound [1 + 4 sqrt(l) / (l - k - 1) * sqrt(min(m, n))] * sigma,
// where sigma is the (k+1)-th singular value. Requires l >= k + 2.
double bound_value(index_t m, index_t n, index_t k, index_t l, double sigma_k_plus_1);

// Which projector produced the approximation being measured: the orthonormal
// basis route (Q Q^T X) or the raw-sketch route (U (U^T U)^{-1} U^T X).
enum class ResidualRoute { qr, lazy };

struct ReconstructionErrorReport {
  double spectral_error = 0.0;   // ||X - P X||_2 by power iteration
  double frobenius_error = 0.0;  // ||X - P X||_F via the projector identity
  std::optional<double> sigma_k_plus_1;  // reference value, when computed
  std::optional<double> bound;           // bound_value(...), when computable
};

// Residual of projecting X onto range(U) (U = the m x l sketch). The Frobenius
// norm uses ||X - P X||_F^2 = ||X||_F^2 - ||P X||_F^2; the spectral norm runs
// power iteration on the residual operator. When with_bound is set and
// max(m, n) <= densify_limit, sigma_{k+1} is taken from the reference SVD of
// the densified matrix and the bound is attached (needs l >= k + 2).
ReconstructionErrorReport reconstruction_error(const SparseMatrix& x, const DenseMatrix& u,
                                               ResidualRoute route, index_t k, index_t l,
                                               bool with_bound = false,
                                               index_t densify_limit = 2000);

// Row-space variant used for plain random projection: residual of X - X V V^T
// for an orthonormal V (n x k).
ReconstructionErrorReport row_space_reconstruction_error(const SparseMatrix& x,
                                                         const DenseMatrix& v);

struct PairSample {
  index_t i = 0, j = 0;
  double original = 0.0;   // ||x_i - x_j||
  double reduced_a = 0.0;  // distance after map a
  double reduced_b = 0.0;  // distance after map b (0 when absent)
};

struct DistancePreservationReport {
  std::vector<PairSample> pairs;
  // Largest (reduced - original) across pairs and provided maps. Negative or
  // ~0 means every sampled distance contracted (expected for orthonormal maps;
  // plain random projection can legitimately expand).
  double max_contraction_violation = 0.0;
  // Largest |reduced_a - reduced_b| across pairs; 0 with a single map.
  double max_map_discrepancy = 0.0;
};

// Samples row pairs (all pairs when there are at most max_pairs of them,
// otherwise uniformly with the fixed seed, with replacement) and compares
// original against reduced pairwise distances.
DistancePreservationReport distance_preservation(const SparseMatrix& x, const ReductionMap& map_a,
                                                 const ReductionMap* map_b = nullptr,
                                                 index_t max_pairs = 10000,
                                                 std::uint64_t seed = 0);

// One comparison between two methods on the same data and sketch seed.
struct ComparisonReport {
  std::string method_a, method_b;
  index_t k = 0, l = 0;
  std::uint64_t seed = 0;
  double chordal = 0.0;
  double spectral_error = 0.0;   // method_a's route
  double frobenius_error = 0.0;  // method_a's route
  std::optional<double> spectral_error_b, frobenius_error_b;
  std::optional<double> bound;
  double max_contraction_violation = 0.0;
  double max_map_discrepancy = 0.0;
};

// The report as a single-line JSON object with a fixed field order (absent
// bound serializes as null).
std::string comparison_record_json(const ComparisonReport& report);

}  // namespace lazypca
