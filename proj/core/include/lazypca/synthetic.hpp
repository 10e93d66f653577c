#pragma once

#include <cstdint>

#include "lazypca/sparse_matrix.hpp"

namespace lazypca {

// Seeded sparse test-data generator.
//
// flat: every cell is nonzero independently with the given probability, value
// uniform on [-1, 1]; rows are visited by geometric skips so the cost is
// proportional to the entries actually produced. The singular spectrum is the
// unstructured bulk of an iid random matrix.
//
// decay: a sum of rank-one terms rate^t * u_t v_t^T with sparse unit-norm
// factors on (nearly) disjoint random supports, giving an approximately
// geometric singular value decay while keeping the target fill. Useful when a
// clear low-rank structure is needed.
struct SyntheticSpec {
  enum class Spectrum { flat, decay };
  index_t m = 0;
  index_t n = 0;
  double density = 0.0;  // target nonzero fraction, in (0, 1]
  Spectrum spectrum = Spectrum::flat;
  double decay_rate = 0.5;  // per-term factor in (0, 1) for decay
  std::uint64_t seed = 0;
};

SparseMatrix gen_synthetic(const SyntheticSpec& spec);

}  // namespace lazypca
