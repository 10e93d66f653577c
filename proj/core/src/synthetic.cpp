#include "lazypca/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "lazypca/error.hpp"
#include "lazypca/rng.hpp"
#include "lazypca/threading.hpp"

namespace lazypca {

namespace {

void validate(const SyntheticSpec& spec) {
  if (spec.m < 1 || spec.n < 1)
    throw InvalidArgumentError("synthetic: dimensions must be at least 1");
  if (!(spec.density > 0.0) || spec.density > 1.0)
    throw InvalidArgumentError("synthetic: density must lie in (0, 1], got " +
                               std::to_string(spec.density));
  if (spec.spectrum == SyntheticSpec::Spectrum::decay &&
      (!(spec.decay_rate > 0.0) || !(spec.decay_rate < 1.0)))
    throw InvalidArgumentError("synthetic: decay rate must lie in (0, 1), got " +
                               std::to_string(spec.decay_rate));
}

SparseMatrix gen_flat(const SyntheticSpec& spec) {
  std::vector<std::vector<index_t>> rows(static_cast<std::size_t>(spec.n));
  std::vector<std::vector<double>> vals(static_cast<std::size_t>(spec.n));
  const double p = spec.density;
  const double log1mp = p < 1.0 ? std::log1p(-p) : 0.0;
  parallel_for(0, spec.n, [&](index_t col) {
    Xoshiro256 rng = column_stream(spec.seed, static_cast<std::uint64_t>(col));
    auto& r = rows[static_cast<std::size_t>(col)];
    auto& v = vals[static_cast<std::size_t>(col)];
    if (p >= 1.0) {
      for (index_t i = 0; i < spec.m; ++i) {
        r.push_back(i);
        v.push_back(rng.uniform() * 2.0 - 1.0);
      }
      return;
    }
    index_t i = -1;
    while (true) {
      // Geometric skip: rows between successive nonzeros.
      const double u = rng.uniform();
      const double skip = std::floor(std::log(u) / log1mp);
      i += 1 + static_cast<index_t>(skip);
      if (i < 0 || i >= spec.m) break;  // i < 0 guards against overflow on huge skips
      r.push_back(i);
      v.push_back(rng.uniform() * 2.0 - 1.0);
    }
  });

  std::vector<index_t> col_ptr(static_cast<std::size_t>(spec.n) + 1, 0);
  for (index_t j = 0; j < spec.n; ++j)
    col_ptr[static_cast<std::size_t>(j) + 1] =
        col_ptr[static_cast<std::size_t>(j)] + static_cast<index_t>(rows[static_cast<std::size_t>(j)].size());
  std::vector<index_t> row_idx;
  std::vector<double> values;
  row_idx.reserve(static_cast<std::size_t>(col_ptr.back()));
  values.reserve(static_cast<std::size_t>(col_ptr.back()));
  for (index_t j = 0; j < spec.n; ++j) {
    row_idx.insert(row_idx.end(), rows[static_cast<std::size_t>(j)].begin(), rows[static_cast<std::size_t>(j)].end());
    values.insert(values.end(), vals[static_cast<std::size_t>(j)].begin(), vals[static_cast<std::size_t>(j)].end());
  }
  return SparseMatrix::from_csc(spec.m, spec.n, std::move(col_ptr), std::move(row_idx),
                                std::move(values));
}

// Distinct indices in [0, limit), sorted. Floyd's sampling keeps it cheap for
// small counts over large ranges.
std::vector<index_t> sample_distinct(Xoshiro256& rng, index_t count, index_t limit) {
  std::unordered_set<index_t> seen;
  std::vector<index_t> out;
  out.reserve(static_cast<std::size_t>(count));
  for (index_t t = limit - count; t < limit; ++t) {
    const index_t candidate = static_cast<index_t>(rng.next() % static_cast<std::uint64_t>(t + 1));
    if (seen.insert(candidate).second) {
      out.push_back(candidate);
    } else {
      seen.insert(t);
      out.push_back(t);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

SparseMatrix gen_decay(const SyntheticSpec& spec) {
  const index_t r = std::min<index_t>({spec.m, spec.n, 64});
  const double per_factor = spec.density / static_cast<double>(r);
  const auto support = [&](index_t dim) {
    index_t s = static_cast<index_t>(std::llround(static_cast<double>(dim) * std::sqrt(per_factor)));
    return std::clamp<index_t>(s, 1, dim);
  };
  const index_t su = support(spec.m);
  const index_t sv = support(spec.n);
  const double u_mag = 1.0 / std::sqrt(static_cast<double>(su));
  const double v_mag = 1.0 / std::sqrt(static_cast<double>(sv));

  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(r * su * sv));
  for (index_t t = 0; t < r; ++t) {
    Xoshiro256 rng = column_stream(spec.seed ^ 0xdecafULL, static_cast<std::uint64_t>(t));
    const double sigma = std::pow(spec.decay_rate, static_cast<double>(t));
    const std::vector<index_t> urows = sample_distinct(rng, su, spec.m);
    const std::vector<index_t> vcols = sample_distinct(rng, sv, spec.n);
    std::vector<double> usign(static_cast<std::size_t>(su)), vsign(static_cast<std::size_t>(sv));
    for (double& s : usign) s = rng.next() & 1 ? u_mag : -u_mag;
    for (double& s : vsign) s = rng.next() & 1 ? v_mag : -v_mag;
    for (index_t b = 0; b < sv; ++b)
      for (index_t a = 0; a < su; ++a)
        triplets.push_back({urows[static_cast<std::size_t>(a)], vcols[static_cast<std::size_t>(b)],
                            sigma * usign[static_cast<std::size_t>(a)] * vsign[static_cast<std::size_t>(b)]});
  }
  return SparseMatrix::from_triplets(spec.m, spec.n, std::move(triplets));
}

}  // namespace

SparseMatrix gen_synthetic(const SyntheticSpec& spec) {
  validate(spec);
  return spec.spectrum == SyntheticSpec::Spectrum::flat ? gen_flat(spec) : gen_decay(spec);
}

}  // namespace lazypca
