#include "lazypca/projection.hpp"

#include <cmath>
#include <cstdlib>

#include "lazypca/error.hpp"
#include "lazypca/rng.hpp"
#include "lazypca/threading.hpp"

namespace lazypca {

DensityPolicy DensityPolicy::parse(const std::string& text) {
  if (text == "aggressive") return aggressive();
  if (text == "conservative") return conservative();
  if (text.rfind("value:", 0) == 0) {
    const std::string num = text.substr(6);
    char* end = nullptr;
    const double v = std::strtod(num.c_str(), &end);
    if (end == num.c_str() || *end != '\0')
      throw InvalidArgumentError("density policy: cannot parse value in '" + text + "'");
    if (!(v > 0.0) || v > 1.0)
      throw InvalidArgumentError("density policy: explicit value must lie in (0, 1], got " + num);
    return explicit_value(v);
  }
  throw InvalidArgumentError("density policy: expected 'aggressive', 'conservative', or "
                             "'value:<float>', got '" + text + "'");
}

std::string DensityPolicy::to_string() const {
  switch (mode) {
    case Mode::aggressive: return "aggressive";
    case Mode::conservative: return "conservative";
    case Mode::explicit_value: return "value:" + std::to_string(value);
  }
  return "conservative";
}

double density_for(const DensityPolicy& policy, index_t k) {
  if (k < 2) throw InvalidArgumentError("density policy: k must be at least 2, got " + std::to_string(k));
  double d;
  switch (policy.mode) {
    case DensityPolicy::Mode::aggressive: d = std::log(static_cast<double>(k)) / static_cast<double>(k); break;
    case DensityPolicy::Mode::conservative: d = 1.0 / std::sqrt(static_cast<double>(k)); break;
    case DensityPolicy::Mode::explicit_value: d = policy.value; break;
    default: d = 1.0;
  }
  if (d > 1.0) d = 1.0;
  if (!(d > 0.0)) throw InvalidArgumentError("density policy: derived density is not positive");
  return d;
}

void ProjectionSpec::validate() const {
  if (l < 2)
    throw InvalidArgumentError("projection: sketch width l must be at least 2, got " + std::to_string(l));
  if (l > n)
    throw InvalidArgumentError("projection: sketch width l = " + std::to_string(l) +
                               " exceeds data dimensionality n = " + std::to_string(n));
  if (!(density > 0.0) || density > 1.0)
    throw InvalidArgumentError("projection: density must lie in (0, 1], got " + std::to_string(density));
}

DenseMatrix ProjectionMatrix::scaled_dense() const {
  DenseMatrix out = is_dense() ? dense() : sparse().to_dense();
  const double inv = 1.0 / scale;
  double* d = out.data();
  const std::size_t count = static_cast<std::size_t>(out.rows()) * static_cast<std::size_t>(out.cols());
  for (std::size_t i = 0; i < count; ++i) d[i] *= inv;
  return out;
}

ProjectionMatrix gen_gaussian(const ProjectionSpec& spec) {
  spec.validate();
  DenseMatrix omega(spec.n, spec.l);
  parallel_for(0, spec.l, [&](index_t col) {
    Xoshiro256 rng = column_stream(spec.seed, static_cast<std::uint64_t>(col));
    double* c = omega.col(col);
    for (index_t i = 0; i < spec.n; ++i) c[i] = normal_icdf(rng.uniform());
  });
  ProjectionMatrix out;
  out.spec = spec;
  out.scale = std::sqrt(static_cast<double>(spec.l));
  out.omega = std::move(omega);
  return out;
}

ProjectionMatrix gen_very_sparse(const ProjectionSpec& spec) {
  spec.validate();
  // One uniform per cell: u < density/2 gives +1, density/2 <= u < density
  // gives -1. Cells are visited in column-major order within each column's own
  // stream, so the row indices come out sorted and the CSC arrays can be built
  // directly.
  std::vector<std::vector<index_t>> rows(static_cast<std::size_t>(spec.l));
  std::vector<std::vector<double>> vals(static_cast<std::size_t>(spec.l));
  parallel_for(0, spec.l, [&](index_t col) {
    Xoshiro256 rng = column_stream(spec.seed, static_cast<std::uint64_t>(col));
    auto& r = rows[static_cast<std::size_t>(col)];
    auto& v = vals[static_cast<std::size_t>(col)];
    const double half = spec.density / 2.0;
    for (index_t i = 0; i < spec.n; ++i) {
      const double u = rng.uniform();
      if (u >= spec.density) continue;
      r.push_back(i);
      v.push_back(u < half ? 1.0 : -1.0);
    }
  });

  std::vector<index_t> col_ptr(static_cast<std::size_t>(spec.l) + 1, 0);
  for (index_t j = 0; j < spec.l; ++j)
    col_ptr[static_cast<std::size_t>(j) + 1] =
        col_ptr[static_cast<std::size_t>(j)] + static_cast<index_t>(rows[static_cast<std::size_t>(j)].size());
  std::vector<index_t> row_idx;
  std::vector<double> values;
  row_idx.reserve(static_cast<std::size_t>(col_ptr.back()));
  values.reserve(static_cast<std::size_t>(col_ptr.back()));
  for (index_t j = 0; j < spec.l; ++j) {
    row_idx.insert(row_idx.end(), rows[static_cast<std::size_t>(j)].begin(), rows[static_cast<std::size_t>(j)].end());
    values.insert(values.end(), vals[static_cast<std::size_t>(j)].begin(), vals[static_cast<std::size_t>(j)].end());
  }

  ProjectionMatrix out;
  out.spec = spec;
  out.scale = std::sqrt(static_cast<double>(spec.l) * spec.density);
  out.omega = SparseMatrix::from_csc(spec.n, spec.l, std::move(col_ptr), std::move(row_idx),
                                     std::move(values));
  return out;
}

ProjectionMatrix regenerate(const ProjectionSpec& spec) {
  return spec.kind == ProjectionKind::gaussian ? gen_gaussian(spec) : gen_very_sparse(spec);
}

std::string to_string(ProjectionKind kind) {
  return kind == ProjectionKind::gaussian ? "gaussian" : "very_sparse";
}

ProjectionKind projection_kind_from_string(const std::string& text) {
  if (text == "gaussian") return ProjectionKind::gaussian;
  if (text == "very_sparse") return ProjectionKind::very_sparse;
  throw InvalidArgumentError("unknown projection kind '" + text + "'");
}

}  // namespace lazypca
