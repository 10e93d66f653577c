// Micro-benchmarks for the kernels on the reduction hot path, plus the two
// spectral reducers end to end at desk scale. The interesting comparison is
// the per-phase cost split: the sketch and Gram products scale with nnz(X),
// the QR with the sketch height, and the small eigensolve with l^3.

#include <benchmark/benchmark.h>

#include "lazypca/dense_matrix.hpp"
#include "lazypca/jacobi.hpp"
#include "lazypca/kernels.hpp"
#include "lazypca/projection.hpp"
#include "lazypca/qr.hpp"
#include "lazypca/reducer.hpp"
#include "lazypca/sparse_matrix.hpp"
#include "lazypca/synthetic.hpp"
#include "lazypca/tridiag_eigh.hpp"
#include "lazypca/truncated_svd.hpp"

namespace {

using lazypca::DenseMatrix;
using lazypca::index_t;
using lazypca::SparseMatrix;

const SparseMatrix& data() {
  static const SparseMatrix x = [] {
    lazypca::SyntheticSpec spec;
    spec.m = 2000;
    spec.n = 500;
    spec.density = 0.05;
    spec.seed = 1;
    return lazypca::gen_synthetic(spec);
  }();
  return x;
}

lazypca::ProjectionMatrix make_projection(lazypca::ProjectionKind kind, index_t l) {
  lazypca::ProjectionSpec spec;
  spec.kind = kind;
  spec.n = data().cols();
  spec.l = l;
  if (kind == lazypca::ProjectionKind::very_sparse)
    spec.density = lazypca::density_for(lazypca::DensityPolicy::aggressive(), l);
  spec.seed = 7;
  return lazypca::regenerate(spec);
}

void BM_sketch_gaussian(benchmark::State& state) {
  const auto omega = make_projection(lazypca::ProjectionKind::gaussian, state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(lazypca::build_sketch(data(), omega));
  }
}
BENCHMARK(BM_sketch_gaussian)->Arg(16)->Arg(64);

void BM_sketch_very_sparse(benchmark::State& state) {
  const auto omega = make_projection(lazypca::ProjectionKind::very_sparse, state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(lazypca::build_sketch(data(), omega));
  }
}
BENCHMARK(BM_sketch_very_sparse)->Arg(16)->Arg(64);

void BM_gram_factor(benchmark::State& state) {
  const auto omega = make_projection(lazypca::ProjectionKind::gaussian, state.range(0));
  const DenseMatrix u = lazypca::build_sketch(data(), omega).u;
  for (auto _ : state) {
    benchmark::DoNotOptimize(lazypca::gemm_t(u, data()));  // F = U^T X
  }
}
BENCHMARK(BM_gram_factor)->Arg(16)->Arg(64);

void BM_householder_qr(benchmark::State& state) {
  const auto omega = make_projection(lazypca::ProjectionKind::gaussian, state.range(0));
  const DenseMatrix u = lazypca::build_sketch(data(), omega).u;
  for (auto _ : state) {
    benchmark::DoNotOptimize(lazypca::householder_qr(u));
  }
}
BENCHMARK(BM_householder_qr)->Arg(16)->Arg(64);

void BM_jacobi_eigh(benchmark::State& state) {
  const auto omega = make_projection(lazypca::ProjectionKind::gaussian, state.range(0));
  const DenseMatrix u = lazypca::build_sketch(data(), omega).u;
  const DenseMatrix gram = lazypca::dense_aat(lazypca::gemm_t(u, data()));
  for (auto _ : state) {
    benchmark::DoNotOptimize(lazypca::jacobi_eigh(gram));
  }
}
BENCHMARK(BM_jacobi_eigh)->Arg(16)->Arg(64);

void BM_tridiag_eigh(benchmark::State& state) {
  const auto omega = make_projection(lazypca::ProjectionKind::gaussian, state.range(0));
  const DenseMatrix u = lazypca::build_sketch(data(), omega).u;
  const DenseMatrix gram = lazypca::dense_aat(lazypca::gemm_t(u, data()));
  for (auto _ : state) {
    benchmark::DoNotOptimize(lazypca::tridiag_eigh(gram));
  }
}
BENCHMARK(BM_tridiag_eigh)->Arg(16)->Arg(64);

void BM_truncated_svd(benchmark::State& state) {
  const auto omega = make_projection(lazypca::ProjectionKind::gaussian, state.range(0));
  const DenseMatrix u = lazypca::build_sketch(data(), omega).u;
  const DenseMatrix f = lazypca::gemm_t(u, data());
  for (auto _ : state) {
    benchmark::DoNotOptimize(lazypca::truncated_svd_via_gram(f, state.range(0)));
  }
}
BENCHMARK(BM_truncated_svd)->Arg(16)->Arg(64);

lazypca::ReducerConfig reducer_config(lazypca::ReducerMethod method, index_t k, bool streaming) {
  lazypca::ReducerConfig config;
  config.method = method;
  config.k = k;
  config.projection.kind = lazypca::ProjectionKind::very_sparse;
  config.projection.density = lazypca::density_for(lazypca::DensityPolicy::aggressive(), k);
  config.projection.seed = 7;
  if (streaming) {
    config.streaming = true;
    config.block_rows = 256;
  }
  return config;
}

void BM_reduce_spca(benchmark::State& state) {
  const auto config = reducer_config(lazypca::ReducerMethod::spca, state.range(0), false);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lazypca::reduce(data(), config));
  }
}
BENCHMARK(BM_reduce_spca)->Arg(16)->Arg(64);

void BM_reduce_lazy_spca(benchmark::State& state) {
  const auto config = reducer_config(lazypca::ReducerMethod::lazy_spca, state.range(0), false);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lazypca::reduce(data(), config));
  }
}
BENCHMARK(BM_reduce_lazy_spca)->Arg(16)->Arg(64);

void BM_reduce_spca_streaming(benchmark::State& state) {
  const auto config = reducer_config(lazypca::ReducerMethod::spca, state.range(0), true);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lazypca::reduce(data(), config));
  }
}
BENCHMARK(BM_reduce_spca_streaming)->Arg(16)->Arg(64);

void BM_reduce_lazy_spca_streaming(benchmark::State& state) {
  const auto config = reducer_config(lazypca::ReducerMethod::lazy_spca, state.range(0), true);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lazypca::reduce(data(), config));
  }
}
BENCHMARK(BM_reduce_lazy_spca_streaming)->Arg(16)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
