#include "gfs/clustering.hpp"
#include "gfs/experiments.hpp"
#include "gfs/selection.hpp"
#include "gfs/synth.hpp"

#include <benchmark/benchmark.h>

namespace {

gfs::Ensemble make_union(gfs::Index k, gfs::Index d) {
  gfs::UnionSpec s;
  s.k = k;
  s.q = k / 2;
  s.d = d;
  s.seed = 1;
  return gfs::generate_union(s);
}

void BM_EndogenousOmp(benchmark::State& state) {
  const gfs::Index k = state.range(0), d = state.range(1);
  const gfs::Ensemble e = make_union(k, d);
  const gfs::EndogenousOmp engine(e.points);
  const auto stop = gfs::StoppingRule::sparsity(k);
  for (auto _ : state) {
    for (gfs::Index i = 0; i < e.size(); ++i) benchmark::DoNotOptimize(engine.select(i, stop));
  }
  state.SetItemsProcessed(state.iterations() * e.size());
}
BENCHMARK(BM_EndogenousOmp)->Args({10, 100})->Args({20, 200})->Args({20, 400});

void BM_NearestNeighbors(benchmark::State& state) {
  const gfs::Ensemble e = make_union(state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(gfs::nn_feature_sets(e.points, state.range(0)));
}
BENCHMARK(BM_NearestNeighbors)->Args({20, 200})->Args({20, 400});

void BM_ClusterPipeline(benchmark::State& state) {
  const gfs::Ensemble e = make_union(10, state.range(0));
  for (auto _ : state) {
    const auto sets = gfs::omp_feature_sets(e.points, gfs::StoppingRule::sparsity(10));
    const auto c = gfs::coefficient_matrix(sets, e.size());
    benchmark::DoNotOptimize(gfs::spectral_bipartition(gfs::graph_laplacian(gfs::affinity(c.c))));
  }
}
BENCHMARK(BM_ClusterPipeline)->Arg(50)->Arg(100);

void BM_EfsProbability(benchmark::State& state) {
  gfs::UnionSpec s;
  s.k = 20;
  s.q = 10;
  s.d = 200;
  for (auto _ : state) benchmark::DoNotOptimize(gfs::efs_probability(s, gfs::Method::omp, 4, 1, 1));
}
BENCHMARK(BM_EfsProbability)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
