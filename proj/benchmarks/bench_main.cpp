#include <benchmark/benchmark.h>

#include <random>

#include "infradius/clustering.hpp"
#include "infradius/divergences.hpp"
#include "infradius/radius.hpp"

using namespace infradius;

namespace {

WeightedSet discrete_set(int n, int support, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Density> members;
  std::vector<double> w(static_cast<std::size_t>(n), 1.0 / n);
  for (int i = 0; i < n; ++i) {
    std::vector<double> p(static_cast<std::size_t>(support));
    double sum = 0.0;
    for (double& v : p) {
      v = 0.05 + static_cast<double>(rng() >> 11) * 0x1.0p-53;
      sum += v;
    }
    for (double& v : p) v /= sum;
    members.push_back(Density::discrete(std::move(p)));
  }
  return WeightedSet(std::move(w), std::move(members));
}

WeightedSet gaussian_grid_pair(int n_points) {
  const auto xs = linspace(-10.0, 11.0, n_points);
  return WeightedSet({0.5, 0.5},
                     {Density::expfam(gaussian_member(0, 1)).materialize_at(xs),
                      Density::expfam(gaussian_member(1, 1)).materialize_at(xs)});
}

void BM_SibsonRadiusGrid(benchmark::State& state) {
  const auto set = gaussian_grid_pair(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sibson_radius(set, 0.5).value);
  }
}
BENCHMARK(BM_SibsonRadiusGrid)->Arg(2001)->Arg(20001)->Arg(200001);

void BM_SibsonRadiusEfClosedForm(benchmark::State& state) {
  const auto a = gaussian_member(0, 1);
  const auto b = gaussian_member(1, 1.3);
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sibson_radius_ef_1_over_k(*a.family, a.theta, b.theta, k));
  }
}
BENCHMARK(BM_SibsonRadiusEfClosedForm)->Arg(2)->Arg(4)->Arg(8);

void BM_GeneralizedRadiusRenyi(benchmark::State& state) {
  const auto set = discrete_set(static_cast<int>(state.range(0)), 16, 99);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        generalized_radius(set, MeanSpec::renyi(2.0), DivergenceSpec::renyi(2.0)).value);
  }
}
BENCHMARK(BM_GeneralizedRadiusRenyi)->Arg(2)->Arg(8);

void BM_JsDiversity(benchmark::State& state) {
  const auto set = discrete_set(static_cast<int>(state.range(0)), 64, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(js_diversity(set));
  }
}
BENCHMARK(BM_JsDiversity)->Arg(4)->Arg(32);

void BM_ClusterGaussians(benchmark::State& state) {
  std::mt19937_64 rng(5);
  std::vector<Density> members;
  const int n = static_cast<int>(state.range(0));
  for (int i = 0; i < n; ++i) {
    const double mu = -8.0 + 16.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53;
    members.push_back(Density::expfam(gaussian_member(mu, 1.0)));
  }
  const WeightedSet set(std::vector<double>(static_cast<std::size_t>(n), 1.0 / n),
                        std::move(members));
  for (auto _ : state) {
    benchmark::DoNotOptimize(cluster(set, 4, gaussian_family(), 11).objective);
  }
}
BENCHMARK(BM_ClusterGaussians)->Arg(16)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
