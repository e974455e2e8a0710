#include <random>

#include <benchmark/benchmark.h>

#include "ec/multipliers.hpp"
#include "ec/profiles.hpp"
#include "ec/solver.hpp"
#include "ec/spectral.hpp"

using namespace ec;

namespace {

VectorField data(const Grid& g) {
  InitialData d;
  d.kind = InitialKind::random_bandlimited;
  d.amplitude = 0.1;
  d.band = 0.5 * g.kmax();
  return make_initial(g, d);
}

void BM_Transform(benchmark::State& st) {
  const Grid g(int(st.range(0)), 1.0);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  RArray a(g.size());
  for (auto& v : a) v = nd(rng);
  for (auto _ : st) benchmark::DoNotOptimize(transform(g, a));
  st.SetItemsProcessed(st.iterations() * std::int64_t(g.size()));
}
BENCHMARK(BM_Transform)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_InverseTransform(benchmark::State& st) {
  const Grid g(int(st.range(0)), 1.0);
  const VectorField u = data(g);
  for (auto _ : st) benchmark::DoNotOptimize(inverse_transform(u[0]));
}
BENCHMARK(BM_InverseTransform)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_VelocityRhs(benchmark::State& st) {
  const Grid g(int(st.range(0)), 1.0);
  const VectorField u = data(g);
  for (auto _ : st) benchmark::DoNotOptimize(velocity_rhs(u));
}
BENCHMARK(BM_VelocityRhs)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_ProfileRhs(benchmark::State& st) {
  const Grid g(int(st.range(0)), 1.0);
  const VectorProfile p = profiles_from_velocity(data(g), 1.0);
  for (auto _ : st) benchmark::DoNotOptimize(rhs_profile(p));
}
BENCHMARK(BM_ProfileRhs)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_Nonlinearity(benchmark::State& st) {
  const Grid g(int(st.range(0)), 1.0);
  const auto [a, b] = helical_split(data(g));
  for (auto _ : st) benchmark::DoNotOptimize(nonlinearity(a, b, {1, 1, -1}, 0.5));
}
BENCHMARK(BM_Nonlinearity)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_FactoredBilinear(benchmark::State& st) {
  const Grid g(int(st.range(0)), 1.0);
  const VectorField u = data(g);
  const auto [up, um] = helical_split(u);
  SpectralField g1 = r_pm(up, +1), g2 = r_pm(um, -1);
  clear_axis(g1);
  clear_axis(g2);
  const SignTriple s{1, 1, -1};
  const SymbolPlan plan = symbol_plan(0, s);
  for (auto _ : st) benchmark::DoNotOptimize(bilinear_factored(g1, g2, s, 0.5, plan));
}
BENCHMARK(BM_FactoredBilinear)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
