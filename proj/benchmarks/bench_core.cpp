#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "possib/convergence.hpp"
#include "possib/lln.hpp"
#include "possib/moments.hpp"
#include "possib/scenario.hpp"

namespace {

using namespace possib;

Scenario fixture(const char* name) { return load_scenario(std::string(POSSIB_SCENARIO_DIR) + "/" + name); }

struct Random {
  SpaceRef space;
  PossibilityDistribution dist;
  Variable x;
};

Random random_variable(std::size_t size) {
  std::mt19937_64 rng(size);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::string> labels;
  std::vector<double> w(size), v(size);
  for (std::size_t i = 0; i < size; ++i) {
    labels.push_back("s" + std::to_string(i));
    w[i] = u(rng);
    v[i] = 20.0 * u(rng) - 10.0;
  }
  w[0] = 1.0;
  auto space = make_space(std::move(labels));
  auto dist = PossibilityDistribution::from_weights(space, w);
  return {space, std::move(dist), Variable(space, std::move(v))};
}

void BM_VarianceSup(benchmark::State& state) {
  const auto r = random_variable(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(variance_sup(r.x, r.dist));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_VarianceSup)->Range(8, 4096);

void BM_ChebyshevCheck(benchmark::State& state) {
  const auto r = random_variable(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(chebyshev_check(r.x, r.dist, 1.0).margin());
}
BENCHMARK(BM_ChebyshevCheck)->Range(8, 4096);

void BM_MaxTrajectory(benchmark::State& state) {
  const auto s = fixture("seeded.yaml");
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(compute_max_trajectory(s, n).average_variance.back());
}
BENCHMARK(BM_MaxTrajectory)->Range(1000, 100000)->Unit(benchmark::kMillisecond);

void BM_BorelCantelli(benchmark::State& state) {
  const auto s = fixture("s2.yaml");
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto traj = compute_max_trajectory(s, n);
  const auto events = deviation_trajectory(traj.deviations, Variable::constant(s.space, 0.0), 0.05);
  for (auto _ : state) benchmark::DoNotOptimize(borel_cantelli_check(events, s.distribution).rows.size());
}
BENCHMARK(BM_BorelCantelli)->Range(1000, 100000)->Unit(benchmark::kMillisecond);

void BM_RunLln(benchmark::State& state) {
  const auto s = fixture("s3.yaml");
  const auto params = theorem_params(s);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_lln(s, params, n, s.eps_grid).bounds_respected);
}
BENCHMARK(BM_RunLln)->Range(1000, 100000)->Unit(benchmark::kMillisecond);

void BM_ParseScenario(benchmark::State& state) {
  const auto text = serialize_scenario(fixture("seeded.yaml"));
  for (auto _ : state) benchmark::DoNotOptimize(parse_scenario(text).horizon);
}
BENCHMARK(BM_ParseScenario);

}  // namespace

BENCHMARK_MAIN();
