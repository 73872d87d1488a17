#include "mdlb/bounds.hpp"
#include "mdlb/combinatorics.hpp"
#include "mdlb/dataset.hpp"
#include "mdlb/discrete_learner.hpp"
#include "mdlb/entropy.hpp"
#include "mdlb/objective.hpp"
#include "mdlb/oracle_sim.hpp"
#include "mdlb/prior_bank.hpp"
#include "mdlb/symmetry.hpp"

#include <benchmark/benchmark.h>

#include <numeric>
#include <random>

using namespace mdlb;

static void BM_HdInverse(benchmark::State& state) {
  double x = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(h_d_inverse(x, 0.05));
    x = x < 0.5 ? x + 1e-4 : 0.01;
  }
}
BENCHMARK(BM_HdInverse);

static void BM_Bucket(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bucket(n, n / 10, n / 20));
}
BENCHMARK(BM_Bucket)->Arg(100)->Arg(1000)->Arg(10000);

static void BM_BMax(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(b_max(n, n / 10, 0.05));
}
BENCHMARK(BM_BMax)->Arg(30)->Arg(300);

static void BM_ExpHdSum(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(exp_hd_sum(n, n));
}
BENCHMARK(BM_ExpHdSum)->Arg(14)->Arg(200);

static void BM_PopulationRiskBound(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(population_risk_bound_t3(25.0, 2000, 0.05, 0.05).bound);
}
BENCHMARK(BM_PopulationRiskBound);

static void BM_InducedConditionalAndInfimumKl(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto problem = threshold_problem(4, 2, 0.1);
  const std::vector<double> labels{0.5, 0.5};
  for (auto _ : state) {
    const auto p = induced_conditional(problem, n);
    benchmark::DoNotOptimize(infimum_kl_over_symmetric(p, labels, {SymmetryKind::type1, n, {}}));
  }
}
BENCHMARK(BM_InducedConditionalAndInfimumKl)->Arg(1)->Arg(2);

static void BM_ObjectiveBatch(benchmark::State& state) {
  const auto obj = static_cast<Objective>(state.range(0));
  const auto data = synth_dataset(GeneratorSpec::four_corners(1.4, 1.0), 64, 1);
  const auto model = Model::xavier({2, 32, 8, 4}, 2);
  PriorBank bank(4, 2, 8, 0.005, bank_mode_for(obj));
  std::vector<std::size_t> batch(64);
  std::iota(batch.begin(), batch.end(), 0);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd noise(8, 64);
  for (Eigen::Index i = 0; i < noise.size(); ++i) noise.data()[i] = normal(rng);
  for (auto _ : state) benchmark::DoNotOptimize(objective(model, bank, obj, 0.01, data, batch, noise).loss);
  state.SetLabel(to_string(obj));
}
BENCHMARK(BM_ObjectiveBatch)->DenseRange(0, 2);

static void BM_CoveringSimulation(benchmark::State& state) {
  const auto source = memorizer_source();
  CoveringOptions options;
  options.trials = 500;
  const auto rates = rate_sweep(0.2, 1.2, 6);
  for (auto _ : state) benchmark::DoNotOptimize(covering_simulation(source, options, rates).points.size());
}
BENCHMARK(BM_CoveringSimulation)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
