#include <memory>
#include <random>

#include <benchmark/benchmark.h>

#include "s4n/newton.hpp"
#include "s4n/oracles.hpp"
#include "s4n/prox.hpp"

using namespace s4n;

namespace {

CompositeProblem make_problem(Index N, Index n) {
  SynthOptions so;
  so.n_points = N;
  so.n_features = n;
  so.density = 0.1;
  so.seed = 7;
  return CompositeProblem(std::make_shared<const SparseDataset>(scale_features(synth_binary(so))), LossKind::Logistic,
                          0.01);
}

Vector random_vector(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = nd(rng);
  return v;
}

void BM_ProxL1(benchmark::State& state) {
  const Vector u = random_vector(state.range(0), 1);
  for (auto _ : state) benchmark::DoNotOptimize(prox_l1(u, 0.3));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ProxL1)->Arg(1000)->Arg(100000);

void BM_FullGradient(benchmark::State& state) {
  const CompositeProblem p = make_problem(state.range(0), 100);
  const Vector x = random_vector(100, 2) * 0.1;
  for (auto _ : state) benchmark::DoNotOptimize(full_gradient(p, x));
}
BENCHMARK(BM_FullGradient)->Arg(2000)->Arg(20000);

void BM_HessVec(benchmark::State& state) {
  const CompositeProblem p = make_problem(state.range(0), 100);
  const Vector x = random_vector(100, 3) * 0.1;
  const Vector v = random_vector(100, 4);
  for (auto _ : state) benchmark::DoNotOptimize(loss_hess_vec(p, x, p.all_indices(), v));
}
BENCHMARK(BM_HessVec)->Arg(2000)->Arg(20000);

void BM_NewtonStep(benchmark::State& state) {
  const CompositeProblem p = make_problem(2000, state.range(0));
  OracleConfig oc;
  oc.grad_size0 = oc.grad_cap = 2000;
  oc.hess_size0 = oc.hess_cap = 200;
  OracleState st(oc, 2000);
  const Vector x = random_vector(p.dim(), 5) * 0.1;
  const Vector g = full_gradient(p, x);
  const ProxMetric metric(1.0);
  const ResidualParts parts = residual_parts(x, g, metric, p.reg_weight());
  const JacobianMask mask = jacobian_mask(parts.u, p.reg_weight() * 1.0);
  const SubsampledHessian H = stochastic_hess_operator(p, st, x);
  for (auto _ : state) {
    benchmark::DoNotOptimize(newton_step(parts.F, mask, H, metric, StepControl{1e-8, 12, 1e-4}, SolverKind::CG));
  }
}
BENCHMARK(BM_NewtonStep)->Arg(100)->Arg(1000);

}  // namespace
BENCHMARK_MAIN();
