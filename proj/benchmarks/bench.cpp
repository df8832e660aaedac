#include <benchmark/benchmark.h>

#include "gptr/gp.hpp"
#include "gptr/reactor.hpp"
#include "gptr/rng.hpp"
#include "gptr/trust_region.hpp"

namespace {

gptr::Dataset random_dataset(int n, int dim, std::uint64_t seed) {
    gptr::RngEngine rng(seed);
    gptr::Dataset data;
    for (int i = 0; i < n; ++i) {
        gptr::Vector x(dim);
        for (int d = 0; d < dim; ++d) x[d] = 4.0 * rng.uniform() - 2.0;
        data.append(x, x.squaredNorm() + 0.05 * rng.normal());
    }
    return data;
}

gptr::Hyperparams bench_theta(int dim) {
    return gptr::Hyperparams::isotropic(dim, 1.5, 0.7, 0.05);
}

void bm_cov_matrix(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const gptr::Dataset data = random_dataset(n, 3, 11);
    const gptr::Hyperparams theta = bench_theta(3);
    for (auto _ : state)
        benchmark::DoNotOptimize(gptr::cov_matrix(data.inputs, theta));
}

void bm_fit(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const gptr::Dataset data = random_dataset(n, 3, 12);
    const gptr::Hyperparams theta = bench_theta(3);
    for (auto _ : state)
        benchmark::DoNotOptimize(gptr::GpModel::fit(data, theta));
}

void bm_with_point(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const gptr::Dataset data = random_dataset(n, 3, 13);
    const gptr::GpModel model = gptr::GpModel::fit(data, bench_theta(3));
    const gptr::Vector x = gptr::Vector::Constant(3, 0.3);
    for (auto _ : state)
        benchmark::DoNotOptimize(model.with_point(x, 1.0));
}

void bm_posterior_mean(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const gptr::Dataset data = random_dataset(n, 3, 14);
    const gptr::GpModel model = gptr::GpModel::fit(data, bench_theta(3));
    const gptr::Vector x = gptr::Vector::Constant(3, 0.25);
    for (auto _ : state) benchmark::DoNotOptimize(model.posterior_mean(x));
}

void bm_mean_grad(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const gptr::Dataset data = random_dataset(n, 3, 15);
    const gptr::GpModel model = gptr::GpModel::fit(data, bench_theta(3));
    const gptr::Vector x = gptr::Vector::Constant(3, 0.25);
    for (auto _ : state) benchmark::DoNotOptimize(model.mean_grad(x));
}

void bm_log_marginal_likelihood(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const gptr::Dataset data = random_dataset(n, 3, 16);
    const gptr::Hyperparams theta = bench_theta(3);
    for (auto _ : state)
        benchmark::DoNotOptimize(gptr::log_marginal_likelihood(theta, data));
}

void bm_subproblem(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const gptr::Dataset data = random_dataset(n, 3, 17);
    const gptr::GpModel model = gptr::GpModel::fit(data, bench_theta(3));
    const gptr::GpSurrogate surrogate(model);
    const gptr::Vector center = gptr::Vector::Constant(3, 0.5);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            gptr::solve_subproblem(surrogate, center, 0.8, 8, 21));
}

void bm_simulate_batch(benchmark::State& state) {
    gptr::ReactorParams params;
    params = gptr::apply_scenario(params, gptr::Scenario::I);
    const gptr::ArcInput pi{60.0, 150.0, 1.2e-3};
    for (auto _ : state)
        benchmark::DoNotOptimize(gptr::simulate_batch(pi, params));
}

}  // namespace

BENCHMARK(bm_cov_matrix)->Arg(32)->Arg(128);
BENCHMARK(bm_fit)->Arg(32)->Arg(128);
BENCHMARK(bm_with_point)->Arg(32)->Arg(128);
BENCHMARK(bm_posterior_mean)->Arg(32)->Arg(128);
BENCHMARK(bm_mean_grad)->Arg(32)->Arg(128);
BENCHMARK(bm_log_marginal_likelihood)->Arg(32)->Arg(128);
BENCHMARK(bm_subproblem)->Arg(64);
BENCHMARK(bm_simulate_batch);

BENCHMARK_MAIN();
