#include <benchmark/benchmark.h>

#include <kode/dynamics.hpp>
#include <kode/eval.hpp>
#include <kode/kernel.hpp>
#include <kode/regression.hpp>

namespace {

// Predator-prey training data: the densest workload the CLI produces.
kode::TimeSeries training_series(int samples) {
  kode::LotkaVolterraParams params;
  kode::State x0(2);
  x0 << 20.0, 10.0;
  return kode::simulate(params, x0, 0.0, samples, 0.5);
}

std::vector<kode::State> standardized_states(const kode::TimeSeries& ts) {
  const auto scaler = kode::StandardScaler::fit(ts.states);
  std::vector<kode::State> out;
  out.reserve(ts.states.size());
  for (const auto& s : ts.states) out.push_back(scaler.apply(s));
  return out;
}

void bm_gram_matrix(benchmark::State& state) {
  const auto ts = training_series(static_cast<int>(state.range(0)));
  const auto pts = standardized_states(ts);
  const double bw = kode::median_heuristic_bandwidth(pts);
  for (auto _ : state) {
    auto g = kode::gram_matrix(pts, bw);
    benchmark::DoNotOptimize(g.entries.data());
  }
  state.SetComplexityN(state.range(0));
}

void bm_median_bandwidth(benchmark::State& state) {
  const auto ts = training_series(static_cast<int>(state.range(0)));
  const auto pts = standardized_states(ts);
  for (auto _ : state) {
    double bw = kode::median_heuristic_bandwidth(pts);
    benchmark::DoNotOptimize(bw);
  }
  state.SetComplexityN(state.range(0));
}

void bm_fit_batch(benchmark::State& state) {
  const auto ts = training_series(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto model = kode::fit_batch(ts, {});
    benchmark::DoNotOptimize(model.weights.data());
  }
  state.SetComplexityN(state.range(0));
}

void bm_fit_online(benchmark::State& state) {
  const auto ts = training_series(static_cast<int>(state.range(0)));
  kode::FitConfig cfg;
  cfg.lambda = 1e-3;
  cfg.online.passes = 50;
  cfg.online.tolerance = 0.0;  // run every pass so the cost is fixed
  for (auto _ : state) {
    auto model = kode::fit_online(ts, cfg);
    benchmark::DoNotOptimize(model.weights.data());
  }
  state.SetComplexityN(state.range(0));
}

void bm_evaluate_field(benchmark::State& state) {
  const auto ts = training_series(static_cast<int>(state.range(0)));
  const auto model = kode::fit_batch(ts, {});
  const kode::State x = ts.states[ts.size() / 2];
  for (auto _ : state) {
    auto f = kode::evaluate_field(model, x);
    benchmark::DoNotOptimize(f.data());
  }
  state.SetComplexityN(state.range(0));
}

void bm_forecast_rk4(benchmark::State& state) {
  const auto ts = training_series(250);
  const auto model = kode::fit_batch(ts, {});
  const auto field = kode::model_field(model);
  const double t1 = ts.times.front() + state.range(0) * 0.05;
  for (auto _ : state) {
    auto traj = kode::integrate(field, ts.states.front(), ts.times.front(),
                                t1, 0.05, kode::Solver::rk4);
    benchmark::DoNotOptimize(traj.states.data());
  }
  state.SetComplexityN(state.range(0));
}

void bm_one_step_errors(benchmark::State& state) {
  const auto ts = training_series(static_cast<int>(state.range(0)));
  const auto model = kode::fit_batch(ts, {});
  for (auto _ : state) {
    auto report = kode::one_step_errors(model, ts);
    benchmark::DoNotOptimize(report.one_step_rmse);
  }
  state.SetComplexityN(state.range(0));
}

BENCHMARK(bm_gram_matrix)->Arg(64)->Arg(256)->Arg(1024)->Complexity();
BENCHMARK(bm_median_bandwidth)->Arg(64)->Arg(256)->Arg(1024)->Complexity();
BENCHMARK(bm_fit_batch)->Arg(64)->Arg(256)->Arg(512)->Complexity();
BENCHMARK(bm_fit_online)->Arg(64)->Arg(256)->Arg(512)->Complexity();
BENCHMARK(bm_evaluate_field)->Arg(64)->Arg(256)->Arg(1024)->Complexity();
BENCHMARK(bm_forecast_rk4)->Arg(100)->Arg(400)->Complexity();
BENCHMARK(bm_one_step_errors)->Arg(64)->Arg(256)->Complexity();

}  // namespace

BENCHMARK_MAIN();
