// Association cost per scan against clutter level, plus the raw solvers.
//   mtt_benchmarks --benchmark_filter=Engine

#include <benchmark/benchmark.h>

#include <vector>

#include "mtt/deepda.hpp"
#include "mtt/engines.hpp"
#include "mtt/error.hpp"
#include "mtt/hungarian.hpp"
#include "mtt/kalman.hpp"
#include "mtt/rng.hpp"
#include "mtt/scenario.hpp"

using namespace mtt;

namespace {

// Predicted tracks and the scan they are associated with, for every scan
// k >= 1 of a few seeded episodes of the crossing scenario.
struct Workload {
  ScenarioConfig config;
  std::vector<std::vector<Track>> predicted;
  std::vector<Scan> scans;
};

Workload make_workload(double e_lambda) {
  Workload w;
  w.config = ScenarioConfig::five_target_crossing();
  w.config.p_d = 0.9;
  w.config.e_lambda = e_lambda;
  const scenario::GroundTruth truth = scenario::generate_truth(w.config);
  const kalman::FilterParams fp;
  const Mat4 p = kalman::steady_state_covariance(fp, kalman::default_initial_covariance());
  for (std::uint64_t s = 0; s < 4; ++s) {
    const std::vector<Scan> scans = scenario::generate_scans(truth, derive_seed(7, {s}));
    for (int k = 1; k < truth.num_scans(); ++k) {
      std::vector<Track> tracks;
      for (int j = 0; j < truth.num_targets(); ++j)
        tracks.push_back(kalman::predict(Track{TargetId{j}, truth.states[k - 1][j], p}, fp));
      w.predicted.push_back(std::move(tracks));
      w.scans.push_back(scans[static_cast<std::size_t>(k)]);
    }
  }
  return w;
}

const deepda::LstmModel& bench_model() {
  static const deepda::LstmModel model = [] {
    deepda::NetConfig cfg;
    cfg.seed = 1;
    return deepda::LstmModel::initialize(cfg, deepda::NormStats::identity(cfg.input_size()));
  }();
  return model;
}

void run_engine(benchmark::State& state, bench::Method method) {
  const double e_lambda = static_cast<double>(state.range(0));
  const Workload w = make_workload(e_lambda);
  const auto engine = bench::make_engine(method, w.config, bench::TrackerSettings{}, &bench_model());
  std::size_t i = 0;
  long guard_hits = 0;
  for (auto _ : state) {
    try {
      benchmark::DoNotOptimize(engine->associate(w.predicted[i], w.scans[i]));
    } catch (const ComplexityError&) {
      ++guard_hits;
    }
    i = (i + 1) % w.scans.size();
  }
  state.counters["guard_hits"] = static_cast<double>(guard_hits);
}

void BM_EngineHA(benchmark::State& state) { run_engine(state, bench::Method::HA); }
void BM_EngineJPDA(benchmark::State& state) { run_engine(state, bench::Method::JPDA); }
void BM_EngineDeepDA(benchmark::State& state) { run_engine(state, bench::Method::DeepDA); }

BENCHMARK(BM_EngineHA)->DenseRange(0, 40, 10)->Arg(5);
BENCHMARK(BM_EngineJPDA)->DenseRange(0, 40, 10)->Arg(5);
BENCHMARK(BM_EngineDeepDA)->DenseRange(0, 40, 10)->Arg(5);

void BM_Hungarian(benchmark::State& state) {
  const auto n = state.range(0);
  Rng rng(3);
  CostMatrix c{Eigen::MatrixXd(n, 2 * n)};
  for (Eigen::Index j = 0; j < c.values.rows(); ++j)
    for (Eigen::Index i = 0; i < c.values.cols(); ++i) c.values(j, i) = rng.uniform(0.0, 10.0);
  for (auto _ : state) benchmark::DoNotOptimize(hungarian(c, 5.0));
  state.SetComplexityN(n);
}
BENCHMARK(BM_Hungarian)->RangeMultiplier(2)->Range(4, 128)->Complexity(benchmark::oNCubed);

void BM_LstmForwardScan(benchmark::State& state) {
  const Workload w = make_workload(20.0);
  const deepda::LstmModel& model = bench_model();
  std::size_t i = 0;
  for (auto _ : state) {
    Scan scan = w.scans[i];
    if (static_cast<int>(scan.measurements.size()) > model.config.m_max) {
      scan.measurements.resize(static_cast<std::size_t>(model.config.m_max));
      scan.origins.reset();
    }
    benchmark::DoNotOptimize(deepda::forward_scan(model, w.predicted[i], scan));
    i = (i + 1) % w.scans.size();
  }
}
BENCHMARK(BM_LstmForwardScan);

}  // namespace

BENCHMARK_MAIN();
