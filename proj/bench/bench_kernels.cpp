// Serial reference vs OpenMP kernels on a simulated layer.
#include <map>
#include <memory>
#include <benchmark/benchmark.h>

#include "msls/generative.hpp"
#include "msls/kernels.hpp"
#include "msls/sampler.hpp"

namespace {

struct Fixture {
  msls::SimulatedLayer sim;
  msls::PanelCache pc;
  Eigen::MatrixXd loglam;
  Eigen::MatrixXd c;
  Eigen::VectorXd off;

  explicit Fixture(std::size_t n_nodes) {
    auto sc = msls::SimulationScenario::default_scenario();
    sc.n_nodes = n_nodes;
    sc.n_periods = 200;
    sc.centers = msls::SimulationScenario::two_group_centers(n_nodes, Eigen::Vector2d(0.25, 0.75));
    sc.seed = 11;
    sim = msls::simulate_layer(sc);
    pc = msls::PanelCache::build(sim.layer);
    loglam = msls::draw_log_intensity(pc, sim.layer, sim.truth, sim.states, msls::ModelKind::M1);
    c = loglam.leftCols(2);
    off = msls::exposure_covariate(sim.layer);
  }
};

Fixture& fixture(std::size_t n) {
  static std::map<std::size_t, std::unique_ptr<Fixture>> cache;
  auto& f = cache[n];
  if (!f) f = std::make_unique<Fixture>(n);
  return *f;
}

template <bool Par>
void BM_PairStateSums(benchmark::State& st) {
  auto& f = fixture(static_cast<std::size_t>(st.range(0)));
  Eigen::MatrixXd W;
  for (auto _ : st) {
    if constexpr (Par) {
      msls::omp::pair_state_sums(f.pc.y, f.sim.states.states, 2, W);
    } else {
      msls::serial::pair_state_sums(f.pc.y, f.sim.states.states, 2, W);
    }
    benchmark::DoNotOptimize(W.data());
  }
}

template <bool Par>
void BM_PoissonEmissions(benchmark::State& st) {
  auto& f = fixture(static_cast<std::size_t>(st.range(0)));
  Eigen::MatrixXd E;
  for (auto _ : st) {
    if constexpr (Par) {
      msls::omp::poisson_emissions(f.pc, f.c, f.off, E);
    } else {
      msls::serial::poisson_emissions(f.pc, f.c, f.off, E);
    }
    benchmark::DoNotOptimize(E.data());
  }
}

template <bool Par>
void BM_PoissonLogLik(benchmark::State& st) {
  auto& f = fixture(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) {
    double v = Par ? msls::omp::poisson_log_lik_sum(f.pc, f.loglam) : msls::serial::poisson_log_lik_sum(f.pc, f.loglam);
    benchmark::DoNotOptimize(v);
  }
}

template <bool Par>
void BM_LseAccumulate(benchmark::State& st) {
  auto& f = fixture(static_cast<std::size_t>(st.range(0)));
  Eigen::MatrixXd m, s;
  for (auto _ : st) {
    if constexpr (Par) {
      msls::omp::lse_accumulate(f.pc, f.loglam, m, s);
    } else {
      msls::serial::lse_accumulate(f.pc, f.loglam, m, s);
    }
    benchmark::DoNotOptimize(s.data());
  }
}

}  // namespace

BENCHMARK(BM_PairStateSums<false>)->Arg(20)->Arg(100)->Arg(300);
BENCHMARK(BM_PairStateSums<true>)->Arg(20)->Arg(100)->Arg(300);
BENCHMARK(BM_PoissonEmissions<false>)->Arg(20)->Arg(100)->Arg(300);
BENCHMARK(BM_PoissonEmissions<true>)->Arg(20)->Arg(100)->Arg(300);
BENCHMARK(BM_PoissonLogLik<false>)->Arg(20)->Arg(100)->Arg(300);
BENCHMARK(BM_PoissonLogLik<true>)->Arg(20)->Arg(100)->Arg(300);
BENCHMARK(BM_LseAccumulate<false>)->Arg(20)->Arg(100)->Arg(300);
BENCHMARK(BM_LseAccumulate<true>)->Arg(20)->Arg(100)->Arg(300);

BENCHMARK_MAIN();
