// Timings for the inner kernels and one CAVI sweep on the first study's data.

#include <map>

#include <benchmark/benchmark.h>

#include "hmpsbm/fit.hpp"
#include "hmpsbm/initialize.hpp"
#include "hmpsbm/quadrature.hpp"
#include "hmpsbm/study.hpp"
#include "hmpsbm/updates.hpp"

using namespace hmpsbm;

namespace {

struct Fixture {
  StudyInstance data;
  VariationalState state;
};

const Fixture& fixture(int nodes) {
  static std::map<int, Fixture> cache;
  auto it = cache.find(nodes);
  if (it == cache.end()) {
    StudyPoint point = StudySpec::standard(StudyId::s41).grid.front();
    point.num_nodes = nodes;
    Fixture f;
    f.data = make_instance(StudyId::s41, point, 17);
    f.state = initialize_state(f.data.sample.network, f.data.covariates, {}, point.truncation);
    it = cache.emplace(nodes, std::move(f)).first;
  }
  return it->second;
}

void BM_GaussExpectations(benchmark::State& st) {
  const GaussHermiteRule& rule = gauss_hermite_rule(static_cast<int>(st.range(0)));
  double m = -1.0;
  for (auto _ : st) {
    benchmark::DoNotOptimize(gauss_expectations_1d(m, 0.8, rule));
    m += 1e-6;
  }
}
BENCHMARK(BM_GaussExpectations)->Arg(16)->Arg(32)->Arg(64);

void BM_ProbitTable(benchmark::State& st) {
  const Fixture& f = fixture(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(probit_table(f.state, f.data.covariates, gauss_hermite_rule(32)));
  st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_ProbitTable)->Arg(100)->Arg(250)->Arg(500)->Complexity();

void BM_UpdateZ(benchmark::State& st) {
  const Fixture& f = fixture(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(update_z(f.state, f.data.sample.network));
  st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_UpdateZ)->Arg(100)->Arg(250)->Arg(500)->Complexity()->Unit(benchmark::kMillisecond);

void BM_FitSweep(benchmark::State& st) {
  const Fixture& f = fixture(static_cast<int>(st.range(0)));
  FitConfig config;
  config.truncation = {f.state.m_w(), f.state.m_z()};
  config.max_iterations = 1;
  for (auto _ : st)
    benchmark::DoNotOptimize(fit(f.data.sample.network, f.data.covariates, {}, config, f.state));
}
BENCHMARK(BM_FitSweep)->Arg(100)->Arg(250)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
