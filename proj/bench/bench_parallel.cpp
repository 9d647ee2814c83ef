#include <benchmark/benchmark.h>

#include <filesystem>

#include "mub/analyzer.hpp"
#include "mub/harness.hpp"
#include "mub/numcheck.hpp"

using namespace mub;

namespace {

Exec exec_of(const benchmark::State& s) { return s.range(0) ? Exec::Parallel : Exec::Serial; }

const polysys::PolynomialSystem& dita_system() {
  static const auto sys =
      polysys::mu_system(catalog::build(catalog::Family::Dita, {0.0625}), polysys::Mode::approx(12));
  return sys;
}

const std::vector<analyzer::MUVector>& dita0_vectors() {
  static const auto v = [] {
    numcheck::SearchConfig cfg;
    cfg.starts = 20000;
    auto sys = polysys::mu_system(catalog::build(catalog::Family::Dita, {0.0}), polysys::Mode::exact());
    return analyzer::vectors_from_solutions(numcheck::multistart_solve(sys, cfg, Exec::Parallel));
  }();
  return v;
}

void BM_Multistart(benchmark::State& state) {
  numcheck::SearchConfig cfg;
  cfg.starts = 2000;
  cfg.polish_digits = 0;
  for (auto _ : state) benchmark::DoNotOptimize(numcheck::multistart_solve(dita_system(), cfg, exec_of(state)));
}

void BM_PairClassification(benchmark::State& state) {
  const auto& v = dita0_vectors();
  analyzer::Margins m;
  for (auto _ : state) benchmark::DoNotOptimize(analyzer::analyze(v, 6, m, exec_of(state)));
  state.counters["vectors"] = static_cast<double>(v.size());
}

void BM_Grid(benchmark::State& state) {
  harness::GridSpec spec = harness::GridSpec::standard(harness::GridKind::Explicit);
  spec.family = catalog::Family::Dita;
  spec.explicit_points = {{"1/144"}, {"2/144"}, {"3/144"}, {"4/144"}};
  harness::RunConfig cfg;
  cfg.engine = harness::Engine::Numcheck;
  cfg.mode = polysys::Mode::approx(12);
  cfg.starts = 300;
  cfg.jobs = 4;
  for (auto _ : state) benchmark::DoNotOptimize(harness::run_grid(spec, cfg, exec_of(state)));
}

}  // namespace

BENCHMARK(BM_Multistart)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PairClassification)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Grid)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
