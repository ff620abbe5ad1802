#include "fracctl/control_operators.hpp"
#include "fracctl/mild_solver.hpp"
#include "fracctl/mittag_leffler.hpp"
#include "fracctl/nonlocal_problem.hpp"

#include <benchmark/benchmark.h>

using namespace fracctl;

namespace {

// Arguments pick the regime: |x| = 3 (double Taylor), 30 (quad Taylor), 400 (asymptotic).
void BM_MittagLeffler(benchmark::State& state) {
    const double x = -static_cast<double>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(ml(1.5, 1.0, x));
    }
}
BENCHMARK(BM_MittagLeffler)->Arg(3)->Arg(30)->Arg(400);

void BM_Grammian(benchmark::State& state) {
    const int n_t = static_cast<int>(state.range(0));
    const FamilyConfig cfg = FamilyConfig::measured(1.5, BasisConfig::with_modes(6), 1.0);
    const InputOperator B = InputOperator::example(6);
    for (auto _ : state) {
        benchmark::DoNotOptimize(grammian(cfg, B, 1.0, n_t));
    }
}
BENCHMARK(BM_Grammian)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);

void BM_Solve(benchmark::State& state) {
    const int n_t = static_cast<int>(state.range(0));
    const ProblemSpec p = example_problem(1.5, 6, NonlocalWeights{{0.5, 1.0}, {0.1, 0.2}, {0.2, 0.2}});
    const MildSolver solver(p, n_t);
    const GrammianMatrix K = solver.grammian();
    SolverConfig cfg;
    cfg.intervals = n_t;
    const SpectralVector zd = 0.1 * SpectralVector::unit(6, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solver.solve(K, 1e-3, zd, cfg));
    }
}
BENCHMARK(BM_Solve)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
