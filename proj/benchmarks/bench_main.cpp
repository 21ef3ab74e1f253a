#include <benchmark/benchmark.h>

#include "pluri/disc.hpp"
#include "pluri/nelder_mead.hpp"
#include "pluri/perron.hpp"

namespace {

using namespace pluri;

PiecewiseObjective paper_objective() {
    return PiecewiseObjective(Domain::ball(Point::c1(0.0), 1.0, "X"),
                              Domain::ball(Point::c1(0.0), 0.5, "W"), parse_expr("2"),
                              parse_expr("-1"));
}

void bm_expr_eval(benchmark::State& state) {
    const ExprFn e = parse_expr("max(-1,log(2*abs(z1))/log(2)*3-1)");
    const Point p = Point::c1(complexd(0.6, 0.2));
    for (auto _ : state) benchmark::DoNotOptimize(eval_expr(e, p));
}
BENCHMARK(bm_expr_eval);

void bm_poisson_mean(benchmark::State& state) {
    const auto obj = paper_objective();
    AnalyticDisc f;
    f.center = Point::c1(0.6);
    f.degree = 4;
    f.coeffs[0] = {0.1, complexd(0.0, 0.05), 0.02, 0.01};
    const CircleQuadrature q(1024);
    for (auto _ : state) benchmark::DoNotOptimize(poisson_mean(f, obj, q));
}
BENCHMARK(bm_poisson_mean);

void bm_perron_sweep(benchmark::State& state) {
    const auto obj = paper_objective();
    GridSpec grid;
    grid.axes = {{-1.0, 1.0, 64}, {-1.0, 1.0, 64}};
    grid.restriction = obj.X();
    RelaxConfig cfg;
    auto obstacle = [&obj](const Point& p) { return obj.eval_phi(p); };
    auto exterior = [&obj](const Point& p) { return eval_expr(obj.phi1(), p); };
    PerronRelaxer relax(obj.X(), grid, cfg, obstacle, exterior);
    EnvelopeGrid g = relax.initial_grid();
    for (auto _ : state) benchmark::DoNotOptimize(relax.sweep(g));
}
BENCHMARK(bm_perron_sweep);

void bm_nelder_mead(benchmark::State& state) {
    const auto rosenbrock = [](const std::vector<double>& x) {
        double s = 0.0;
        for (std::size_t i = 0; i + 1 < x.size(); ++i)
            s += 100.0 * (x[i + 1] - x[i] * x[i]) * (x[i + 1] - x[i] * x[i]) +
                 (1.0 - x[i]) * (1.0 - x[i]);
        return s;
    };
    for (auto _ : state) {
        NelderMeadOptions opt;
        opt.max_evals = 2000;
        benchmark::DoNotOptimize(nelder_mead(rosenbrock, std::vector<double>(8, 0.0), 0.5, opt));
    }
}
BENCHMARK(bm_nelder_mead);

}  // namespace

BENCHMARK_MAIN();
