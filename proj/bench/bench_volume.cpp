// Serial reference against OpenMP quadrature on the volume of truncated simplices.

#include "hyperideal/quadrature.hpp"
#include "hyperideal/simplex.hpp"

#include <benchmark/benchmark.h>

#include <omp.h>

#include <cmath>
#include <numbers>

using namespace hyperideal;

namespace {

constexpr double kPi = std::numbers::pi;

/// Cells of a few simplices with increasingly expensive quadrature: compact
/// truncation, mixed ideal and hyperideal, and vertices close to the sphere.
struct Workload {
    const char* name;
    Vec6 theta;
    IdealTags ideal;
};

const Workload kWorkloads[] = {
    {"hyperideal", Vec6::Constant(2.5), IdealTags{}},
    // vertices 1 and 2 ideal: e12 + e13 + e14 = e12 + e23 + e24 = 2 pi
    {"two ideal", (Vec6() << 2.0, kPi - 1, kPi - 1, kPi - 1, kPi - 1, 2.6).finished(),
     IdealTags{true, true, false, false}},
    {"near ideal", Vec6::Constant(2 * kPi / 3 + 1e-5), IdealTags{}},
};

std::vector<KleinCell> cells_of(const Workload& w) {
    const TruncatedSimplex t = truncate(simplex_from_angles(w.theta, w.ideal));
    return decompose_polytope(t.points, t.point_ideal, t.faces);
}

void BM_serial(benchmark::State& state) {
    const Workload& w = kWorkloads[state.range(0)];
    const auto cells = cells_of(w);
    state.SetLabel(w.name);
    for (auto _ : state) benchmark::DoNotOptimize(integrate_cells_serial(cells, 1e-10, 40).value);
}

void BM_parallel(benchmark::State& state) {
    const Workload& w = kWorkloads[state.range(0)];
    const auto cells = cells_of(w);
    state.SetLabel(std::string(w.name) + ", " + std::to_string(omp_get_max_threads()) + " threads");
    const double reference = integrate_cells_serial(cells, 1e-10, 40).value;
    for (auto _ : state) {
        const double v = integrate_cells_parallel(cells, 1e-10, 40).value;
        if (v != reference) state.SkipWithError("parallel result differs from the serial reference");
        benchmark::DoNotOptimize(v);
    }
}

}  // namespace

BENCHMARK(BM_serial)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_parallel)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
