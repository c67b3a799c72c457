#include <benchmark/benchmark.h>

#include "selfadj/boundary.hpp"
#include "selfadj/eigensolve.hpp"
#include "selfadj/femassembly.hpp"
#include "selfadj/manifold.hpp"

using namespace selfadj;

namespace {

IntervalManifold circle() {
    const std::vector<std::pair<double, double>> iv{{0.0, 2.0 * kPi}};
    const std::vector<double> eta{1.0};
    return build_manifold(iv, eta);
}

BoundaryUnitary quasi_periodic() { return preset(presets::QuasiPeriodic{{{0, 1}}, 0.5 * kPi}, 2); }

void BM_BoundarySystem(benchmark::State& state) {
    const Mesh mesh = subdivide(circle(), static_cast<std::size_t>(state.range(0)));
    const BoundaryUnitary u = quasi_periodic();
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_boundary_values(boundary_system(u, mesh)));
    }
}
BENCHMARK(BM_BoundarySystem)->Arg(250)->Arg(2000);

void BM_AssemblePencil(benchmark::State& state) {
    const Mesh mesh = subdivide(circle(), static_cast<std::size_t>(state.range(0)));
    const BoundaryFunctionSet bfs = solve_boundary_values(boundary_system(quasi_periodic(), mesh));
    for (auto _ : state) {
        benchmark::DoNotOptimize(assemble_pencil(mesh, bfs));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AssemblePencil)->RangeMultiplier(2)->Range(250, 4000)->Complexity();

void BM_SolvePencil(benchmark::State& state) {
    const Mesh mesh = subdivide(circle(), static_cast<std::size_t>(state.range(0)));
    const BoundaryFunctionSet bfs = solve_boundary_values(boundary_system(quasi_periodic(), mesh));
    const SpectralPencil pencil = assemble_pencil(mesh, bfs);
    const auto k = static_cast<std::size_t>(state.range(1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_pencil(pencil, k, bfs));
    }
}
BENCHMARK(BM_SolvePencil)->Args({250, 5})->Args({800, 5})->Args({2000, 5})->Args({250, 50})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
