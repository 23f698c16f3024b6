// Serial reference vs OpenMP assembly of the global tangent and residual on a
// default-size microstructure in a plastic state.

#include <benchmark/benchmark.h>
#include <omp.h>

#include <map>

#include "fibrevt/assembly.hpp"
#include "fibrevt/microgen.hpp"
#include "fibrevt/solver.hpp"
#include "fibrevt/virtest.hpp"

using namespace fibrevt;

namespace {

struct Fixture {
    Mesh mesh;
    PhaseMaterials mats = PhaseMaterials::defaults();
    std::vector<GaussPointState> states;
    Eigen::VectorXd u;
};

// Vf = 0.40, loaded to 1% strain so the matrix has yielded.
const Fixture& fixture(int nx) {
    static std::map<int, Fixture> cache;
    auto it = cache.find(nx);
    if (it != cache.end()) return it->second;
    Fixture f;
    const auto ms = generate_microstructure(25.8, 0.516, 0.40, 7);
    f.mesh = build_mesh(ms, 25.8 / nx);
    IncrementSolver solver(f.mesh, f.mats, apply_boundary_conditions(f.mesh, 0.0));
    DofSystem sys{Eigen::VectorXd::Zero(f.mesh.num_dofs()), {}};
    f.states = initial_states(f.mesh);
    for (int k = 1; k <= 10; ++k) {
        sys.constraints = apply_boundary_conditions(f.mesh, 0.001 * k);
        solver.solve_increment(sys, f.states);
    }
    f.u = sys.u;
    return cache.emplace(nx, std::move(f)).first->second;
}

void BM_AssembleSerial(benchmark::State& state) {
    const Fixture& f = fixture(static_cast<int>(state.range(0)));
    const StiffnessPattern pattern(f.mesh);
    for (auto _ : state) benchmark::DoNotOptimize(assemble_serial(f.mesh, f.mats, f.states, f.u, pattern));
    state.counters["elements"] = f.mesh.num_elements();
}

void BM_AssembleOpenMP(benchmark::State& state) {
    const Fixture& f = fixture(static_cast<int>(state.range(0)));
    const StiffnessPattern pattern(f.mesh);
    const int saved = omp_get_max_threads();
    omp_set_num_threads(static_cast<int>(state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(assemble(f.mesh, f.mats, f.states, f.u, pattern));
    omp_set_num_threads(saved);
    state.counters["elements"] = f.mesh.num_elements();
    state.counters["threads"] = static_cast<double>(state.range(1));
}

}  // namespace

BENCHMARK(BM_AssembleSerial)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AssembleOpenMP)->ArgsProduct({{50, 100}, {1, 2, 4, 8}})->UseRealTime()->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
