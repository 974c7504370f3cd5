#include <benchmark/benchmark.h>

#include "mtqc/decoder.hpp"
#include "mtqc/field.hpp"

using namespace mtqc;

namespace {

std::shared_ptr<const CodePatch> patch(int d) {
    static const Layout layout = build_layout(1296);
    return std::make_shared<const CodePatch>(CodePatch::rotated(layout, d));
}

void BM_FrameRounds(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const auto prog = compile_cycle(patch(d), {}, TimingParams{});
    const auto noise = NoiseParams::uniform(1e-3, 1);
    std::uint64_t trial = 0;
    for (auto _ : state) benchmark::DoNotOptimize(run_rounds(prog, noise, d, Basis::Z, trial++));
}
BENCHMARK(BM_FrameRounds)->Arg(3)->Arg(5)->Arg(7)->Unit(benchmark::kMicrosecond);

void BM_DecodeShot(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const auto model = memory_model(d, d, NoiseParams::uniform(5e-3, 1));
    const auto& prog = model->programs().front();
    std::vector<SyndromeHistory> shots;
    for (std::uint64_t t = 0; t < 256; ++t) shots.push_back(run_rounds(prog, model->noise(), d, Basis::Z, t).history);
    std::size_t k = 0;
    for (auto _ : state) benchmark::DoNotOptimize(decode(build_graph(shots[k++ % shots.size()], model)));
}
BENCHMARK(BM_DecodeShot)->Arg(3)->Arg(5)->Arg(7)->Unit(benchmark::kMicrosecond);

void BM_BemSolve(benchmark::State& state) {
    MeshOptions mesh;
    mesh.density = static_cast<double>(state.range(0)) / 2.0;
    const auto g = module_boundary(150e-6, 100e-6, 1.5e-3, 0.0, {10e-6, 10e-6, 10e-6});
    for (auto _ : state) {
        const auto s = solve_charges(g, mesh);
        state.counters["panels"] = static_cast<double>(s.panels.size());
        benchmark::DoNotOptimize(s.charge.data());
    }
}
BENCHMARK(BM_BemSolve)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
