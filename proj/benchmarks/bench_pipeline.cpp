#include "dismap/generators.hpp"
#include "dismap/optimizer.hpp"
#include "dismap/qasm.hpp"

#include <benchmark/benchmark.h>

using namespace dismap;

namespace {

const std::string kConfigDir = DISMAP_CONFIG_DIR;

SystemConfig three_workers() {
    static SystemConfig config = load_system_config(kConfigDir + "/three_workers.json");
    return config;
}

SystemConfig four_workers() {
    static SystemConfig config = load_system_config(kConfigDir + "/four_workers_20.json");
    return config;
}

}  // namespace

static void BM_ParseQasm(benchmark::State& state) {
    const std::string text = emit_qasm(generate_benchmark(BenchKind::Adder, 30, 1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(parse_qasm(text));
    }
}
BENCHMARK(BM_ParseQasm);

static void BM_Lower(benchmark::State& state) {
    const Circuit c = generate_benchmark(BenchKind::Adder, 60, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(lower(c));
    }
}
BENCHMARK(BM_Lower);

static void BM_InteractionGraph(benchmark::State& state) {
    const Circuit c = lower(generate_benchmark(BenchKind::Qaoa, 60, 1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(interaction_graph(c));
    }
}
BENCHMARK(BM_InteractionGraph);

static void BM_ConVst(benchmark::State& state) {
    const SystemConfig config = three_workers();
    const auto candidate = enumerate_epr_candidates(config).front();
    for (auto _ : state) {
        benchmark::DoNotOptimize(con_vst(config, candidate));
    }
}
BENCHMARK(BM_ConVst);

static void BM_TopoCutter(benchmark::State& state) {
    const SystemConfig config = three_workers();
    const auto candidate = enumerate_epr_candidates(config).front();
    const auto vst = con_vst(config, candidate);
    const Circuit c = lower(generate_benchmark(BenchKind::Bv, state.range(0), 1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(topo_cutter(c, vst, config));
    }
}
BENCHMARK(BM_TopoCutter)->Arg(18)->Arg(34);

static void BM_Route(benchmark::State& state) {
    const SystemConfig config = three_workers();
    const auto candidate = enumerate_epr_candidates(config).front();
    const auto vst = con_vst(config, candidate);
    const Circuit c = lower(generate_benchmark(BenchKind::Bv, state.range(0), 1));
    const InteractionGraph ig = interaction_graph(c);
    const Partition partition = topo_cutter(c, vst, config);
    const Layout layout = initial_layout(partition, ig, vst);
    for (auto _ : state) {
        benchmark::DoNotOptimize(route(c, partition, layout, vst, 1));
    }
}
BENCHMARK(BM_Route)->Arg(18)->Arg(34);

static void BM_OptimizeBv18(benchmark::State& state) {
    const SystemConfig config = three_workers();
    const Circuit c = lower(generate_benchmark(BenchKind::Bv, 18, 1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(optimize(c, config, 1));
    }
}
BENCHMARK(BM_OptimizeBv18)->Unit(benchmark::kMillisecond);

static void BM_OptimizeAdder60(benchmark::State& state) {
    const SystemConfig config = four_workers();
    const Circuit c = lower(generate_benchmark(BenchKind::Adder, 60, 1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(optimize(c, config, 1));
    }
}
BENCHMARK(BM_OptimizeAdder60)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
