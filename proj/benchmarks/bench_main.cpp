#include <benchmark/benchmark.h>

#include "orsim/rng.hpp"
#include "orsim/selector.hpp"

namespace {

// Random topology with a dense candidate band in front of the sender.
orsim::Topology make_topology(unsigned nodes, std::uint64_t seed) {
    orsim::RngStream rng(seed);
    std::vector<orsim::Vec2> positions;
    std::vector<double> ranges;
    const orsim::Area area{600.0, 600.0};
    positions.push_back({50.0, 300.0});   // sender
    positions.push_back({550.0, 300.0});  // destination
    ranges.push_back(260.0);
    ranges.push_back(260.0);
    for (unsigned i = 2; i < nodes; ++i) {
        positions.push_back({rng.uniform_real(80.0, 320.0), rng.uniform_real(180.0, 420.0)});
        ranges.push_back(260.0);
    }
    return orsim::Topology::build(positions, ranges, area);
}

void bench_enumerate(benchmark::State& state) {
    const auto t = make_topology(static_cast<unsigned>(state.range(0)), 42);
    const auto model = orsim::LinkProbModel::distance_decay();
    const auto cfs = orsim::build_cfs(t, model, 0, 1, {});
    const auto matrices = orsim::neighbor_matrices(t, cfs);
    for (auto _ : state) {
        auto nets = orsim::enumerate_relay_networks(cfs, matrices, {});
        benchmark::DoNotOptimize(nets);
    }
}
BENCHMARK(bench_enumerate)->Arg(8)->Arg(12)->Arg(16);

void bench_select(benchmark::State& state) {
    const auto t = make_topology(static_cast<unsigned>(state.range(0)), 42);
    const auto model = orsim::LinkProbModel::distance_decay();
    const auto cfs = orsim::build_cfs(t, model, 0, 1, {});
    const auto matrices = orsim::neighbor_matrices(t, cfs);
    for (auto _ : state) {
        auto result = orsim::select_relay_network(cfs, matrices);
        benchmark::DoNotOptimize(result);
    }
}
BENCHMARK(bench_select)->Arg(8)->Arg(12)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
