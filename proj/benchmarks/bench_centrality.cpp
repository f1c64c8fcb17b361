#include <benchmark/benchmark.h>

#include <random>

#include "newsrisk/centrality.hpp"

namespace {

newsrisk::QuarterNetwork sparse_network(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> node(0, n - 1);
    std::uniform_int_distribution<int> weight(1, 88);
    newsrisk::QuarterNetwork net;
    net.node_weight.assign(n, 0);
    // Roughly 1.8 edges per node, the density of real quarterly networks.
    for (std::size_t e = 0; e < n * 9 / 10; ++e) {
        const auto i = node(rng), j = node(rng);
        if (i == j) continue;
        const int w = weight(rng);
        net.add_edge(i, j, w);
        net.node_weight[i] += w;
        net.node_weight[j] += w;
    }
    return net;
}

void BM_InformationCentrality(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto smoothed = newsrisk::smooth(sparse_network(n, 42), 0.1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(newsrisk::information_centrality(smoothed));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_InformationCentrality)->RangeMultiplier(2)->Range(64, 512)->Complexity()->Unit(benchmark::kMillisecond);

void BM_Smooth(benchmark::State& state) {
    const auto net = sparse_network(500, 7);
    for (auto _ : state) benchmark::DoNotOptimize(newsrisk::smooth(net, 0.1));
}
BENCHMARK(BM_Smooth)->Unit(benchmark::kMicrosecond);

}  // namespace
