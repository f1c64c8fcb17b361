#include <benchmark/benchmark.h>

#include <numeric>

#include "newsrisk/fixture.hpp"
#include "newsrisk/riskrank.hpp"

namespace {

void BM_RiskrankQuarter(benchmark::State& state) {
    newsrisk::FixtureSpec spec;
    spec.companies = 500;
    spec.articles = 20000;
    spec.quarters = 1;
    spec.cross_mention_rate = 0.2;
    const auto fx = newsrisk::generate_fixture(spec);
    const auto parsed = newsrisk::parse_corpus(fx.articles, newsrisk::compile_matchers(fx.universe));
    const auto nets = newsrisk::build_networks(parsed.quarters.front().sets,
                                               parsed.quarters.front().quarter, fx.universe.size());
    std::vector<std::size_t> subset(fx.universe.size());
    std::iota(subset.begin(), subset.end(), 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(newsrisk::riskrank_quarter(nets, subset, {}));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(subset.size()));
}
BENCHMARK(BM_RiskrankQuarter)->Unit(benchmark::kMillisecond);

}  // namespace
