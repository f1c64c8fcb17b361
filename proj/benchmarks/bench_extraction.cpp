#include <benchmark/benchmark.h>

#include "newsrisk/entity_parser.hpp"
#include "newsrisk/fixture.hpp"

namespace {

const newsrisk::Fixture& fixture() {
    static const auto fx = [] {
        newsrisk::FixtureSpec spec;
        spec.companies = 200;
        spec.articles = 4000;
        return newsrisk::generate_fixture(spec);
    }();
    return fx;
}

void BM_CompileMatchers(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(newsrisk::compile_matchers(fixture().universe));
}
BENCHMARK(BM_CompileMatchers)->Unit(benchmark::kMicrosecond);

void BM_ParseCorpus(benchmark::State& state) {
    const auto matchers = newsrisk::compile_matchers(fixture().universe);
    const auto threads = static_cast<unsigned>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(newsrisk::parse_corpus(fixture().articles, matchers, threads));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(fixture().articles.size()));
}
BENCHMARK(BM_ParseCorpus)->Arg(1)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);

}  // namespace
