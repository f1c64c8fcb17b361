#include <gtest/gtest.h>

#include "newsrisk/corpus.hpp"
#include "newsrisk/fixture.hpp"
#include "tempdir.hpp"

using namespace newsrisk;

TEST(Fixture, SameSeedSameBytes) {
    const auto a = generate_fixture(FixtureSpec{});
    const auto b = generate_fixture(FixtureSpec{});
    EXPECT_EQ(serialize_articles(a.articles), serialize_articles(b.articles));
    EXPECT_EQ(serialize_prices(a.prices), serialize_prices(b.prices));
    EXPECT_EQ(serialize_universe(a.universe), serialize_universe(b.universe));
    EXPECT_EQ(serialize_marketcaps(a.marketcaps), serialize_marketcaps(b.marketcaps));
    EXPECT_EQ(a.truth.drifted, b.truth.drifted);

    FixtureSpec other;
    other.seed = 8;
    EXPECT_NE(serialize_articles(generate_fixture(other).articles), serialize_articles(a.articles));
}

TEST(Fixture, Shape) {
    const FixtureSpec spec;
    const auto fx = generate_fixture(spec);
    EXPECT_EQ(fx.universe.size(), spec.companies);
    EXPECT_EQ(fx.articles.size(), spec.articles);
    EXPECT_EQ(fx.prices.series().size(), spec.companies - spec.companies_without_prices);
    EXPECT_FALSE(fx.truth.drifted.empty());

    std::size_t merged = 0, short_tickers = 0;
    for (const auto& r : fx.universe.records()) {
        merged += r.merged_tickers.size() > 1;
        short_tickers += r.primary_ticker.size() <= 2;
    }
    EXPECT_EQ(merged, spec.merged_share_classes);
    EXPECT_EQ(short_tickers, spec.short_ticker_companies);

    const auto& first = fx.universe[0].canonical_id;
    Quarter third = spec.first_quarter.next().next();
    EXPECT_FALSE(fx.marketcaps.get(first, third));
    EXPECT_TRUE(fx.marketcaps.get(first, spec.first_quarter));

    for (const auto& a : fx.articles) {
        const auto q = quarter_of(a.published_at);
        EXPECT_GE(q, spec.first_quarter);
    }
}

TEST(Fixture, WeekdaysOnlyByDefault) {
    const auto fx = generate_fixture(FixtureSpec{});
    for (const auto& [id, s] : fx.prices.series()) {
        for (auto d : s.dates) {
            const std::chrono::weekday wd{d};
            EXPECT_NE(wd, std::chrono::Saturday);
            EXPECT_NE(wd, std::chrono::Sunday);
        }
    }
}

TEST(Fixture, WriteAndReload) {
    TempDir dir;
    FixtureSpec spec;
    spec.articles = 200;
    const auto fx = generate_fixture(spec);
    write_fixture(fx, dir.path());
    for (const char* f : {"articles.jsonl", "universe.tsv", "prices.tsv", "marketcaps.tsv", "truth.tsv"}) {
        EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
    }
    const auto u = load_universe(dir / "universe.tsv");
    EXPECT_EQ(serialize_universe(u), serialize_universe(fx.universe));
    EXPECT_EQ(load_articles(dir / "articles.jsonl").size(), spec.articles);
    EXPECT_EQ(serialize_prices(load_prices(dir / "prices.tsv", u)), serialize_prices(fx.prices));
}
