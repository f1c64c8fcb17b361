#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <string>

#include "generators.hpp"
#include "newsrisk/entity_parser.hpp"
#include "newsrisk/error.hpp"
#include "newsrisk/fixture.hpp"

using namespace newsrisk;

namespace {

EntityRecord company(std::string id, std::string name, std::string ticker, std::string exchange,
                     std::vector<std::string> variants) {
    EntityRecord r;
    r.canonical_id = std::move(id);
    r.display_name = std::move(name);
    r.primary_ticker = ticker;
    r.exchange = std::move(exchange);
    r.name_variants = std::move(variants);
    r.merged_tickers = {std::move(ticker)};
    return r;
}

EntityUniverse sample_universe() {
    return EntityUniverse({
        company("AAPL", "Apple Inc.", "AAPL", "NASDAQ", {"Apple"}),
        company("GS", "Goldman Sachs Group Inc.", "GS", "NYSE", {"Goldman Sachs Group Inc."}),
        company("T", "AT&T Inc.", "T", "NYSE", {"AT&T"}),
        company("TSLA", "Tesla Motors Inc.", "TSLA", "NASDAQ", {"Tesla Motors", "Tesla"}),
    });
}

Article article(std::string id, std::string body, Polarity p = Polarity::positive,
                std::string ts = "2014-02-01T12:00:00Z") {
    Article a;
    a.id = std::move(id);
    a.published_at = parse_timestamp(ts);
    a.polarity = p;
    a.body = std::move(body);
    return a;
}

std::set<std::string> ids(const OccurrenceSet& occ, const EntityUniverse& u) {
    std::set<std::string> out;
    for (auto c : occ.companies) out.insert(u[c].canonical_id);
    return out;
}

std::set<std::string> extract(const std::string& body) {
    static const auto u = sample_universe();
    static const auto m = compile_matchers(u);
    return ids(extract_occurrences(article("a", body), m), u);
}

}  // namespace

TEST(Extract, ExchangeQualifiedTicker) {
    EXPECT_EQ(extract("I am long (NASDAQ:TSLA) this quarter"), std::set<std::string>{"TSLA"});
    EXPECT_EQ(extract("I am long (NASDAQ: TSLA) this quarter"), std::set<std::string>{"TSLA"});
    EXPECT_EQ(extract("( nasdaq :TSLA )"), std::set<std::string>{"TSLA"});
    EXPECT_TRUE(extract("(NASDAQ:T)").empty());
}

TEST(Extract, SuffixStrippedName) {
    const auto forms = suffix_stripped_forms("Goldman Sachs Group Inc.", MatcherConfig{}.legal_suffixes);
    EXPECT_NE(std::find(forms.begin(), forms.end(), "Goldman Sachs"), forms.end());
    EXPECT_EQ(extract("An upgrade for Goldman Sachs today"), std::set<std::string>{"GS"});
    EXPECT_EQ(extract("GOLDMAN SACHS beat"), std::set<std::string>{"GS"});
}

TEST(Extract, RepeatedMentionsCountOnce) {
    const auto u = sample_universe();
    const auto m = compile_matchers(u);
    const auto occ = extract_occurrences(article("a", "AAPL AAPL Apple Inc."), m);
    EXPECT_EQ(occ.companies.size(), 1u);
    EXPECT_EQ(ids(occ, u), std::set<std::string>{"AAPL"});
    EXPECT_GE(m.find_all("AAPL AAPL Apple Inc.").size(), 3u);
}

TEST(Extract, LowercaseProseDoesNotMatch) {
    EXPECT_TRUE(extract("the apple pie was great").empty());
    EXPECT_TRUE(extract("pineapple and Applesauce, aapl").empty());
    EXPECT_TRUE(extract("tesla coils are tsla-like").empty());
}

TEST(Extract, ShortTickersNeedExchange) {
    EXPECT_TRUE(extract("T is up, and so is GS").empty());
    EXPECT_EQ(extract("shares of (NYSE:T) and (NYSE: GS)"), (std::set<std::string>{"GS", "T"}));
    EXPECT_EQ(extract("AT&T reported"), std::set<std::string>{"T"});
}

TEST(Extract, PolarityIsCopied) {
    const auto u = sample_universe();
    const auto m = compile_matchers(u);
    EXPECT_EQ(extract_occurrences(article("n", "Tesla", Polarity::negative), m).polarity,
              Polarity::negative);
}

TEST(Compile, VariantCollisionNamesBoth) {
    EntityUniverse u({company("NB", "National Bank", "NBK", "NYSE", {"National"}),
                      company("NG", "National Grid", "NGG", "NYSE", {"National"})});
    try {
        compile_matchers(u);
        FAIL() << "expected collision";
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("NB"), std::string::npos);
        EXPECT_NE(msg.find("NG"), std::string::npos);
    }
}

TEST(ParseCorpus, GroupsByQuarter) {
    const auto u = sample_universe();
    const auto m = compile_matchers(u);
    std::vector<Article> articles{
        article("a", "Apple", Polarity::positive, "2014-01-05T00:00:00Z"),
        article("b", "Tesla", Polarity::negative, "2014-02-05T00:00:00Z"),
        article("c", "nothing", Polarity::positive, "2014-03-31T23:59:59Z"),
        article("d", "Apple and Tesla", Polarity::positive, "2014-04-01T00:00:00Z"),
    };
    const auto parsed = parse_corpus(articles, m);
    ASSERT_EQ(parsed.quarters.size(), 2u);
    EXPECT_EQ(parsed.quarters[0].quarter, (Quarter{2014, 1}));
    EXPECT_EQ(parsed.quarters[0].sets.size(), 3u);
    EXPECT_EQ(parsed.quarters[1].sets.size(), 1u);
    EXPECT_TRUE(parsed.quarters[0].sets[2].companies.empty());
    EXPECT_EQ(parsed.find(Quarter{2014, 2}), &parsed.quarters[1]);
    EXPECT_EQ(parsed.find(Quarter{2014, 3}), nullptr);
}

TEST(ParseCorpus, EmptyCorpus) {
    const auto m = compile_matchers(sample_universe());
    const auto parsed = parse_corpus({}, m);
    EXPECT_TRUE(parsed.quarters.empty());
    EXPECT_EQ(parsed.excluded_articles, 0u);
}

TEST(ParseCorpus, ExcludedArticlesAreCounted) {
    const auto m = compile_matchers(sample_universe());
    auto a = article("a", "Apple");
    a.excluded = true;
    const auto parsed = parse_corpus({a, article("b", "Tesla")}, m);
    EXPECT_EQ(parsed.excluded_articles, 1u);
    ASSERT_EQ(parsed.quarters.size(), 1u);
    EXPECT_EQ(parsed.quarters[0].sets.size(), 1u);
}

TEST(ParseCorpus, FixtureMentionsRecoveredExactly) {
    const auto fx = generate_fixture(FixtureSpec{});
    const auto m = compile_matchers(fx.universe);
    std::size_t planted = 0;
    for (const auto& a : fx.articles) {
        const auto got = ids(extract_occurrences(a, m), fx.universe);
        auto it = fx.truth.mentions.find(a.id);
        const std::set<std::string> want = it == fx.truth.mentions.end() ? std::set<std::string>{}
                                                                         : it->second;
        EXPECT_EQ(got, want) << a.id;
        planted += want.size();
    }
    EXPECT_GT(planted, 0u);
}

TEST(ParseCorpus, ThreadCountDoesNotChangeResult) {
    FixtureSpec spec;
    spec.articles = 400;
    const auto fx = generate_fixture(spec);
    const auto m = compile_matchers(fx.universe);
    const auto one = parse_corpus(fx.articles, m, 1);
    const auto four = parse_corpus(fx.articles, m, 4);
    ASSERT_EQ(one.quarters.size(), four.quarters.size());
    for (std::size_t q = 0; q < one.quarters.size(); ++q) {
        ASSERT_EQ(one.quarters[q].sets.size(), four.quarters[q].sets.size());
        for (std::size_t i = 0; i < one.quarters[q].sets.size(); ++i) {
            EXPECT_EQ(one.quarters[q].sets[i].companies, four.quarters[q].sets[i].companies);
        }
    }
}

TEST(ParseCorpus, UniverseOrderDoesNotMatter) {
    // Records are re-sorted by canonical_id, so a shuffled input must compile identically.
    auto records = sample_universe().records();
    std::reverse(records.begin(), records.end());
    const EntityUniverse shuffled(records);
    const auto u = sample_universe();
    const auto a = compile_matchers(u);
    const auto b = compile_matchers(shuffled);
    const std::string text = "Apple, (NASDAQ:TSLA), Goldman Sachs and AT&T";
    EXPECT_EQ(ids(extract_occurrences(article("x", text), a), u),
              ids(extract_occurrences(article("x", text), b), shuffled));
}

TEST(Properties, RemovingACompanyNeverAddsOthers) {
    FixtureSpec spec;
    spec.articles = 300;
    const auto fx = generate_fixture(spec);
    const auto full = compile_matchers(fx.universe);
    gen::Rng rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        const auto pick = rng.range(0, static_cast<std::int64_t>(fx.universe.size()) - 1);
        const auto& removed = fx.universe[static_cast<std::size_t>(pick)].canonical_id;
        const auto smaller_u = fx.universe.without(removed);
        const auto smaller = compile_matchers(smaller_u);
        for (const auto& a : fx.articles) {
            auto before = ids(extract_occurrences(a, full), fx.universe);
            before.erase(removed);
            const auto after = ids(extract_occurrences(a, smaller), smaller_u);
            EXPECT_TRUE(std::includes(before.begin(), before.end(), after.begin(), after.end()))
                << a.id << " without " << removed;
        }
    }
}
