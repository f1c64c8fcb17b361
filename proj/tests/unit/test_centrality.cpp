#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "generators.hpp"
#include "newsrisk/centrality.hpp"
#include "newsrisk/error.hpp"
#include "newsrisk/fixture.hpp"
#include "oracles.hpp"

using namespace newsrisk;

namespace {

constexpr double kTol = 1e-9;

QuarterNetwork network_of(std::size_t n, std::initializer_list<std::tuple<int, int, int>> edges) {
    QuarterNetwork net;
    net.quarter = {2014, 2};
    net.node_weight.assign(n, 0);
    for (auto [i, j, w] : edges) {
        net.add_edge(static_cast<std::size_t>(i), static_cast<std::size_t>(j), w);
        net.node_weight[static_cast<std::size_t>(i)] += w;
        net.node_weight[static_cast<std::size_t>(j)] += w;
    }
    return net;
}

EntityUniverse letters(std::size_t n) {
    std::vector<EntityRecord> records;
    for (std::size_t i = 0; i < n; ++i) {
        EntityRecord r;
        r.canonical_id = std::string(1, static_cast<char>('A' + i));
        r.primary_ticker = r.canonical_id + r.canonical_id + r.canonical_id;
        r.name_variants = {r.canonical_id};
        r.merged_tickers = {r.primary_ticker};
        records.push_back(r);
    }
    return EntityUniverse(records);
}

std::vector<std::size_t> order_of(const std::vector<RankedScore>& ranked) {
    std::vector<std::size_t> out;
    for (const auto& r : ranked) out.push_back(r.company);
    return out;
}

QuarterNetworks fixture_quarter(NetworkPolarity, Quarter q, EntityUniverse& universe) {
    const auto fx = generate_fixture(FixtureSpec{});
    universe = fx.universe;
    const auto parsed = parse_corpus(fx.articles, compile_matchers(fx.universe));
    const auto* occ = parsed.find(q);
    return build_networks(occ->sets, q, fx.universe.size());
}

}  // namespace

TEST(InformationCentrality, TwoNodesAreEqual) {
    const auto info = information_centrality(smooth(network_of(2, {{0, 1, 3}}), 0.1));
    ASSERT_EQ(info.size(), 2u);
    EXPECT_NEAR(info[0], info[1], kTol);
    EXPECT_GT(info[0], 0.0);
}

TEST(InformationCentrality, PathCentreIsHighest) {
    const auto net = network_of(3, {{0, 1, 1}, {1, 2, 1}});
    const auto info = information_centrality(smooth(net, 0.1));
    const auto want = oracle::information_centrality(gen::dense(net), gen::node_counts(net), 0.1);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(info[i], want[i], kTol);
    EXPECT_GT(info[1], info[0]);
    EXPECT_NEAR(info[0], info[2], kTol);

    const auto r = minmax_rescale(info);
    EXPECT_DOUBLE_EQ(r.values[1], 1.0);
    EXPECT_DOUBLE_EQ(r.values[0], 0.0);
    EXPECT_NEAR(r.values[2], 0.0, kTol);
}

TEST(InformationCentrality, CycleOfFiveIsUniform) {
    const auto net = network_of(5, {{0, 1, 2}, {1, 2, 2}, {2, 3, 2}, {3, 4, 2}, {4, 0, 2}});
    const auto info = information_centrality(smooth(net, 0.1));
    for (std::size_t i = 1; i < 5; ++i) EXPECT_NEAR(info[i], info[0], kTol);
}

TEST(InformationCentrality, MatchesDenseOracle) {
    gen::Rng rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        const auto n = static_cast<std::size_t>(rng.range(2, 10));
        const auto net = gen::network(rng, n, rng.uniform(0.1, 0.9), 6);
        for (double alpha : {0.1, 1.0}) {
            for (auto mode : {NodeWeight::strength, NodeWeight::article_count}) {
                const bool strength = mode == NodeWeight::strength;
                const auto want = oracle::information_centrality(gen::dense(net),
                                                                 gen::node_counts(net), alpha, strength);
                if (!strength && std::any_of(want.begin(), want.end(),
                                             [](double v) { return !(v > 0.0); })) {
                    EXPECT_THROW(information_centrality(smooth(net, alpha), {mode}), NumericalError);
                    continue;
                }
                const auto got = information_centrality(smooth(net, alpha), {mode});
                for (std::size_t i = 0; i < n; ++i) {
                    EXPECT_NEAR(got[i], want[i], kTol * std::max(1.0, std::fabs(want[i])));
                }
            }
        }
    }
}

TEST(InformationCentrality, ConditionCapNamesQuarter) {
    const auto net = network_of(3, {{0, 1, 1}});
    CentralityOptions opts;
    opts.condition_cap = 1.0;
    try {
        information_centrality(smooth(net, 0.1), opts);
        FAIL() << "expected NumericalError";
    } catch (const NumericalError& e) {
        EXPECT_NE(std::string(e.what()).find("2014Q2"), std::string::npos);
    }
}

TEST(InformationCentrality, ArticleCountDiagonalCanFail) {
    // With the count diagonal B is indefinite here and every score comes out
    // negative; the strength diagonal keeps them positive.
    auto net = network_of(5, {{0, 1, 8}, {0, 4, 4}, {2, 3, 9}, {3, 4, 5}});
    net.node_weight = {8, 10, 12, 10, 7};
    const auto s = smooth(net, 0.1);
    EXPECT_THROW(information_centrality(s, {NodeWeight::article_count}), NumericalError);
    const auto info = information_centrality(s);
    EXPECT_TRUE(std::all_of(info.begin(), info.end(), [](double v) { return v > 0.0; }));
}

TEST(Rescale, Examples) {
    const std::vector<double> v{1, 2, 3};
    const auto r = minmax_rescale(v);
    EXPECT_EQ(r.values, (std::vector<double>{0.0, 0.5, 1.0}));
    EXPECT_FALSE(r.degenerate);

    const std::vector<double> same{5, 5};
    const auto d = minmax_rescale(same);
    EXPECT_EQ(d.values, (std::vector<double>{0.0, 0.0}));
    EXPECT_TRUE(d.degenerate);
}

TEST(NormalizedScore, DividesByCap) {
    const auto u = letters(3);
    MarketCapTable caps;
    const Quarter q{2014, 1};
    caps.set("A", q, 1.0);
    caps.set("B", q, 2.0);
    const std::vector<double> rescaled{1.0, 0.5, 0.7};
    const auto j = normalized_score(rescaled, u, caps, q);
    ASSERT_EQ(j.size(), 2u);
    EXPECT_DOUBLE_EQ(j[0].score, 1.0);
    EXPECT_DOUBLE_EQ(j[1].score, 0.25);
}

TEST(NormalizedScore, SmallerCompanyRanksHigher) {
    const auto u = letters(2);
    MarketCapTable caps;
    const Quarter q{2014, 1};
    caps.set("A", q, 10.0);
    caps.set("B", q, 1.0);
    const std::vector<double> rescaled{0.6, 0.6};
    EXPECT_EQ(order_of(rank(normalized_score(rescaled, u, caps, q))), (std::vector<std::size_t>{1, 0}));
}

TEST(Rank, OrdersDescendingWithIdTieBreak) {
    const auto r = rank({{0, 3.0}, {1, 1.0}, {2, 2.0}});
    EXPECT_EQ(order_of(r), (std::vector<std::size_t>{0, 2, 1}));
    EXPECT_EQ(r[2].rank, 3u);
    const auto tied = rank({{2, 1.0}, {0, 1.0}, {1, 1.0}});
    EXPECT_EQ(order_of(tied), (std::vector<std::size_t>{0, 1, 2}));
}

TEST(AverageRank, MeanOverScoredQuarters) {
    CentralityTable q1, q2;
    q1.entries = {{0, 0.9, 1}, {1, 0.5, 2}, {2, 0.1, 3}};
    q2.entries = {{1, 0.9, 1}, {1 + 1, 0.8, 2}, {0, 0.1, 3}};
    // A: 1 and 3, B: 2 and 1, C: 3 and 2
    const std::vector<CentralityTable> tables{q1, q2};
    const auto avg = average_rank(tables, 10);
    ASSERT_EQ(avg.size(), 3u);
    EXPECT_EQ(avg[0].company, 1u);
    EXPECT_DOUBLE_EQ(avg[0].mean_rank, 1.5);
    EXPECT_EQ(avg[1].company, 0u);
    EXPECT_DOUBLE_EQ(avg[1].mean_rank, 2.0);
    EXPECT_EQ(average_rank(tables, 1).size(), 1u);
}

TEST(AverageRank, TiesOrderedById) {
    CentralityTable q1, q2;
    q1.entries = {{0, 0.9, 1}, {1, 0.5, 2}};
    q2.entries = {{1, 0.9, 2}, {0, 0.1, 3}};
    const std::vector<CentralityTable> tables{q1, q2};
    const auto avg = average_rank(tables, 5);
    ASSERT_EQ(avg.size(), 2u);
    EXPECT_EQ(avg[0].company, 0u);
    EXPECT_EQ(avg[1].company, 1u);
    EXPECT_DOUBLE_EQ(avg[0].mean_rank, 2.0);
    EXPECT_DOUBLE_EQ(avg[1].mean_rank, 2.0);
}

TEST(Properties, RankInvariantUnderIncreasingTransform) {
    // Symmetric nodes give scores equal up to rounding, which a transform may
    // merge into an exact tie; the order must still never invert a real gap.
    gen::Rng rng(17);
    const auto consistent = [](const std::vector<RankedScore>& ranked, const std::vector<double>& info) {
        for (std::size_t k = 1; k < ranked.size(); ++k) {
            const double hi = info[ranked[k - 1].company], lo = info[ranked[k].company];
            if (hi < lo - 1e-12 * std::fabs(lo)) return false;
        }
        return true;
    };
    for (int trial = 0; trial < 50; ++trial) {
        const auto n = static_cast<std::size_t>(rng.range(2, 20));
        const auto info = information_centrality(smooth(gen::network(rng, n, 0.3), 0.1));
        const auto rescaled = minmax_rescale(info).values;
        std::vector<CompanyScore> a, b, c, d;
        for (std::size_t i = 0; i < n; ++i) {
            a.push_back({i, info[i]});
            b.push_back({i, std::log(info[i]) * 3.0 + 7.0});
            c.push_back({i, std::pow(info[i], 5.0)});
            d.push_back({i, rescaled[i]});
        }
        EXPECT_TRUE(consistent(rank(a), info));
        EXPECT_TRUE(consistent(rank(b), info));
        EXPECT_TRUE(consistent(rank(c), info));
        EXPECT_TRUE(consistent(rank(d), info));
    }
}

TEST(Properties, FloorRisesWithAlpha) {
    EntityUniverse u;
    for (auto q : {Quarter{2014, 1}, Quarter{2014, 4}, Quarter{2015, 3}}) {
        const auto nets = fixture_quarter(NetworkPolarity::mixed, q, u);
        const auto floor_of = [&](double alpha) {
            const auto info = information_centrality(smooth(nets.mixed, alpha));
            const auto [lo, hi] = std::minmax_element(info.begin(), info.end());
            return *lo / *hi;
        };
        EXPECT_LT(floor_of(0.1), floor_of(1.0)) << q.label();
    }
}

TEST(KendallTau, KnownValues) {
    const std::vector<double> a{1, 2, 3, 4};
    const std::vector<double> rev{4, 3, 2, 1};
    const std::vector<double> one_swap{1, 3, 2, 4};
    EXPECT_DOUBLE_EQ(kendall_tau(a, a), 1.0);
    EXPECT_DOUBLE_EQ(kendall_tau(a, rev), -1.0);
    EXPECT_NEAR(kendall_tau(a, one_swap), 4.0 / 6.0, 1e-15);
    const std::vector<double> short_v{1, 2};
    EXPECT_THROW(kendall_tau(a, short_v), ValidationError);
}

TEST(ScoreNetwork, BothModes) {
    const auto u = letters(3);
    MarketCapTable caps;
    const Quarter q{2014, 2};
    caps.set("A", q, 1.0);
    caps.set("B", q, 100.0);
    const auto nc = score_network(network_of(3, {{0, 1, 1}, {1, 2, 1}}), 0.1, u, caps);
    EXPECT_EQ(nc.absolute.entries.size(), 3u);
    EXPECT_EQ(nc.absolute.entries.front().company, 1u);
    ASSERT_EQ(nc.normalized.entries.size(), 2u);
    EXPECT_EQ(nc.normalized.entries.front().company, 1u);
    EXPECT_EQ(nc.normalized.find(2), nullptr);
}
