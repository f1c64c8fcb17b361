#include <gtest/gtest.h>

#include <algorithm>

#include "generators.hpp"
#include "newsrisk/conet.hpp"
#include "newsrisk/error.hpp"

using namespace newsrisk;

namespace {

constexpr Quarter kQ{2014, 1};

OccurrenceSet occ(Polarity p, std::vector<std::size_t> companies) {
    OccurrenceSet s;
    s.polarity = p;
    std::sort(companies.begin(), companies.end());
    s.companies = std::move(companies);
    return s;
}

std::vector<OccurrenceSet> random_sets(gen::Rng& rng, std::size_t n, std::size_t count) {
    std::vector<OccurrenceSet> sets;
    for (std::size_t a = 0; a < count; ++a) {
        std::vector<std::size_t> cs;
        for (std::size_t i = 0; i < n; ++i) {
            if (rng.chance(0.15)) cs.push_back(i);
        }
        sets.push_back(occ(rng.chance(0.5) ? Polarity::positive : Polarity::negative, cs));
        sets.back().article_id = "a" + std::to_string(a);
    }
    return sets;
}

EntityUniverse numbered_universe(std::size_t n) {
    std::vector<EntityRecord> records;
    for (std::size_t i = 0; i < n; ++i) {
        EntityRecord r;
        r.canonical_id = "C" + std::to_string(100 + i);
        r.primary_ticker = r.canonical_id;
        r.name_variants = {r.canonical_id};
        r.merged_tickers = {r.canonical_id};
        records.push_back(r);
    }
    return EntityUniverse(records);
}

}  // namespace

TEST(BuildNetworks, OneArticleThreeCompanies) {
    const std::vector<OccurrenceSet> sets{occ(Polarity::positive, {0, 1, 2})};
    const auto nets = build_networks(sets, kQ, 4);
    const auto& pos = nets.positive;
    EXPECT_EQ(pos.weight(0, 1), 1);
    EXPECT_EQ(pos.weight(0, 2), 1);
    EXPECT_EQ(pos.weight(2, 1), 1);
    EXPECT_EQ(pos.weight(0, 3), 0);
    EXPECT_EQ(pos.node_weight, (std::vector<std::int64_t>{1, 1, 1, 0}));
    EXPECT_TRUE(nets.negative.edges.empty());
    EXPECT_EQ(pos.article_count, 1u);
}

TEST(BuildNetworks, MixedCombinesBothPolarities) {
    const std::vector<OccurrenceSet> sets{occ(Polarity::positive, {0, 1}),
                                          occ(Polarity::negative, {0, 1})};
    const auto nets = build_networks(sets, kQ, 2);
    EXPECT_EQ(nets.mixed.weight(0, 1), 2);
    EXPECT_EQ(nets.positive.weight(0, 1), 1);
    EXPECT_EQ(nets.negative.weight(0, 1), 1);
    EXPECT_EQ(nets.mixed.node_weight[0], 2);
}

TEST(BuildNetworks, SingleCompanyArticle) {
    const std::vector<OccurrenceSet> sets{occ(Polarity::negative, {1})};
    const auto nets = build_networks(sets, kQ, 3);
    EXPECT_TRUE(nets.mixed.edges.empty());
    EXPECT_EQ(nets.negative.node_weight[1], 1);
    EXPECT_EQ(nets.mixed.node_weight[1], 1);
    EXPECT_EQ(nets.positive.node_weight[1], 0);
}

TEST(BuildNetworks, OutOfRangeCompanyRejected) {
    const std::vector<OccurrenceSet> sets{occ(Polarity::negative, {5})};
    EXPECT_THROW(build_networks(sets, kQ, 3), ValidationError);
}

TEST(Smooth, EmptyNetworkGetsAlphaEverywhere) {
    const auto nets = build_networks({}, kQ, 3);
    const auto s = smooth(nets.mixed, 0.1);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            EXPECT_DOUBLE_EQ(s.weight(i, j), i == j ? 0.0 : 0.1);
        }
    }
}

TEST(Smooth, AddsAlphaToExistingEdges) {
    QuarterNetwork net;
    net.node_weight = {2, 2, 0};
    net.add_edge(0, 1, 2);
    const auto s = smooth(net, 0.1);
    EXPECT_DOUBLE_EQ(s.weight(0, 1), 2.1);
    EXPECT_DOUBLE_EQ(s.weight(1, 0), 2.1);
    EXPECT_DOUBLE_EQ(s.weight(0, 2), 0.1);
    EXPECT_DOUBLE_EQ(s.weight(1, 2), 0.1);
    EXPECT_EQ(s.node_weight, net.node_weight);
}

TEST(Smooth, NonPositiveAlphaRejected) {
    QuarterNetwork net;
    net.node_weight = {0, 0};
    EXPECT_THROW(smooth(net, 0.0), ValidationError);
    EXPECT_THROW(smooth(net, -1.0), ValidationError);
}

TEST(Stats, Triangle) {
    QuarterNetwork net;
    net.node_weight = {1, 1, 1};
    net.add_edge(0, 1, 1);
    net.add_edge(1, 2, 1);
    net.add_edge(0, 2, 3);
    const auto st = network_stats(net);
    EXPECT_DOUBLE_EQ(st.avg_edges_per_node, 2.0);
    EXPECT_EQ(st.max_degree, 2u);
    EXPECT_EQ(st.max_degree_node, 0u);
    EXPECT_EQ(st.edge_count, 3u);
}

TEST(Stats, StarHub) {
    QuarterNetwork net;
    net.node_weight = {1, 1, 4, 1, 1};
    for (std::size_t leaf : {0u, 1u, 3u, 4u}) net.add_edge(2, leaf, 1);
    const auto st = network_stats(net);
    EXPECT_EQ(st.max_degree, 4u);
    EXPECT_EQ(st.max_degree_node, 2u);
    EXPECT_DOUBLE_EQ(st.avg_edges_per_node, 8.0 / 5.0);
}

TEST(Properties, MixedIsSumAndSymmetric) {
    gen::Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = static_cast<std::size_t>(rng.range(1, 25));
        const auto sets = random_sets(rng, n, static_cast<std::size_t>(rng.range(0, 40)));
        const auto nets = build_networks(sets, kQ, n);
        for (std::size_t i = 0; i < n; ++i) {
            EXPECT_EQ(nets.mixed.node_weight[i],
                      nets.positive.node_weight[i] + nets.negative.node_weight[i]);
            for (std::size_t j = 0; j < n; ++j) {
                EXPECT_EQ(nets.mixed.weight(i, j),
                          nets.positive.weight(i, j) + nets.negative.weight(i, j));
                EXPECT_EQ(nets.mixed.weight(i, j), nets.mixed.weight(j, i));
                EXPECT_LE(nets.mixed.weight(i, j), nets.mixed.node_weight[i]);
            }
        }
        const auto s = smooth(nets.mixed, 0.1 + rng.uniform());
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) EXPECT_EQ(s.weight(i, j), s.weight(j, i));
        }
    }
}

TEST(Properties, ArticleOrderDoesNotMatter) {
    gen::Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 12;
        auto sets = random_sets(rng, n, 30);
        const auto before = build_networks(sets, kQ, n);
        std::shuffle(sets.begin(), sets.end(), std::mt19937_64(static_cast<std::uint64_t>(trial)));
        const auto after = build_networks(sets, kQ, n);
        for (auto p : kAllPolarities) {
            EXPECT_EQ(before.get(p).edges, after.get(p).edges);
            EXPECT_EQ(before.get(p).node_weight, after.get(p).node_weight);
        }
    }
}

TEST(Export, RoundTrip) {
    gen::Rng rng(9);
    const std::size_t n = 15;
    const auto u = numbered_universe(n);
    std::vector<QuarterNetworks> all;
    Quarter q = kQ;
    for (int k = 0; k < 3; ++k, q = q.next()) all.push_back(build_networks(random_sets(rng, n, 25), q, n));

    const auto nodes = export_nodes(all, u);
    const auto edges = export_edges(all, u);
    const auto back = import_networks(nodes, edges, u);
    ASSERT_EQ(back.size(), all.size());
    for (std::size_t k = 0; k < all.size(); ++k) {
        for (auto p : kAllPolarities) {
            EXPECT_EQ(back[k].get(p).quarter, all[k].get(p).quarter);
            EXPECT_EQ(back[k].get(p).edges, all[k].get(p).edges);
            EXPECT_EQ(back[k].get(p).node_weight, all[k].get(p).node_weight);
        }
    }
    EXPECT_EQ(export_edges(back, u), edges);
}
