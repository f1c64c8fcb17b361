#include "newsrisk/conet.hpp"

#include <algorithm>
#include <charconv>

#include <fmt/format.h>

#include "newsrisk/error.hpp"
#include "newsrisk/tsv.hpp"

namespace newsrisk {

std::string_view to_string(NetworkPolarity p) {
    switch (p) {
        case NetworkPolarity::positive: return "positive";
        case NetworkPolarity::negative: return "negative";
        default: return "mixed";
    }
}

NetworkPolarity parse_network_polarity(std::string_view text) {
    if (text == "positive") return NetworkPolarity::positive;
    if (text == "negative") return NetworkPolarity::negative;
    if (text == "mixed") return NetworkPolarity::mixed;
    throw ValidationError(fmt::format("invalid network polarity '{}'", text));
}

std::int64_t QuarterNetwork::weight(std::size_t i, std::size_t j) const {
    if (i == j) return 0;
    auto it = edges.find(std::minmax(i, j));
    return it == edges.end() ? 0 : it->second;
}

void QuarterNetwork::add_edge(std::size_t i, std::size_t j, std::int64_t w) {
    if (i == j || w == 0) return;
    edges[std::minmax(i, j)] += w;
}

std::vector<std::vector<std::pair<std::size_t, std::int64_t>>> QuarterNetwork::adjacency() const {
    std::vector<std::vector<std::pair<std::size_t, std::int64_t>>> adj(node_count());
    for (const auto& [key, w] : edges) {
        if (w <= 0) continue;
        adj[key.first].emplace_back(key.second, w);
        adj[key.second].emplace_back(key.first, w);
    }
    for (auto& list : adj) std::sort(list.begin(), list.end());
    return adj;
}

const QuarterNetwork& QuarterNetworks::get(NetworkPolarity p) const {
    switch (p) {
        case NetworkPolarity::positive: return positive;
        case NetworkPolarity::negative: return negative;
        default: return mixed;
    }
}

QuarterNetwork& QuarterNetworks::get(NetworkPolarity p) {
    return const_cast<QuarterNetwork&>(std::as_const(*this).get(p));
}

QuarterNetworks build_networks(std::span<const OccurrenceSet> sets, Quarter quarter,
                               std::size_t node_count) {
    QuarterNetworks nets;
    for (auto p : kAllPolarities) {
        auto& n = nets.get(p);
        n.quarter = quarter;
        n.polarity = p;
        n.node_weight.assign(node_count, 0);
    }
    for (const auto& occ : sets) {
        auto& own = occ.polarity == Polarity::positive ? nets.positive : nets.negative;
        for (auto* net : {&own, &nets.mixed}) {
            ++net->article_count;
            for (std::size_t a = 0; a < occ.companies.size(); ++a) {
                const auto i = occ.companies[a];
                if (i >= node_count) {
                    throw ValidationError(fmt::format("occurrence references node {} outside universe", i));
                }
                ++net->node_weight[i];
                for (std::size_t b = a + 1; b < occ.companies.size(); ++b) {
                    net->add_edge(i, occ.companies[b], 1);
                }
            }
        }
    }
    return nets;
}

SmoothedNetwork smooth(const QuarterNetwork& network, double alpha) {
    if (!(alpha > 0.0)) {
        throw ValidationError(fmt::format("smoothing alpha must be > 0, got {}", alpha));
    }
    SmoothedNetwork s;
    s.quarter = network.quarter;
    s.polarity = network.polarity;
    s.alpha = alpha;
    s.node_weight = network.node_weight;
    const std::size_t n = network.node_count();
    s.edge_weight.assign(n * n, alpha);
    for (std::size_t i = 0; i < n; ++i) s.edge_weight[i * n + i] = 0.0;
    for (const auto& [key, w] : network.edges) {
        const double v = static_cast<double>(w) + alpha;
        s.edge_weight[key.first * n + key.second] = v;
        s.edge_weight[key.second * n + key.first] = v;
    }
    return s;
}

NetworkStats network_stats(const QuarterNetwork& network) {
    NetworkStats stats;
    stats.article_count = network.article_count;
    std::vector<std::size_t> degree(network.node_count(), 0);
    for (const auto& [key, w] : network.edges) {
        if (w <= 0) continue;
        ++degree[key.first];
        ++degree[key.second];
        ++stats.edge_count;
    }
    for (std::size_t i = 0; i < degree.size(); ++i) {
        if (degree[i] > stats.max_degree) {
            stats.max_degree = degree[i];
            stats.max_degree_node = i;
        }
    }
    if (!degree.empty()) {
        stats.avg_edges_per_node =
            2.0 * static_cast<double>(stats.edge_count) / static_cast<double>(degree.size());
    }
    return stats;
}

std::string export_nodes(std::span<const QuarterNetworks> networks, const EntityUniverse& universe) {
    tsv::Writer w({"quarter", "polarity", "id", "S"});
    for (const auto& nets : networks) {
        for (auto p : kAllPolarities) {
            const auto& n = nets.get(p);
            for (std::size_t i = 0; i < n.node_count(); ++i) {
                w.row({n.quarter.label(), std::string(to_string(p)), universe[i].canonical_id,
                       std::to_string(n.node_weight[i])});
            }
        }
    }
    return w.str();
}

std::string export_edges(std::span<const QuarterNetworks> networks, const EntityUniverse& universe) {
    tsv::Writer w({"quarter", "polarity", "i", "j", "weight"});
    for (const auto& nets : networks) {
        for (auto p : kAllPolarities) {
            const auto& n = nets.get(p);
            for (const auto& [key, weight] : n.edges) {
                w.row({n.quarter.label(), std::string(to_string(p)), universe[key.first].canonical_id,
                       universe[key.second].canonical_id, std::to_string(weight)});
            }
        }
    }
    return w.str();
}

namespace {

std::int64_t parse_count(const std::string& s, std::string_view ctx, std::size_t line) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || v < 0) {
        throw ValidationError(fmt::format("{}:{}: invalid count '{}'", ctx, line, s));
    }
    return v;
}

std::size_t node_index(const EntityUniverse& u, const std::string& id, std::string_view ctx,
                       std::size_t line) {
    auto idx = u.index_of(id);
    if (!idx) throw ValidationError(fmt::format("{}:{}: unknown company '{}'", ctx, line, id));
    return *idx;
}

}  // namespace

std::vector<QuarterNetworks> import_networks(std::string_view nodes_tsv, std::string_view edges_tsv,
                                             const EntityUniverse& universe) {
    std::map<Quarter, QuarterNetworks> out;
    auto init = [&](Quarter q) -> QuarterNetworks& {
        auto [it, fresh] = out.try_emplace(q);
        if (fresh) {
            for (auto p : kAllPolarities) {
                auto& n = it->second.get(p);
                n.quarter = q;
                n.polarity = p;
                n.node_weight.assign(universe.size(), 0);
            }
        }
        return it->second;
    };

    auto nodes = tsv::parse(nodes_tsv, "network nodes");
    const auto nq = nodes.column("quarter", "network nodes");
    const auto np = nodes.column("polarity", "network nodes");
    const auto ni = nodes.column("id", "network nodes");
    const auto ns = nodes.column("S", "network nodes");
    for (std::size_t r = 0; r < nodes.rows.size(); ++r) {
        const auto& row = nodes.rows[r];
        auto& nets = init(Quarter::parse(row[nq]));
        auto& n = nets.get(parse_network_polarity(row[np]));
        n.node_weight[node_index(universe, row[ni], "network nodes", nodes.line_numbers[r])] =
            parse_count(row[ns], "network nodes", nodes.line_numbers[r]);
    }

    auto edges = tsv::parse(edges_tsv, "network edges");
    const auto eq = edges.column("quarter", "network edges");
    const auto ep = edges.column("polarity", "network edges");
    const auto ei = edges.column("i", "network edges");
    const auto ej = edges.column("j", "network edges");
    const auto ew = edges.column("weight", "network edges");
    for (std::size_t r = 0; r < edges.rows.size(); ++r) {
        const auto& row = edges.rows[r];
        const auto line = edges.line_numbers[r];
        auto& nets = init(Quarter::parse(row[eq]));
        auto& n = nets.get(parse_network_polarity(row[ep]));
        n.add_edge(node_index(universe, row[ei], "network edges", line),
                   node_index(universe, row[ej], "network edges", line),
                   parse_count(row[ew], "network edges", line));
    }

    std::vector<QuarterNetworks> result;
    for (auto& [q, nets] : out) result.push_back(std::move(nets));
    return result;
}

}  // namespace newsrisk
