#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "newsrisk/entity_parser.hpp"
#include "newsrisk/quarter.hpp"

namespace newsrisk {

/// mixed = positive + negative
enum class NetworkPolarity { positive, negative, mixed };

inline constexpr NetworkPolarity kAllPolarities[] = {
    NetworkPolarity::positive, NetworkPolarity::mixed, NetworkPolarity::negative};

std::string_view to_string(NetworkPolarity p);
NetworkPolarity parse_network_polarity(std::string_view text);

/// Undirected co-occurrence counts for one quarter and polarity over the whole
/// universe. Node weight S(i) counts articles mentioning i; edge weight w(i,j)
/// counts articles mentioning both.
struct QuarterNetwork {
    Quarter quarter;
    NetworkPolarity polarity = NetworkPolarity::mixed;
    std::size_t article_count = 0;
    std::vector<std::int64_t> node_weight;
    std::map<std::pair<std::size_t, std::size_t>, std::int64_t> edges;  // key.first < key.second

    std::size_t node_count() const noexcept { return node_weight.size(); }
    std::int64_t weight(std::size_t i, std::size_t j) const;
    void add_edge(std::size_t i, std::size_t j, std::int64_t w);

    /// Neighbour lists (j, w(i,j)) with positive weight, ascending by j.
    std::vector<std::vector<std::pair<std::size_t, std::int64_t>>> adjacency() const;
};

struct QuarterNetworks {
    QuarterNetwork positive;
    QuarterNetwork negative;
    QuarterNetwork mixed;

    const QuarterNetwork& get(NetworkPolarity p) const;
    QuarterNetwork& get(NetworkPolarity p);
};

QuarterNetworks build_networks(std::span<const OccurrenceSet> sets, Quarter quarter,
                               std::size_t node_count);

/// Complete graph with w'(i,j) = w(i,j) + alpha on every pair. Node weights
/// are carried over unchanged.
struct SmoothedNetwork {
    Quarter quarter;
    NetworkPolarity polarity = NetworkPolarity::mixed;
    double alpha = 0.1;
    std::vector<std::int64_t> node_weight;
    std::vector<double> edge_weight;  // dense n*n, row-major, zero diagonal

    std::size_t node_count() const noexcept { return node_weight.size(); }
    double weight(std::size_t i, std::size_t j) const {
        return edge_weight[i * node_count() + j];
    }
};

SmoothedNetwork smooth(const QuarterNetwork& network, double alpha);

struct NetworkStats {
    double avg_edges_per_node = 0.0;
    std::size_t max_degree = 0;
    std::optional<std::size_t> max_degree_node;  // lowest index on ties
    std::size_t article_count = 0;
    std::size_t edge_count = 0;
};

NetworkStats network_stats(const QuarterNetwork& network);

/// Node list (quarter, polarity, id, S) and edge list (quarter, polarity, i, j,
/// weight) exports; edges list each unordered pair once with i < j by id.
std::string export_nodes(std::span<const QuarterNetworks> networks, const EntityUniverse& universe);
std::string export_edges(std::span<const QuarterNetworks> networks, const EntityUniverse& universe);

/// Rebuilds networks from the two exports. Every (quarter, polarity) present in
/// the node list yields a network; quarters are returned ascending.
std::vector<QuarterNetworks> import_networks(std::string_view nodes_tsv, std::string_view edges_tsv,
                                             const EntityUniverse& universe);

}  // namespace newsrisk
