#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "newsrisk/conet.hpp"
#include "newsrisk/corpus.hpp"

namespace newsrisk {

/// Diagonal term of the pseudo-adjacency matrix.
///   strength:      sum of the node's rescaled smoothed edge weights
///   article_count: the node's article count scaled by the largest count
enum class NodeWeight { strength, article_count };

std::string_view to_string(NodeWeight w);
NodeWeight parse_node_weight(std::string_view text);

struct CentralityOptions {
    NodeWeight node_weight = NodeWeight::strength;
    /// Quarters whose pseudo-adjacency matrix has an estimated 1-norm condition
    /// number above this are rejected.
    double condition_cap = 1e12;
};

/// Information centrality of every node of a smoothed network.
///
/// Edge weights are first scaled into [0, 1] by their maximum, then
/// B(i,i) = 1 + S(i), B(i,j) = 1 - w(i,j), C = B^-1 and
///
///   I(i) = n / (n C(i,i) + sum_j C(j,j) - 2 sum_j C(i,j)).
///
/// With NodeWeight::strength, B is the all-ones matrix plus the weighted
/// Laplacian, which is positive definite for the complete smoothed graph.
/// Throws NumericalError (naming the quarter) when B is singular, the
/// condition estimate exceeds the cap, or any I(i) is not finite and positive;
/// the last can happen with NodeWeight::article_count.
std::vector<double> information_centrality(const SmoothedNetwork& network,
                                           const CentralityOptions& options = {});

struct RescaleResult {
    std::vector<double> values;
    bool degenerate = false;  // all inputs equal; every value mapped to 0
};

RescaleResult minmax_rescale(std::span<const double> scores);

/// A company score; `company` is a universe index.
struct CompanyScore {
    std::size_t company;
    double score;
};

/// J(i) = rescaled(i) / market_cap(i) for companies with a cap that quarter.
std::vector<CompanyScore> normalized_score(std::span<const double> rescaled,
                                           const EntityUniverse& universe,
                                           const MarketCapTable& caps, Quarter quarter);

struct RankedScore {
    std::size_t company;
    double score;
    std::size_t rank;  // 1 = highest score
};

/// Descending by score; equal scores are ordered by canonical_id, which is the
/// universe index order.
std::vector<RankedScore> rank(std::vector<CompanyScore> scores);

enum class CentralityMode { absolute, normalized };
std::string_view to_string(CentralityMode m);
CentralityMode parse_centrality_mode(std::string_view text);

struct CentralityTable {
    Quarter quarter;
    NetworkPolarity polarity = NetworkPolarity::mixed;
    CentralityMode mode = CentralityMode::absolute;
    std::vector<RankedScore> entries;  // ascending rank

    const RankedScore* find(std::size_t company) const;
};

struct AverageRank {
    std::size_t company;
    double mean_rank;
    std::size_t quarters;
};

/// Mean per-quarter rank over the quarters where a company is scored, sorted
/// ascending (ties by canonical_id) and truncated to top_k.
std::vector<AverageRank> average_rank(std::span<const CentralityTable> tables, std::size_t top_k);

struct NetworkCentrality {
    std::vector<double> raw;  // I(i) for every node
    bool degenerate = false;
    CentralityTable absolute;
    CentralityTable normalized;
};

/// Smooths, solves, rescales and ranks one quarter network in both modes.
NetworkCentrality score_network(const QuarterNetwork& network, double alpha,
                                const EntityUniverse& universe, const MarketCapTable& caps,
                                const CentralityOptions& options = {});

/// Kendall tau-b between two score vectors over the same items.
double kendall_tau(std::span<const double> a, std::span<const double> b);

}  // namespace newsrisk
