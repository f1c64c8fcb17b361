#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "newsrisk/centrality.hpp"
#include "newsrisk/conet.hpp"
#include "newsrisk/entity_parser.hpp"

namespace newsrisk {

/// Parameters of the 2-additive capacity built around each company.
///   lambda: share of weight passed from the company to its neighbourhood
///   mu:     share of the neighbourhood weight given to two-hop nodes
///   theta:  interaction strength between linked players
struct RiskCalibration {
    double lambda = 0.5;
    double mu = 0.5;
    double theta = 0.5;

    void validate() const;
};

struct SentimentRecord {
    std::size_t company = 0;
    Quarter quarter;
    std::int64_t s_positive = 0;
    std::int64_t s_negative = 0;
    std::optional<double> s_rel;  // negative share; undefined without mentions
};

SentimentRecord relative_sentiment(const QuarterOccurrences& occurrences, std::size_t company);

/// Sentiment for every node from the positive/negative node weights of a
/// quarter, equivalent to calling relative_sentiment per company.
std::vector<SentimentRecord> quarter_sentiments(const QuarterNetworks& networks);

struct UniverseSelection {
    std::vector<std::size_t> companies;  // ascending
    bool short_list = false;             // a ranking had fewer than top_k entries
};

UniverseSelection select_universe(std::span<const AverageRank> mixed_absolute,
                                  std::span<const AverageRank> mixed_normalized,
                                  std::size_t top_k = 50);

struct Interaction {
    std::size_t a;  // positions in PlayerSet::players
    std::size_t b;
    double value;
};

/// Focal company plus its one-hop and two-hop neighbourhood with Shapley
/// weights and pairwise interaction indices. players[0] is the focal company.
struct PlayerSet {
    std::vector<std::size_t> players;  // universe indices
    std::vector<double> shapley;
    std::vector<Interaction> interactions;
    std::size_t direct_count = 0;  // players[1 .. direct_count] are one-hop

    /// Singleton Moebius mass phi_p - 1/2 sum_q I(p,q).
    std::vector<double> singleton_mass() const;
};

PlayerSet build_players(const QuarterNetwork& mixed, std::size_t company,
                        const RiskCalibration& calibration);

/// Variant taking a precomputed adjacency, for scoring many companies of one quarter.
PlayerSet build_players(const std::vector<std::vector<std::pair<std::size_t, std::int64_t>>>& adjacency,
                        std::size_t company, const RiskCalibration& calibration);

struct RiskComponents {
    double rr_own = 0.0;
    double rr_direct = 0.0;
    double rr_indirect = 0.0;
    double rr_total = 0.0;
};

/// Choquet aggregation of player risks `x` (aligned with players). Throws
/// ValidationError if any x lies outside [0, 1].
RiskComponents riskrank_node(const PlayerSet& players, std::span<const double> x);

struct RiskDatapoint {
    std::size_t company = 0;
    Quarter quarter;
    double x_own = 0.0;
    RiskComponents risk;
};

/// One datapoint per company in `subset` with defined relative sentiment.
/// Players without defined sentiment contribute x = 0.
std::vector<RiskDatapoint> riskrank_quarter(const QuarterNetworks& networks,
                                            std::span<const std::size_t> subset,
                                            const RiskCalibration& calibration);

}  // namespace newsrisk
