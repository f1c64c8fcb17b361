#include "newsrisk/riskrank.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <fmt/format.h>

#include "newsrisk/error.hpp"

namespace newsrisk {

void RiskCalibration::validate() const {
    if (!(lambda >= 0.0 && lambda < 1.0)) {
        throw ValidationError(fmt::format("lambda must lie in [0, 1), got {}", lambda));
    }
    if (!(mu >= 0.0 && mu <= 1.0)) {
        throw ValidationError(fmt::format("mu must lie in [0, 1], got {}", mu));
    }
    if (!(theta >= 0.0 && theta <= 1.0)) {
        throw ValidationError(fmt::format("theta must lie in [0, 1], got {}", theta));
    }
}

namespace {

std::optional<double> s_rel_of(std::int64_t neg, std::int64_t pos) {
    if (neg + pos <= 0) return std::nullopt;
    return static_cast<double>(neg) / static_cast<double>(neg + pos);
}

}  // namespace

SentimentRecord relative_sentiment(const QuarterOccurrences& occurrences, std::size_t company) {
    SentimentRecord rec;
    rec.company = company;
    rec.quarter = occurrences.quarter;
    for (const auto& set : occurrences.sets) {
        if (!std::binary_search(set.companies.begin(), set.companies.end(), company)) continue;
        if (set.polarity == Polarity::negative) {
            ++rec.s_negative;
        } else {
            ++rec.s_positive;
        }
    }
    rec.s_rel = s_rel_of(rec.s_negative, rec.s_positive);
    return rec;
}

std::vector<SentimentRecord> quarter_sentiments(const QuarterNetworks& networks) {
    const auto n = networks.mixed.node_count();
    std::vector<SentimentRecord> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto& r = out[i];
        r.company = i;
        r.quarter = networks.mixed.quarter;
        r.s_positive = networks.positive.node_weight.at(i);
        r.s_negative = networks.negative.node_weight.at(i);
        r.s_rel = s_rel_of(r.s_negative, r.s_positive);
    }
    return out;
}

UniverseSelection select_universe(std::span<const AverageRank> mixed_absolute,
                                  std::span<const AverageRank> mixed_normalized,
                                  std::size_t top_k) {
    UniverseSelection sel;
    std::set<std::size_t> chosen;
    for (auto list : {mixed_absolute, mixed_normalized}) {
        if (list.size() < top_k) sel.short_list = true;
        const std::size_t take = std::min(top_k, list.size());
        for (std::size_t i = 0; i < take; ++i) chosen.insert(list[i].company);
    }
    sel.companies.assign(chosen.begin(), chosen.end());
    return sel;
}

std::vector<double> PlayerSet::singleton_mass() const {
    std::vector<double> m = shapley;
    for (const auto& inter : interactions) {
        m[inter.a] -= 0.5 * inter.value;
        m[inter.b] -= 0.5 * inter.value;
    }
    return m;
}

PlayerSet build_players(const QuarterNetwork& mixed, std::size_t company,
                        const RiskCalibration& calibration) {
    return build_players(mixed.adjacency(), company, calibration);
}

PlayerSet build_players(const std::vector<std::vector<std::pair<std::size_t, std::int64_t>>>& adjacency,
                        std::size_t company, const RiskCalibration& calibration) {
    calibration.validate();
    PlayerSet ps;
    ps.players.push_back(company);
    const auto& direct = adjacency.at(company);
    if (direct.empty()) {
        ps.shapley.push_back(1.0);
        return ps;
    }

    const double lambda = calibration.lambda;
    const double mu = calibration.mu;

    double w_k = 0.0;
    std::set<std::size_t> direct_set;
    for (const auto& [i, w] : direct) {
        w_k += static_cast<double>(w);
        direct_set.insert(i);
    }

    // Two-hop nodes reached through a direct neighbour, with path mass.
    std::map<std::size_t, double> rho;
    for (const auto& [i, w_ki] : direct) {
        double local = 0.0;
        for (const auto& [j, w_ij] : adjacency[i]) {
            if (j != company && !direct_set.contains(j)) local += static_cast<double>(w_ij);
        }
        if (local <= 0.0) continue;
        const double share = static_cast<double>(w_ki) / w_k;
        for (const auto& [j, w_ij] : adjacency[i]) {
            if (j != company && !direct_set.contains(j)) {
                rho[j] += share * static_cast<double>(w_ij) / local;
            }
        }
    }
    double rho_total = 0.0;
    for (const auto& [j, r] : rho) rho_total += r;

    ps.shapley.push_back(1.0 - lambda);
    const double direct_share = rho.empty() ? lambda : lambda * (1.0 - mu);
    for (const auto& [i, w] : direct) {
        ps.players.push_back(i);
        ps.shapley.push_back(direct_share * static_cast<double>(w) / w_k);
    }
    ps.direct_count = direct.size();
    for (const auto& [j, r] : rho) {
        ps.players.push_back(j);
        ps.shapley.push_back(lambda * mu * r / rho_total);
    }

    // Interactions between linked non-focal players.
    std::map<std::size_t, std::size_t> position;
    for (std::size_t p = 1; p < ps.players.size(); ++p) position[ps.players[p]] = p;
    for (std::size_t p = 1; p < ps.players.size(); ++p) {
        for (const auto& [q_node, w] : adjacency[ps.players[p]]) {
            auto it = position.find(q_node);
            if (it == position.end() || it->second <= p || w <= 0) continue;
            const std::size_t q = it->second;
            ps.interactions.push_back(
                {p, q, 2.0 * calibration.theta * ps.shapley[p] * ps.shapley[q]});
        }
    }
    std::sort(ps.interactions.begin(), ps.interactions.end(),
              [](const Interaction& x, const Interaction& y) {
                  return std::tie(x.a, x.b) < std::tie(y.a, y.b);
              });
    return ps;
}

RiskComponents riskrank_node(const PlayerSet& players, std::span<const double> x) {
    if (x.size() != players.players.size()) {
        throw ValidationError(fmt::format("riskrank_node: {} risks for {} players", x.size(),
                                          players.players.size()));
    }
    for (double v : x) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw ValidationError(fmt::format("riskrank_node: risk value {} outside [0, 1]", v));
        }
    }
    RiskComponents rc;
    rc.rr_own = players.shapley[0] * x[0];
    const auto mass = players.singleton_mass();
    for (std::size_t p = 1; p < mass.size(); ++p) rc.rr_direct += mass[p] * x[p];
    for (const auto& inter : players.interactions) {
        rc.rr_indirect += inter.value * std::min(x[inter.a], x[inter.b]);
    }
    rc.rr_total = rc.rr_own + rc.rr_direct + rc.rr_indirect;
    return rc;
}

std::vector<RiskDatapoint> riskrank_quarter(const QuarterNetworks& networks,
                                            std::span<const std::size_t> subset,
                                            const RiskCalibration& calibration) {
    calibration.validate();
    const auto sentiments = quarter_sentiments(networks);
    const auto adjacency = networks.mixed.adjacency();
    std::vector<RiskDatapoint> out;
    for (std::size_t company : subset) {
        const auto& s = sentiments.at(company);
        if (!s.s_rel) continue;
        auto players = build_players(adjacency, company, calibration);
        std::vector<double> x;
        x.reserve(players.players.size());
        for (std::size_t p : players.players) x.push_back(sentiments[p].s_rel.value_or(0.0));
        out.push_back({company, networks.mixed.quarter, *s.s_rel, riskrank_node(players, x)});
    }
    return out;
}

}  // namespace newsrisk
