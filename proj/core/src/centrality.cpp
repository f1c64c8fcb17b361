#include "newsrisk/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "newsrisk/error.hpp"

namespace newsrisk {

std::vector<double> information_centrality(const SmoothedNetwork& network,
                                           const CentralityOptions& options) {
    const auto n = static_cast<Eigen::Index>(network.node_count());
    if (n == 0) return {};

    double max_w = 0.0;
    for (double w : network.edge_weight) max_w = std::max(max_w, w);
    std::int64_t max_s = 0;
    for (auto s : network.node_weight) max_s = std::max(max_s, s);

    Eigen::MatrixXd b(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        double strength = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j) continue;
            const double w_hat =
                max_w > 0.0 ? network.weight(ui, static_cast<std::size_t>(j)) / max_w : 0.0;
            b(i, j) = 1.0 - w_hat;
            strength += w_hat;
        }
        double s_hat = strength;
        if (options.node_weight == NodeWeight::article_count) {
            s_hat = max_s > 0 ? static_cast<double>(network.node_weight[ui]) / static_cast<double>(max_s)
                              : 0.0;
        }
        b(i, i) = 1.0 + s_hat;
    }

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(b);
    const double rcond = lu.rcond();
    if (!(rcond > 0.0) || !std::isfinite(rcond) || 1.0 / rcond > options.condition_cap) {
        throw NumericalError(fmt::format(
            "{} {} network: pseudo-adjacency matrix is singular or ill-conditioned (rcond {:.3e})",
            network.quarter.label(), to_string(network.polarity), rcond));
    }
    const Eigen::MatrixXd c = lu.inverse();

    const double trace = c.trace();
    const Eigen::VectorXd row_sums = c.rowwise().sum();
    std::vector<double> info(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        const double denom = static_cast<double>(n) * c(i, i) + trace - 2.0 * row_sums(i);
        const double v = static_cast<double>(n) / denom;
        if (!std::isfinite(v) || v <= 0.0) {
            throw NumericalError(fmt::format("{} {} network: non-positive information centrality "
                                             "for node {}",
                                             network.quarter.label(), to_string(network.polarity), i));
        }
        info[static_cast<std::size_t>(i)] = v;
    }
    return info;
}

std::string_view to_string(NodeWeight w) {
    return w == NodeWeight::strength ? "strength" : "article_count";
}

NodeWeight parse_node_weight(std::string_view text) {
    if (text == "strength") return NodeWeight::strength;
    if (text == "article_count") return NodeWeight::article_count;
    throw ValidationError(fmt::format("unknown node weight '{}'", text));
}

RescaleResult minmax_rescale(std::span<const double> scores) {
    RescaleResult r;
    r.values.assign(scores.size(), 0.0);
    if (scores.empty()) return r;
    auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
    const double range = *hi - *lo;
    if (!(range > 0.0)) {
        r.degenerate = true;
        return r;
    }
    for (std::size_t i = 0; i < scores.size(); ++i) {
        r.values[i] = (scores[i] - *lo) / range;
    }
    return r;
}

std::vector<CompanyScore> normalized_score(std::span<const double> rescaled,
                                           const EntityUniverse& universe,
                                           const MarketCapTable& caps, Quarter quarter) {
    std::vector<CompanyScore> out;
    for (std::size_t i = 0; i < rescaled.size() && i < universe.size(); ++i) {
        auto cap = caps.get(universe[i].canonical_id, quarter);
        if (!cap) continue;
        if (!(*cap > 0.0)) {
            throw ValidationError(fmt::format("market cap for '{}' {} must be positive",
                                              universe[i].canonical_id, quarter.label()));
        }
        out.push_back({i, rescaled[i] / *cap});
    }
    return out;
}

std::vector<RankedScore> rank(std::vector<CompanyScore> scores) {
    std::sort(scores.begin(), scores.end(), [](const CompanyScore& a, const CompanyScore& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.company < b.company;
    });
    std::vector<RankedScore> out;
    out.reserve(scores.size());
    for (std::size_t r = 0; r < scores.size(); ++r) {
        out.push_back({scores[r].company, scores[r].score, r + 1});
    }
    return out;
}

std::string_view to_string(CentralityMode m) {
    return m == CentralityMode::absolute ? "absolute" : "normalized";
}

CentralityMode parse_centrality_mode(std::string_view text) {
    if (text == "absolute") return CentralityMode::absolute;
    if (text == "normalized") return CentralityMode::normalized;
    throw ValidationError(fmt::format("invalid centrality mode '{}'", text));
}

const RankedScore* CentralityTable::find(std::size_t company) const {
    for (const auto& e : entries) {
        if (e.company == company) return &e;
    }
    return nullptr;
}

std::vector<AverageRank> average_rank(std::span<const CentralityTable> tables, std::size_t top_k) {
    std::map<std::size_t, std::pair<double, std::size_t>> acc;
    for (const auto& t : tables) {
        for (const auto& e : t.entries) {
            auto& [sum, count] = acc[e.company];
            sum += static_cast<double>(e.rank);
            ++count;
        }
    }
    std::vector<AverageRank> out;
    for (const auto& [company, v] : acc) {
        out.push_back({company, v.first / static_cast<double>(v.second), v.second});
    }
    std::sort(out.begin(), out.end(), [](const AverageRank& a, const AverageRank& b) {
        if (a.mean_rank != b.mean_rank) return a.mean_rank < b.mean_rank;
        return a.company < b.company;
    });
    if (out.size() > top_k) out.resize(top_k);
    return out;
}

NetworkCentrality score_network(const QuarterNetwork& network, double alpha,
                                const EntityUniverse& universe, const MarketCapTable& caps,
                                const CentralityOptions& options) {
    NetworkCentrality nc;
    nc.raw = information_centrality(smooth(network, alpha), options);
    auto rescaled = minmax_rescale(nc.raw);
    nc.degenerate = rescaled.degenerate;

    std::vector<CompanyScore> absolute;
    absolute.reserve(rescaled.values.size());
    for (std::size_t i = 0; i < rescaled.values.size(); ++i) {
        absolute.push_back({i, rescaled.values[i]});
    }
    nc.absolute = {network.quarter, network.polarity, CentralityMode::absolute,
                   rank(std::move(absolute))};
    nc.normalized = {network.quarter, network.polarity, CentralityMode::normalized,
                     rank(normalized_score(rescaled.values, universe, caps, network.quarter))};
    return nc;
}

double kendall_tau(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw ValidationError("kendall_tau: score vectors differ in length");
    }
    double concordant = 0, discordant = 0, ties_a = 0, ties_b = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            const double da = a[i] - a[j];
            const double db = b[i] - b[j];
            if (da == 0 && db == 0) continue;
            if (da == 0) {
                ++ties_a;
            } else if (db == 0) {
                ++ties_b;
            } else if ((da > 0) == (db > 0)) {
                ++concordant;
            } else {
                ++discordant;
            }
        }
    }
    const double denom =
        std::sqrt((concordant + discordant + ties_a) * (concordant + discordant + ties_b));
    return denom > 0 ? (concordant - discordant) / denom : 1.0;
}

}  // namespace newsrisk
