#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "newsrisk/corpus.hpp"

namespace newsrisk {

/// Parameters of the synthetic corpus and market generator.
struct FixtureSpec {
    std::uint64_t seed = 7;
    std::size_t companies = 60;
    Quarter first_quarter{2014, 1};
    std::size_t quarters = 8;
    std::size_t articles = 2000;

    // Sentiment structure. Each company-quarter is in a negative state with
    // probability `negative_state_share`; negative articles mention only
    // negative-state companies, except that with probability
    // `cross_mention_rate` one positive-state company is added.
    double negative_state_share = 0.6;
    double negative_article_share = 0.55;
    double cross_mention_rate = 0.0;

    // Prices: log P = walk + iid noise + planted dip. The dip applies to
    // company-quarters whose planted relative sentiment is 1 and starts
    // `drift_onset_days` calendar days after the measurement date. A ramp dip
    // falls linearly to `drift` over `drift_window_days` and recovers over the
    // next window; a step dip holds `drift` for the window only.
    enum class DriftShape { ramp, step };
    double drift = -0.01;
    int drift_window_days = 30;
    int drift_onset_days = 0;
    DriftShape drift_shape = DriftShape::ramp;
    double daily_noise = 0.005;
    double walk_volatility = 0.0005;
    bool weekend_trading = false;  // quote every calendar day instead of weekdays only

    std::size_t short_ticker_companies = 3;  // two-letter tickers
    std::size_t merged_share_classes = 2;    // companies with a second ticker
    bool drop_one_marketcap = true;          // first company lacks its third-quarter cap
    std::size_t companies_without_prices = 1;
};

struct FixtureTruth {
    std::size_t positive_articles = 0;
    std::size_t negative_articles = 0;
    std::map<std::string, std::set<std::string>> mentions;  // article id -> canonical ids
    std::set<std::pair<std::string, Quarter>> drifted;      // company-quarters with the dip
};

struct Fixture {
    EntityUniverse universe;
    std::vector<Article> articles;
    PriceBook prices;
    MarketCapTable marketcaps;
    FixtureTruth truth;
};

Fixture generate_fixture(const FixtureSpec& spec);

/// Writes articles.jsonl, universe.tsv, prices.tsv, marketcaps.tsv and
/// truth.tsv (article_id, canonical_id) into `dir`.
void write_fixture(const Fixture& fixture, const std::filesystem::path& dir);

}  // namespace newsrisk
