#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "newsrisk/quarter.hpp"

namespace newsrisk {

/// Author-assigned label. The source data has no neutral class.
enum class Polarity { positive, negative };

std::string_view to_string(Polarity p);
Polarity parse_polarity(std::string_view text);

/// Inclusive range of quarters used for analysis. Articles outside it are
/// retained on load but flagged as excluded.
struct AnalysisWindow {
    Quarter first{2011, 1};
    Quarter last{2016, 2};

    bool contains(Quarter q) const { return first <= q && q <= last; }
};

struct Article {
    std::string id;
    Timestamp published_at;
    std::string author_id;
    Polarity polarity = Polarity::positive;
    std::string title;
    std::string body;
    bool excluded = false;
};

struct EntityRecord {
    std::string canonical_id;
    std::string display_name;
    std::string primary_ticker;
    std::string exchange;
    std::vector<std::string> name_variants;
    std::vector<std::string> merged_tickers;  // sorted, includes every share class
};

/// Canonical companies ordered by canonical_id. A company's position in
/// `records()` is its node index in every network.
class EntityUniverse {
public:
    EntityUniverse() = default;
    explicit EntityUniverse(std::vector<EntityRecord> records);

    const std::vector<EntityRecord>& records() const noexcept { return records_; }
    std::size_t size() const noexcept { return records_.size(); }
    const EntityRecord& operator[](std::size_t i) const { return records_[i]; }

    std::optional<std::size_t> index_of(std::string_view canonical_id) const;
    std::optional<std::size_t> by_ticker(std::string_view ticker) const;
    /// Case-insensitive lookup of a declared name variant or display name. When
    /// two companies declare the same variant the first by canonical_id wins.
    std::optional<std::size_t> by_variant(std::string_view variant) const;

    /// Copy without the named company; used to check matcher monotonicity.
    EntityUniverse without(std::string_view canonical_id) const;

private:
    std::vector<EntityRecord> records_;
    std::unordered_map<std::string, std::size_t> id_index_;
    std::unordered_map<std::string, std::size_t> ticker_index_;
    std::unordered_map<std::string, std::size_t> variant_index_;
};

/// End-of-quarter market capitalisation in USD billions.
class MarketCapTable {
public:
    void set(const std::string& canonical_id, Quarter q, double usd_billions);
    std::optional<double> get(std::string_view canonical_id, Quarter q) const;
    const std::map<std::pair<std::string, Quarter>, double>& entries() const noexcept {
        return entries_;
    }

private:
    std::map<std::pair<std::string, Quarter>, double> entries_;
};

/// Daily adjusted closes for one company, strictly increasing in date.
struct PriceSeries {
    std::string ticker;
    std::vector<Date> dates;
    std::vector<double> closes;

    /// Index of the last observation on or before `d`.
    std::optional<std::size_t> last_on_or_before(Date d) const;
};

/// Price series keyed by canonical_id.
class PriceBook {
public:
    void insert(const std::string& canonical_id, PriceSeries series);
    const PriceSeries* find(std::string_view canonical_id) const;
    const std::map<std::string, PriceSeries, std::less<>>& series() const noexcept {
        return series_;
    }

private:
    std::map<std::string, PriceSeries, std::less<>> series_;
};

/// One JSON object per line: id, published_at, author_id, polarity, title, body.
/// Returns articles sorted by (published_at, id).
std::vector<Article> load_articles(const std::filesystem::path& path,
                                   const AnalysisWindow& window = {});
std::vector<Article> parse_articles(std::string_view jsonl, const AnalysisWindow& window = {});

/// TSV: canonical_id, display_name, primary_ticker, exchange, name_variants,
/// merged_tickers (list cells are pipe-separated). Rows sharing a canonical_id
/// are merged share classes of one company.
EntityUniverse load_universe(const std::filesystem::path& path);
EntityUniverse parse_universe(std::string_view tsv);

/// TSV: ticker, date, adjusted_close. Tickers resolve through the universe.
PriceBook load_prices(const std::filesystem::path& path, const EntityUniverse& universe);
PriceBook parse_prices(std::string_view tsv, const EntityUniverse& universe);

/// TSV: canonical_id, quarter, market_cap_usd_billions.
MarketCapTable load_marketcaps(const std::filesystem::path& path);
MarketCapTable parse_marketcaps(std::string_view tsv);

std::string serialize_articles(const std::vector<Article>& articles);
std::string serialize_universe(const EntityUniverse& universe);
std::string serialize_prices(const PriceBook& prices);
std::string serialize_marketcaps(const MarketCapTable& caps);

std::string read_file(const std::filesystem::path& path);

}  // namespace newsrisk
