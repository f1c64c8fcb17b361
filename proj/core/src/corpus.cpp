#include "newsrisk/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "newsrisk/error.hpp"
#include "newsrisk/tsv.hpp"

namespace newsrisk {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string trim(std::string_view s) {
    auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(std::string_view cell) {
    std::vector<std::string> out;
    if (trim(cell).empty()) return out;
    for (auto& part : tsv::split(cell, '|')) {
        auto t = trim(part);
        if (!t.empty()) out.push_back(std::move(t));
    }
    return out;
}

std::string join(const std::vector<std::string>& parts, char sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out.push_back(sep);
        out += parts[i];
    }
    return out;
}

double parse_positive(std::string_view text, std::string_view what, std::string_view ctx,
                      std::size_t line) {
    double v = 0.0;
    auto t = trim(text);
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty()) {
        throw ValidationError(fmt::format("{}:{}: invalid {} '{}'", ctx, line, what, text));
    }
    if (!std::isfinite(v) || v <= 0.0) {
        throw ValidationError(fmt::format("{}:{}: {} must be positive, got {}", ctx, line, what, t));
    }
    return v;
}

template <class T>
void insert_unique(std::vector<T>& v, const T& value) {
    if (std::find(v.begin(), v.end(), value) == v.end()) v.push_back(value);
}

}  // namespace

std::string_view to_string(Polarity p) {
    return p == Polarity::positive ? "positive" : "negative";
}

Polarity parse_polarity(std::string_view text) {
    if (text == "positive") return Polarity::positive;
    if (text == "negative") return Polarity::negative;
    throw ValidationError(
        fmt::format("invalid polarity '{}' (expected \"positive\" or \"negative\")", text));
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError(fmt::format("cannot open '{}'", path.string()));
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------------------
// Articles

std::vector<Article> parse_articles(std::string_view jsonl, const AnalysisWindow& window) {
    std::vector<Article> articles;
    std::unordered_set<std::string> seen;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < jsonl.size()) {
        std::size_t end = jsonl.find('\n', pos);
        if (end == std::string_view::npos) end = jsonl.size();
        std::string_view line = jsonl.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (trim(line).empty()) continue;

        Article a;
        try {
            auto j = nlohmann::json::parse(line);
            a.id = j.at("id").get<std::string>();
            a.published_at = parse_timestamp(j.at("published_at").get<std::string>());
            a.author_id = j.at("author_id").get<std::string>();
            a.polarity = parse_polarity(j.at("polarity").get<std::string>());
            a.title = j.at("title").get<std::string>();
            a.body = j.at("body").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(fmt::format("articles line {}: {}", line_no, e.what()));
        } catch (const ValidationError& e) {
            throw ValidationError(fmt::format("articles line {}: {}", line_no, e.what()));
        }
        if (a.id.empty()) {
            throw ValidationError(fmt::format("articles line {}: empty id", line_no));
        }
        if (!seen.insert(a.id).second) {
            throw ValidationError(
                fmt::format("articles line {}: duplicate article id '{}'", line_no, a.id));
        }
        a.excluded = !window.contains(quarter_of(a.published_at));
        articles.push_back(std::move(a));
    }
    std::stable_sort(articles.begin(), articles.end(), [](const Article& x, const Article& y) {
        return std::tie(x.published_at, x.id) < std::tie(y.published_at, y.id);
    });
    return articles;
}

std::vector<Article> load_articles(const std::filesystem::path& path,
                                   const AnalysisWindow& window) {
    return parse_articles(read_file(path), window);
}

std::string serialize_articles(const std::vector<Article>& articles) {
    std::string out;
    for (const auto& a : articles) {
        nlohmann::ordered_json j;
        j["id"] = a.id;
        j["published_at"] = format_timestamp(a.published_at);
        j["author_id"] = a.author_id;
        j["polarity"] = to_string(a.polarity);
        j["title"] = a.title;
        j["body"] = a.body;
        out += j.dump();
        out.push_back('\n');
    }
    return out;
}

// ---------------------------------------------------------------------------
// Universe

EntityUniverse::EntityUniverse(std::vector<EntityRecord> records) : records_(std::move(records)) {
    std::sort(records_.begin(), records_.end(),
              [](const auto& a, const auto& b) { return a.canonical_id < b.canonical_id; });
    for (std::size_t i = 0; i < records_.size(); ++i) {
        auto& r = records_[i];
        if (r.canonical_id.empty()) {
            throw ValidationError("universe: empty canonical_id");
        }
        if (!id_index_.emplace(r.canonical_id, i).second) {
            throw ValidationError(fmt::format("universe: duplicate canonical_id '{}'", r.canonical_id));
        }
        if (r.name_variants.empty()) {
            throw ValidationError(
                fmt::format("universe: company '{}' has no name variants", r.canonical_id));
        }
        insert_unique(r.merged_tickers, r.primary_ticker);
        std::sort(r.merged_tickers.begin(), r.merged_tickers.end());
        for (const auto& t : r.merged_tickers) {
            auto [it, fresh] = ticker_index_.emplace(t, i);
            if (!fresh && it->second != i) {
                throw ValidationError(fmt::format("universe: ticker '{}' claimed by both '{}' and '{}'",
                                                  t, records_[it->second].canonical_id,
                                                  r.canonical_id));
            }
        }
        // Ambiguous variants are rejected by compile_matchers; here the first
        // claimant keeps the lookup entry.
        variant_index_.emplace(lower(r.display_name), i);
        for (const auto& v : r.name_variants) variant_index_.emplace(lower(v), i);
    }
}

std::optional<std::size_t> EntityUniverse::index_of(std::string_view canonical_id) const {
    auto it = id_index_.find(std::string(canonical_id));
    if (it == id_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> EntityUniverse::by_ticker(std::string_view ticker) const {
    auto it = ticker_index_.find(std::string(ticker));
    if (it == ticker_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> EntityUniverse::by_variant(std::string_view variant) const {
    auto it = variant_index_.find(lower(variant));
    if (it == variant_index_.end()) return std::nullopt;
    return it->second;
}

EntityUniverse EntityUniverse::without(std::string_view canonical_id) const {
    std::vector<EntityRecord> kept;
    for (const auto& r : records_) {
        if (r.canonical_id != canonical_id) kept.push_back(r);
    }
    return EntityUniverse(std::move(kept));
}

EntityUniverse parse_universe(std::string_view text) {
    constexpr std::string_view ctx = "universe";
    auto table = tsv::parse(text, ctx);
    const auto c_id = table.column("canonical_id", ctx);
    const auto c_name = table.column("display_name", ctx);
    const auto c_ticker = table.column("primary_ticker", ctx);
    const auto c_exchange = table.column("exchange", ctx);
    const auto c_variants = table.column("name_variants", ctx);
    const auto c_merged = table.column("merged_tickers", ctx);

    std::vector<EntityRecord> records;
    std::unordered_map<std::string, std::size_t> by_id;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const auto line = table.line_numbers[r];
        auto id = trim(row[c_id]);
        auto ticker = trim(row[c_ticker]);
        auto variants = split_list(row[c_variants]);
        if (id.empty() || ticker.empty()) {
            throw ValidationError(fmt::format("{}:{}: canonical_id and primary_ticker are required",
                                              ctx, line));
        }
        if (variants.empty()) {
            throw ValidationError(fmt::format("{}:{}: empty name_variants for '{}'", ctx, line, id));
        }
        auto merged = split_list(row[c_merged]);
        auto [it, fresh] = by_id.emplace(id, records.size());
        if (fresh) {
            EntityRecord rec;
            rec.canonical_id = id;
            rec.display_name = trim(row[c_name]);
            rec.primary_ticker = ticker;
            rec.exchange = trim(row[c_exchange]);
            records.push_back(std::move(rec));
        }
        auto& rec = records[it->second];
        insert_unique(rec.merged_tickers, ticker);
        for (const auto& m : merged) insert_unique(rec.merged_tickers, m);
        for (const auto& v : variants) insert_unique(rec.name_variants, v);
    }
    return EntityUniverse(std::move(records));
}

EntityUniverse load_universe(const std::filesystem::path& path) {
    return parse_universe(read_file(path));
}

std::string serialize_universe(const EntityUniverse& universe) {
    tsv::Writer w({"canonical_id", "display_name", "primary_ticker", "exchange", "name_variants",
                   "merged_tickers"});
    for (const auto& r : universe.records()) {
        w.row({r.canonical_id, r.display_name, r.primary_ticker, r.exchange,
               join(r.name_variants, '|'), join(r.merged_tickers, '|')});
    }
    return w.str();
}

// ---------------------------------------------------------------------------
// Market caps

void MarketCapTable::set(const std::string& canonical_id, Quarter q, double usd_billions) {
    if (!std::isfinite(usd_billions) || usd_billions <= 0.0) {
        throw ValidationError(fmt::format("market cap for '{}' {} must be positive", canonical_id,
                                          q.label()));
    }
    entries_[{canonical_id, q}] = usd_billions;
}

std::optional<double> MarketCapTable::get(std::string_view canonical_id, Quarter q) const {
    auto it = entries_.find({std::string(canonical_id), q});
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

MarketCapTable parse_marketcaps(std::string_view text) {
    constexpr std::string_view ctx = "marketcaps";
    auto table = tsv::parse(text, ctx);
    const auto c_id = table.column("canonical_id", ctx);
    const auto c_q = table.column("quarter", ctx);
    const auto c_cap = table.column("market_cap_usd_billions", ctx);
    MarketCapTable caps;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const auto line = table.line_numbers[r];
        Quarter q;
        try {
            q = Quarter::parse(trim(row[c_q]));
        } catch (const ValidationError& e) {
            throw ValidationError(fmt::format("{}:{}: {}", ctx, line, e.what()));
        }
        auto id = trim(row[c_id]);
        if (caps.get(id, q)) {
            throw ValidationError(
                fmt::format("{}:{}: duplicate entry for '{}' {}", ctx, line, id, q.label()));
        }
        caps.set(id, q, parse_positive(row[c_cap], "market cap", ctx, line));
    }
    return caps;
}

MarketCapTable load_marketcaps(const std::filesystem::path& path) {
    return parse_marketcaps(read_file(path));
}

std::string serialize_marketcaps(const MarketCapTable& caps) {
    tsv::Writer w({"canonical_id", "quarter", "market_cap_usd_billions"});
    for (const auto& [key, cap] : caps.entries()) {
        w.row({key.first, key.second.label(), tsv::fmt_real(cap, 6)});
    }
    return w.str();
}

// ---------------------------------------------------------------------------
// Prices

std::optional<std::size_t> PriceSeries::last_on_or_before(Date d) const {
    auto it = std::upper_bound(dates.begin(), dates.end(), d);
    if (it == dates.begin()) return std::nullopt;
    return static_cast<std::size_t>(std::distance(dates.begin(), it) - 1);
}

void PriceBook::insert(const std::string& canonical_id, PriceSeries series) {
    series_[canonical_id] = std::move(series);
}

const PriceSeries* PriceBook::find(std::string_view canonical_id) const {
    auto it = series_.find(canonical_id);
    return it == series_.end() ? nullptr : &it->second;
}

PriceBook parse_prices(std::string_view text, const EntityUniverse& universe) {
    constexpr std::string_view ctx = "prices";
    auto table = tsv::parse(text, ctx);
    const auto c_ticker = table.column("ticker", ctx);
    const auto c_date = table.column("date", ctx);
    const auto c_close = table.column("adjusted_close", ctx);

    std::map<std::string, PriceSeries> by_ticker;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const auto line = table.line_numbers[r];
        auto ticker = trim(row[c_ticker]);
        if (!universe.by_ticker(ticker)) {
            throw ValidationError(fmt::format("{}:{}: unknown ticker '{}'", ctx, line, ticker));
        }
        Date d;
        try {
            d = parse_date(trim(row[c_date]));
        } catch (const ValidationError& e) {
            throw ValidationError(fmt::format("{}:{}: {}", ctx, line, e.what()));
        }
        double close = parse_positive(row[c_close], "adjusted_close", ctx, line);
        auto& s = by_ticker[ticker];
        s.ticker = ticker;
        if (!s.dates.empty() && d <= s.dates.back()) {
            throw ValidationError(fmt::format("{}:{}: dates for '{}' are not strictly increasing",
                                              ctx, line, ticker));
        }
        s.dates.push_back(d);
        s.closes.push_back(close);
    }

    // One series per company: the primary ticker wins, otherwise the
    // lexicographically smallest share class that has data.
    PriceBook book;
    for (const auto& rec : universe.records()) {
        const PriceSeries* chosen = nullptr;
        if (auto it = by_ticker.find(rec.primary_ticker); it != by_ticker.end()) {
            chosen = &it->second;
        } else {
            for (const auto& t : rec.merged_tickers) {
                if (auto it2 = by_ticker.find(t); it2 != by_ticker.end()) {
                    chosen = &it2->second;
                    break;
                }
            }
        }
        if (chosen) book.insert(rec.canonical_id, *chosen);
    }
    return book;
}

PriceBook load_prices(const std::filesystem::path& path, const EntityUniverse& universe) {
    return parse_prices(read_file(path), universe);
}

std::string serialize_prices(const PriceBook& prices) {
    tsv::Writer w({"ticker", "date", "adjusted_close"});
    std::vector<const PriceSeries*> ordered;
    for (const auto& [id, s] : prices.series()) ordered.push_back(&s);
    std::sort(ordered.begin(), ordered.end(),
              [](const auto* a, const auto* b) { return a->ticker < b->ticker; });
    for (const auto* s : ordered) {
        for (std::size_t i = 0; i < s->dates.size(); ++i) {
            w.row({s->ticker, format_date(s->dates[i]), tsv::fmt_real(s->closes[i], 6)});
        }
    }
    return w.str();
}

}  // namespace newsrisk
