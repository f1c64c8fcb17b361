#include "newsrisk/fixture.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "newsrisk/error.hpp"
#include "newsrisk/tsv.hpp"

namespace newsrisk {

namespace {

// Portable draws on top of mt19937_64 so fixtures are identical across
// standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::size_t below(std::size_t n) {
        return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
    }

    bool chance(double p) { return uniform() < p; }

    double normal() {
        if (spare_) {
            double v = *spare_;
            spare_.reset();
            return v;
        }
        double u1 = 0.0;
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
        return r * std::cos(2.0 * std::numbers::pi * u2);
    }

    template <class T>
    const T& pick(const std::vector<T>& v) {
        return v[below(v.size())];
    }

private:
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

const std::vector<std::string> kOnsets{"B", "C", "D", "F", "G", "K", "L", "M", "N", "P",
                                       "R", "S", "T", "V", "Z", "Br", "Cr", "Dr", "Tr", "Qu"};
const std::vector<std::string> kVowels{"a", "e", "i", "o", "u", "ae", "io"};
const std::vector<std::string> kMiddles{"l", "m", "n", "r", "s", "t", "v", "x", "nd", "rt", "lv"};
const std::vector<std::string> kEndings{"ex", "on", "ara", "ium", "ent", "ora", "ix", "ane"};
const std::vector<std::string> kSectors{"Systems", "Holdings", "Energy",   "Networks",
                                        "Foods",   "Capital",  "Minerals", "Therapeutics",
                                        "Motors",  "Retail",   "Devices",  "Logistics"};
const std::vector<std::string> kSuffixes{"Inc.", "Corp.", "Group Inc.", "Co.", "Ltd", "PLC"};

const std::vector<std::string> kFiller{
    "market",  "outlook",  "quarter", "margin",   "revenue",  "guidance", "investors",
    "demand",  "supply",   "growth",  "valuation", "earnings", "cash",     "flow",
    "pressure", "analysts", "expect", "strong",   "weak",     "trend",    "sector",
    "pricing", "segment",  "costs",   "dividend", "buyback",  "debt",     "risk",
    "apple",   "target",   "general", "national", "cat",      "ge",       "it"};

const std::vector<std::string> kTemplatesPositive{
    "We remain long {} as demand keeps improving.",
    "Shares of {} look undervalued after the recent pullback.",
    "Our thesis on {} rests on steady cash generation.",
    "{} should beat consensus this quarter."};
const std::vector<std::string> kTemplatesNegative{
    "We are short {} because margins are deteriorating.",
    "Shares of {} look expensive relative to peers.",
    "Our bearish view on {} reflects weakening demand.",
    "{} is likely to miss guidance this quarter."};

std::string capitalize(std::string s) {
    if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    return s;
}

std::string filler_sentence(Rng& rng) {
    const std::size_t n = 6 + rng.below(8);
    std::string s;
    for (std::size_t i = 0; i < n; ++i) {
        if (i) s.push_back(' ');
        s += rng.pick(kFiller);
    }
    return capitalize(s) + ".";
}

struct Company {
    EntityRecord record;
    std::string root;
    std::string stripped;
};

std::string fill(const std::string& tmpl, const std::string& mention) {
    auto pos = tmpl.find("{}");
    return tmpl.substr(0, pos) + mention + tmpl.substr(pos + 2);
}

std::string mention_form(Rng& rng, const Company& c) {
    const auto& r = c.record;
    const std::string& ticker = r.merged_tickers[rng.below(r.merged_tickers.size())];
    const bool short_ticker = ticker.size() <= 2;
    switch (rng.below(short_ticker ? 4 : 6)) {
        case 0: return fmt::format("{} ({}:{})", c.stripped, r.exchange, ticker);
        case 1: return fmt::format("{} ({}: {})", c.root, r.exchange, ticker);
        case 2: return r.display_name;
        case 3: return c.stripped;
        case 4: return c.root;
        default: return ticker;
    }
}

}  // namespace

Fixture generate_fixture(const FixtureSpec& spec) {
    if (spec.companies < 2 || spec.quarters == 0) {
        throw ValidationError("fixture needs at least two companies and one quarter");
    }
    Rng rng(spec.seed);
    Fixture fx;

    // Universe ------------------------------------------------------------
    std::vector<Company> companies;
    std::set<std::string> roots, tickers{"NYSE", "NASDAQ"};
    for (const auto& w : kFiller) roots.insert(capitalize(w));
    while (companies.size() < spec.companies) {
        std::string root = rng.pick(kOnsets) + rng.pick(kVowels) + rng.pick(kMiddles) +
                           rng.pick(kEndings);
        if (!roots.insert(root).second) continue;
        const std::size_t idx = companies.size();
        const std::size_t len = idx < spec.short_ticker_companies ? 2 : 3 + rng.below(2);
        std::string ticker;
        do {
            ticker.clear();
            for (std::size_t i = 0; i < len; ++i) ticker.push_back(static_cast<char>('A' + rng.below(26)));
        } while (!tickers.insert(ticker).second);

        Company c;
        c.root = root;
        c.stripped = root + " " + rng.pick(kSectors);
        c.record.canonical_id = fmt::format("C{:03d}", idx);
        c.record.display_name = c.stripped + " " + rng.pick(kSuffixes);
        c.record.primary_ticker = ticker;
        c.record.exchange = rng.chance(0.5) ? "NYSE" : "NASDAQ";
        c.record.name_variants = {c.stripped, root};
        c.record.merged_tickers = {ticker};
        if (idx >= spec.short_ticker_companies &&
            idx < spec.short_ticker_companies + spec.merged_share_classes) {
            std::string second = ticker + "B";
            if (tickers.insert(second).second) c.record.merged_tickers.push_back(second);
        }
        companies.push_back(std::move(c));
    }
    {
        std::vector<EntityRecord> records;
        for (const auto& c : companies) records.push_back(c.record);
        fx.universe = EntityUniverse(std::move(records));
    }

    // Popularity weights give a skewed mention distribution.
    std::vector<double> popularity(spec.companies);
    for (std::size_t i = 0; i < spec.companies; ++i) {
        popularity[i] = 1.0 / std::pow(static_cast<double>(1 + (i * 7919) % spec.companies), 0.6);
    }

    // Articles ------------------------------------------------------------
    std::vector<Quarter> quarters;
    for (Quarter q = spec.first_quarter; quarters.size() < spec.quarters; q = q.next()) {
        quarters.push_back(q);
    }
    // negative_state[q][c]
    std::vector<std::vector<bool>> negative_state(quarters.size(),
                                                  std::vector<bool>(spec.companies, false));
    for (auto& row : negative_state) {
        for (std::size_t c = 0; c < spec.companies; ++c) row[c] = rng.chance(spec.negative_state_share);
    }
    std::map<std::pair<std::size_t, std::size_t>, std::pair<int, int>> counts;  // (q,c) -> (neg,pos)

    auto draw = [&](const std::vector<std::size_t>& pool, std::vector<std::size_t>& chosen) {
        double total = 0.0;
        for (auto c : pool) {
            if (std::find(chosen.begin(), chosen.end(), c) == chosen.end()) total += popularity[c];
        }
        if (total <= 0.0) return;
        double u = rng.uniform() * total;
        for (auto c : pool) {
            if (std::find(chosen.begin(), chosen.end(), c) != chosen.end()) continue;
            u -= popularity[c];
            if (u <= 0.0) {
                chosen.push_back(c);
                return;
            }
        }
        for (auto it = pool.rbegin(); it != pool.rend(); ++it) {
            if (std::find(chosen.begin(), chosen.end(), *it) == chosen.end()) {
                chosen.push_back(*it);
                return;
            }
        }
    };

    for (std::size_t a = 0; a < spec.articles; ++a) {
        const std::size_t qi = a * quarters.size() / spec.articles;
        const Quarter q = quarters[qi];
        const auto span_days = (q.last_day() - q.first_day()).count() + 1;
        Article art;
        art.id = fmt::format("a{:06d}", a);
        art.author_id = fmt::format("u{:04d}", rng.below(400));
        art.published_at = Timestamp{q.first_day()} +
                           std::chrono::seconds{static_cast<std::int64_t>(
                               rng.uniform() * static_cast<double>(span_days) * 86400.0)};

        std::vector<std::size_t> neg_pool, pos_pool;
        for (std::size_t c = 0; c < spec.companies; ++c) {
            (negative_state[qi][c] ? neg_pool : pos_pool).push_back(c);
        }
        bool negative = rng.chance(spec.negative_article_share);
        if (negative && neg_pool.empty()) negative = false;
        if (!negative && pos_pool.empty()) negative = true;
        art.polarity = negative ? Polarity::negative : Polarity::positive;

        const double k_draw = rng.uniform();
        const std::size_t k = k_draw < 0.4 ? 1 : (k_draw < 0.75 ? 2 : 3);
        std::vector<std::size_t> chosen;
        for (std::size_t i = 0; i < k; ++i) draw(negative ? neg_pool : pos_pool, chosen);
        if (negative && !pos_pool.empty() && rng.chance(spec.cross_mention_rate)) {
            draw(pos_pool, chosen);
        }

        const auto& templates = negative ? kTemplatesNegative : kTemplatesPositive;
        std::string body = filler_sentence(rng);
        std::set<std::string> planted;
        for (auto c : chosen) {
            body += " " + fill(rng.pick(templates), mention_form(rng, companies[c]));
            body += " " + filler_sentence(rng);
            planted.insert(companies[c].record.canonical_id);
            auto& cnt = counts[{qi, c}];
            (negative ? cnt.first : cnt.second) += 1;
        }
        art.title = capitalize(rng.pick(kFiller)) + " " + rng.pick(kFiller) + " update";
        art.body = std::move(body);
        (negative ? fx.truth.negative_articles : fx.truth.positive_articles) += 1;
        fx.truth.mentions[art.id] = std::move(planted);
        fx.articles.push_back(std::move(art));
    }
    std::stable_sort(fx.articles.begin(), fx.articles.end(), [](const Article& x, const Article& y) {
        return std::tie(x.published_at, x.id) < std::tie(y.published_at, y.id);
    });

    for (const auto& [key, cnt] : counts) {
        if (cnt.first > 0 && cnt.second == 0) {
            fx.truth.drifted.insert({companies[key.second].record.canonical_id, quarters[key.first]});
        }
    }

    // Market caps -----------------------------------------------------------
    for (std::size_t c = 0; c < spec.companies; ++c) {
        double log_cap = std::log(1.0) + rng.uniform() * std::log(500.0);
        for (std::size_t qi = 0; qi < quarters.size(); ++qi) {
            log_cap += 0.05 * rng.normal();
            if (spec.drop_one_marketcap && c == 0 && qi == 2) continue;
            fx.marketcaps.set(companies[c].record.canonical_id, quarters[qi],
                              std::round(std::exp(log_cap) * 1e6) / 1e6);
        }
    }

    // Prices ----------------------------------------------------------------
    const Date start = quarters.front().first_day() - std::chrono::days{10};
    const Date end = quarters.back().last_day() + std::chrono::days{100};
    const double dip = std::log1p(spec.drift);
    const int window = std::max(1, spec.drift_window_days);
    for (std::size_t c = spec.companies_without_prices; c < spec.companies; ++c) {
        const auto& rec = companies[c].record;
        // Measurement dates of drifted quarters for this company.
        std::vector<Date> dip_starts;
        for (std::size_t qi = 0; qi < quarters.size(); ++qi) {
            if (!fx.truth.drifted.contains({rec.canonical_id, quarters[qi]})) continue;
            Date m = quarters[qi].last_day();
            while (!spec.weekend_trading && (std::chrono::weekday{m}.c_encoding() == 0 ||
                                             std::chrono::weekday{m}.c_encoding() == 6)) {
                m -= std::chrono::days{1};
            }
            dip_starts.push_back(m);
        }
        PriceSeries series;
        series.ticker = rec.primary_ticker;
        double walk = std::log(20.0 + 180.0 * rng.uniform());
        for (Date d = start; d <= end; d += std::chrono::days{1}) {
            const unsigned wd = std::chrono::weekday{d}.c_encoding();
            if (!spec.weekend_trading && (wd == 0 || wd == 6)) continue;
            walk += spec.walk_volatility * rng.normal();
            double offset = 0.0;
            for (Date m : dip_starts) {
                const auto elapsed = (d - m).count() - spec.drift_onset_days;
                if (spec.drift_shape == FixtureSpec::DriftShape::step) {
                    if (elapsed >= 1 && elapsed <= window) offset += dip;
                    continue;
                }
                if (elapsed <= 0 || elapsed >= 2 * window) continue;
                const double frac = elapsed <= window
                                        ? static_cast<double>(elapsed) / window
                                        : static_cast<double>(2 * window - elapsed) / window;
                offset += dip * frac;
            }
            const double price = std::exp(walk + spec.daily_noise * rng.normal() + offset);
            series.dates.push_back(d);
            series.closes.push_back(std::round(price * 1e6) / 1e6);
        }
        fx.prices.insert(rec.canonical_id, std::move(series));
    }
    return fx;
}

void write_fixture(const Fixture& fixture, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    auto write = [&](const std::string& name, const std::string& content) {
        std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
        if (!out) throw ValidationError(fmt::format("cannot write '{}'", (dir / name).string()));
        out << content;
    };
    write("articles.jsonl", serialize_articles(fixture.articles));
    write("universe.tsv", serialize_universe(fixture.universe));
    write("prices.tsv", serialize_prices(fixture.prices));
    write("marketcaps.tsv", serialize_marketcaps(fixture.marketcaps));
    tsv::Writer truth({"article_id", "canonical_id"});
    for (const auto& [article, ids] : fixture.truth.mentions) {
        for (const auto& id : ids) truth.row({article, id});
    }
    write("truth.tsv", truth.str());
}

}  // namespace newsrisk
