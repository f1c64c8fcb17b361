#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <tuple>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "newsrisk/corpus.hpp"

namespace newsrisk {

struct MatcherConfig {
    bool case_sensitive_tickers = true;
    bool require_exchange_prefix_for_short_tickers = true;
    std::size_t short_ticker_max_length = 2;
    std::vector<std::string> legal_suffixes{"Inc",  "Inc.", "Corp",  "Corp.", "Co",
                                            "Co.",  "Group", "Ltd", "PLC",   "Company"};
};

/// Companies mentioned in one article. Each company appears at most once.
struct OccurrenceSet {
    std::string article_id;
    Polarity polarity = Polarity::positive;
    std::vector<std::size_t> companies;  // universe indices, sorted ascending
};

/// One literal hit, used for the optional debug dump.
struct MatchRecord {
    std::size_t company;
    std::string literal;
    std::size_t byte_offset;
};

/// Compiled, immutable lookup tables for every company in a universe.
///
/// Names are matched as whole word sequences (words are maximal ASCII
/// alphanumeric runs, separators between words must agree after collapsing
/// whitespace), case-insensitively except that the first matched character
/// must be upper case. Bare tickers are matched case-sensitively as whole
/// words. "(EXCHANGE:TICKER)" forms tolerate whitespace around the colon and
/// parentheses and require the company's listed exchange.
class MatcherSet {
public:
    std::size_t company_count() const noexcept { return company_count_; }
    std::size_t max_name_words() const noexcept { return max_words_; }

    /// Every generated name literal for a company (lowercase keys).
    std::vector<std::string> name_literals(std::size_t company) const;

    std::vector<MatchRecord> find_all(std::string_view text) const;

private:
    friend MatcherSet compile_matchers(const EntityUniverse&, const MatcherConfig&);

    struct ExchangeKey {
        std::string exchange;  // upper case
        std::string ticker;
        bool operator<(const ExchangeKey& o) const {
            return std::tie(exchange, ticker) < std::tie(o.exchange, o.ticker);
        }
    };

    std::size_t company_count_ = 0;
    std::size_t max_words_ = 1;
    std::unordered_map<std::string, std::size_t> names_;         // lowercase key
    std::unordered_map<std::string, std::string> name_initials_;  // allowed first characters
    std::unordered_map<std::string, std::size_t> bare_tickers_;  // exact (or upper) key
    std::map<ExchangeKey, std::size_t> qualified_tickers_;
    bool case_sensitive_tickers_ = true;
};

/// Builds the matcher tables. Throws ValidationError when one literal would
/// identify two different companies.
MatcherSet compile_matchers(const EntityUniverse& universe, const MatcherConfig& config = {});

/// Name variants produced by repeatedly stripping trailing legal suffixes
/// (and trailing commas) from `name`, including `name` itself.
std::vector<std::string> suffix_stripped_forms(std::string_view name,
                                               const std::vector<std::string>& suffixes);

/// Text searched for an article: title, blank line, body. Debug offsets refer to it.
std::string article_text(const Article& article);

OccurrenceSet extract_occurrences(const Article& article, const MatcherSet& matchers);

struct QuarterOccurrences {
    Quarter quarter;
    std::vector<OccurrenceSet> sets;  // in article order
};

struct ParsedCorpus {
    std::vector<QuarterOccurrences> quarters;  // ascending, only quarters with articles
    std::size_t excluded_articles = 0;

    const QuarterOccurrences* find(Quarter q) const;
};

/// Extracts occurrences for every non-excluded article and groups them by
/// calendar quarter. `threads` > 1 splits extraction across worker threads.
ParsedCorpus parse_corpus(const std::vector<Article>& articles, const MatcherSet& matchers,
                          unsigned threads = 1);

}  // namespace newsrisk
