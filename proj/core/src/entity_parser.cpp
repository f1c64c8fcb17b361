#include "newsrisk/entity_parser.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <set>

#include <fmt/format.h>

#include "newsrisk/error.hpp"
#include "newsrisk/parallel.hpp"

namespace newsrisk {

namespace {

constexpr std::size_t kMaxSeparator = 3;

bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

char lower_char(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }
char upper_char(char c) { return static_cast<char>(std::toupper(static_cast<unsigned char>(c))); }

std::string upper(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), upper_char);
    return out;
}

struct Span {
    std::size_t begin;
    std::size_t end;
};

std::vector<Span> words_of(std::string_view text) {
    std::vector<Span> words;
    std::size_t i = 0;
    while (i < text.size()) {
        if (!is_word_char(text[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < text.size() && is_word_char(text[j])) ++j;
        words.push_back({i, j});
        i = j;
    }
    return words;
}

// Separator between two words with whitespace runs collapsed to one space.
// Returns false when the gap cannot belong to any literal.
bool normalized_separator(std::string_view gap, std::string& out) {
    out.clear();
    bool in_space = false;
    for (char c : gap) {
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            if (!in_space) out.push_back(' ');
            in_space = true;
        } else {
            out.push_back(c);
            in_space = false;
        }
    }
    return out.size() <= kMaxSeparator;
}

enum class KeyCase { lower, exact, upper };

char apply_case(char c, KeyCase kc) {
    switch (kc) {
        case KeyCase::lower: return lower_char(c);
        case KeyCase::upper: return upper_char(c);
        default: return c;
    }
}

// Builds the lookup key for words[first .. first+count) of `text`.
bool span_key(std::string_view text, const std::vector<Span>& words, std::size_t first,
              std::size_t count, KeyCase kc, std::string& key, std::string& scratch) {
    key.clear();
    for (std::size_t w = first; w < first + count; ++w) {
        if (w > first) {
            auto gap = text.substr(words[w - 1].end, words[w].begin - words[w - 1].end);
            if (!normalized_separator(gap, scratch)) return false;
            key += scratch;
        }
        for (std::size_t c = words[w].begin; c < words[w].end; ++c) {
            key.push_back(apply_case(text[c], kc));
        }
    }
    return true;
}

struct Literal {
    std::string key;
    std::size_t words = 0;
    char first = 0;
};

std::optional<Literal> literal_of(std::string_view s, KeyCase kc) {
    auto words = words_of(s);
    if (words.empty()) return std::nullopt;
    Literal lit;
    std::string scratch;
    if (!span_key(s, words, 0, words.size(), kc, lit.key, scratch)) return std::nullopt;
    lit.words = words.size();
    lit.first = s[words.front().begin];
    return lit;
}

std::string strip_suffix_dot(std::string_view s) {
    std::string out(s);
    while (!out.empty() && out.back() == '.') out.pop_back();
    std::transform(out.begin(), out.end(), out.begin(), lower_char);
    return out;
}

const std::regex& qualified_pattern() {
    static const std::regex re(
        R"(\(\s*([A-Za-z]+)\s*:\s*([A-Za-z0-9]+(?:[.\-][A-Za-z0-9]+)*)\s*\))",
        std::regex::optimize);
    return re;
}

}  // namespace

std::vector<std::string> suffix_stripped_forms(std::string_view name,
                                               const std::vector<std::string>& suffixes) {
    std::set<std::string> normalized_suffixes;
    for (const auto& s : suffixes) normalized_suffixes.insert(strip_suffix_dot(s));

    std::vector<std::string> forms{std::string(name)};
    auto words = words_of(name);
    while (words.size() > 1) {
        const auto& last = words.back();
        auto word = strip_suffix_dot(name.substr(last.begin, last.end - last.begin));
        if (!normalized_suffixes.contains(word)) break;
        words.pop_back();
        forms.emplace_back(name.substr(0, words.back().end));
    }
    return forms;
}

MatcherSet compile_matchers(const EntityUniverse& universe, const MatcherConfig& config) {
    MatcherSet set;
    set.company_count_ = universe.size();
    set.case_sensitive_tickers_ = config.case_sensitive_tickers;
    const KeyCase ticker_case = config.case_sensitive_tickers ? KeyCase::exact : KeyCase::upper;

    std::unordered_map<std::string, std::string> first_chars;  // name key -> allowed initials

    auto collision = [&](std::string_view what, std::string_view literal, std::size_t a,
                         std::size_t b) {
        return ValidationError(fmt::format("matcher collision: {} '{}' maps to both '{}' and '{}'",
                                           what, literal, universe[a].canonical_id,
                                           universe[b].canonical_id));
    };

    for (std::size_t c = 0; c < universe.size(); ++c) {
        const auto& rec = universe[c];

        std::vector<std::string> sources{rec.display_name};
        sources.insert(sources.end(), rec.name_variants.begin(), rec.name_variants.end());
        std::set<std::string> names;
        for (const auto& src : sources) {
            if (src.empty()) continue;
            for (auto& form : suffix_stripped_forms(src, config.legal_suffixes)) {
                names.insert(std::move(form));
            }
        }
        for (const auto& name : names) {
            auto lit = literal_of(name, KeyCase::lower);
            if (!lit) continue;
            auto [it, fresh] = set.names_.emplace(lit->key, c);
            if (!fresh && it->second != c) throw collision("name", name, it->second, c);
            auto& initials = first_chars[lit->key];
            if (initials.find(lit->first) == std::string::npos) initials.push_back(lit->first);
            set.max_words_ = std::max(set.max_words_, lit->words);
        }

        for (const auto& ticker : rec.merged_tickers) {
            const bool is_short = ticker.size() <= config.short_ticker_max_length;
            if (!(is_short && config.require_exchange_prefix_for_short_tickers)) {
                auto lit = literal_of(ticker, ticker_case);
                if (lit) {
                    auto [it, fresh] = set.bare_tickers_.emplace(lit->key, c);
                    if (!fresh && it->second != c) throw collision("ticker", ticker, it->second, c);
                    set.max_words_ = std::max(set.max_words_, lit->words);
                }
            }
            if (!rec.exchange.empty()) {
                MatcherSet::ExchangeKey key{upper(rec.exchange),
                                            config.case_sensitive_tickers ? ticker : upper(ticker)};
                auto [it, fresh] = set.qualified_tickers_.emplace(key, c);
                if (!fresh && it->second != c) {
                    throw collision("exchange ticker", rec.exchange + ":" + ticker, it->second, c);
                }
            }
        }
    }
    set.name_initials_ = std::move(first_chars);
    return set;
}

std::vector<std::string> MatcherSet::name_literals(std::size_t company) const {
    std::vector<std::string> out;
    for (const auto& [key, c] : names_) {
        if (c == company) out.push_back(key);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<MatchRecord> MatcherSet::find_all(std::string_view text) const {
    std::vector<MatchRecord> out;
    const auto words = words_of(text);
    std::string key;
    std::string scratch;
    const KeyCase ticker_case = case_sensitive_tickers_ ? KeyCase::exact : KeyCase::upper;

    for (std::size_t i = 0; i < words.size(); ++i) {
        const std::size_t max_len = std::min(max_words_, words.size() - i);
        for (std::size_t len = max_len; len >= 1; --len) {
            const std::size_t begin = words[i].begin;
            const std::size_t end = words[i + len - 1].end;
            if (span_key(text, words, i, len, KeyCase::lower, key, scratch)) {
                if (auto it = names_.find(key); it != names_.end()) {
                    const auto& initials = name_initials_.at(key);
                    if (initials.find(text[begin]) != std::string::npos) {
                        out.push_back({it->second, std::string(text.substr(begin, end - begin)), begin});
                    }
                }
            }
            if (span_key(text, words, i, len, ticker_case, key, scratch)) {
                if (auto it = bare_tickers_.find(key); it != bare_tickers_.end()) {
                    out.push_back({it->second, std::string(text.substr(begin, end - begin)), begin});
                }
            }
        }
    }

    if (!qualified_tickers_.empty() && text.find('(') != std::string_view::npos) {
        const std::string owned(text);
        for (auto it = std::sregex_iterator(owned.begin(), owned.end(), qualified_pattern());
             it != std::sregex_iterator(); ++it) {
            const auto& m = *it;
            ExchangeKey k{upper(m[1].str()),
                          case_sensitive_tickers_ ? m[2].str() : upper(m[2].str())};
            if (auto q = qualified_tickers_.find(k); q != qualified_tickers_.end()) {
                out.push_back({q->second, m[0].str(), static_cast<std::size_t>(m.position(0))});
            }
        }
    }

    std::sort(out.begin(), out.end(), [](const MatchRecord& a, const MatchRecord& b) {
        return std::tie(a.byte_offset, a.company, a.literal) <
               std::tie(b.byte_offset, b.company, b.literal);
    });
    return out;
}

std::string article_text(const Article& article) {
    return article.title + "\n\n" + article.body;
}

OccurrenceSet extract_occurrences(const Article& article, const MatcherSet& matchers) {
    OccurrenceSet occ;
    occ.article_id = article.id;
    occ.polarity = article.polarity;
    for (const auto& m : matchers.find_all(article_text(article))) {
        occ.companies.push_back(m.company);
    }
    std::sort(occ.companies.begin(), occ.companies.end());
    occ.companies.erase(std::unique(occ.companies.begin(), occ.companies.end()),
                        occ.companies.end());
    return occ;
}

const QuarterOccurrences* ParsedCorpus::find(Quarter q) const {
    auto it = std::lower_bound(quarters.begin(), quarters.end(), q,
                               [](const QuarterOccurrences& g, Quarter v) { return g.quarter < v; });
    if (it == quarters.end() || it->quarter != q) return nullptr;
    return &*it;
}

ParsedCorpus parse_corpus(const std::vector<Article>& articles, const MatcherSet& matchers,
                          unsigned threads) {
    ParsedCorpus parsed;
    std::vector<const Article*> included;
    for (const auto& a : articles) {
        if (a.excluded) {
            ++parsed.excluded_articles;
        } else {
            included.push_back(&a);
        }
    }
    std::vector<OccurrenceSet> sets(included.size());
    parallel_for(included.size(), threads,
                 [&](std::size_t i) { sets[i] = extract_occurrences(*included[i], matchers); });

    std::map<Quarter, QuarterOccurrences> grouped;
    for (std::size_t i = 0; i < included.size(); ++i) {
        Quarter q = quarter_of(included[i]->published_at);
        auto& g = grouped[q];
        g.quarter = q;
        g.sets.push_back(std::move(sets[i]));
    }
    for (auto& [q, g] : grouped) parsed.quarters.push_back(std::move(g));
    return parsed;
}

}  // namespace newsrisk
