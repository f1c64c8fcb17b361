#include "newsrisk/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <unistd.h>

#include <fmt/format.h>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "newsrisk/conet.hpp"
#include "newsrisk/digest.hpp"
#include "newsrisk/error.hpp"
#include "newsrisk/parallel.hpp"
#include "newsrisk/tsv.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace newsrisk {

namespace {

spdlog::logger& log() {
    static std::once_flag once;
    std::call_once(once, [] {
        if (!spdlog::get("newsrisk")) spdlog::stderr_logger_mt("newsrisk");
    });
    return *spdlog::get("newsrisk");
}

// ---------------------------------------------------------------------------
// config

json quarter_json(Quarter q) { return q.label(); }

Quarter quarter_from(const json& j, std::string_view key) {
    if (!j.is_string()) throw ValidationError(fmt::format("config: {} must be a quarter label", key));
    return Quarter::parse(j.get<std::string>());
}

template <class T>
void read_opt(const json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ValidationError(fmt::format("config: bad value for '{}': {}", key, e.what()));
    }
}

fs::path resolve(const fs::path& p, const fs::path& base) {
    if (p.empty() || p.is_absolute() || base.empty()) return p;
    return (base / p).lexically_normal();
}

json fixture_to_json(const FixtureSpec& s) {
    return json{{"seed", s.seed},
                {"companies", s.companies},
                {"first_quarter", quarter_json(s.first_quarter)},
                {"quarters", s.quarters},
                {"articles", s.articles},
                {"negative_state_share", s.negative_state_share},
                {"negative_article_share", s.negative_article_share},
                {"cross_mention_rate", s.cross_mention_rate},
                {"drift", s.drift},
                {"drift_window_days", s.drift_window_days},
                {"drift_onset_days", s.drift_onset_days},
                {"drift_shape", s.drift_shape == FixtureSpec::DriftShape::step ? "step" : "ramp"},
                {"daily_noise", s.daily_noise},
                {"walk_volatility", s.walk_volatility},
                {"weekend_trading", s.weekend_trading},
                {"short_ticker_companies", s.short_ticker_companies},
                {"merged_share_classes", s.merged_share_classes},
                {"drop_one_marketcap", s.drop_one_marketcap},
                {"companies_without_prices", s.companies_without_prices}};
}

FixtureSpec fixture_from_json(const json& j) {
    FixtureSpec s;
    read_opt(j, "seed", s.seed);
    read_opt(j, "companies", s.companies);
    if (j.contains("first_quarter")) s.first_quarter = quarter_from(j["first_quarter"], "first_quarter");
    read_opt(j, "quarters", s.quarters);
    read_opt(j, "articles", s.articles);
    read_opt(j, "negative_state_share", s.negative_state_share);
    read_opt(j, "negative_article_share", s.negative_article_share);
    read_opt(j, "cross_mention_rate", s.cross_mention_rate);
    read_opt(j, "drift", s.drift);
    read_opt(j, "drift_window_days", s.drift_window_days);
    read_opt(j, "drift_onset_days", s.drift_onset_days);
    if (j.contains("drift_shape")) {
        std::string shape;
        read_opt(j, "drift_shape", shape);
        if (shape != "ramp" && shape != "step") {
            throw ValidationError(fmt::format("config: drift_shape must be ramp or step, got '{}'", shape));
        }
        s.drift_shape = shape == "step" ? FixtureSpec::DriftShape::step : FixtureSpec::DriftShape::ramp;
    }
    read_opt(j, "daily_noise", s.daily_noise);
    read_opt(j, "walk_volatility", s.walk_volatility);
    read_opt(j, "weekend_trading", s.weekend_trading);
    read_opt(j, "short_ticker_companies", s.short_ticker_companies);
    read_opt(j, "merged_share_classes", s.merged_share_classes);
    read_opt(j, "drop_one_marketcap", s.drop_one_marketcap);
    read_opt(j, "companies_without_prices", s.companies_without_prices);
    return s;
}

// ---------------------------------------------------------------------------
// numbers in exported tables

double to_double(const std::string& s, std::string_view ctx) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) {
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
        throw ValidationError(fmt::format("{}: '{}' is not a number", ctx, s));
    }
    return v;
}

long long to_int(const std::string& s, std::string_view ctx) {
    long long v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) {
        throw ValidationError(fmt::format("{}: '{}' is not an integer", ctx, s));
    }
    return v;
}

std::string opt_real(const std::optional<double>& v) { return v ? tsv::fmt_real(*v) : std::string(); }

std::string threshold_label(double t) { return fmt::format("{:.2f}", t); }

// ---------------------------------------------------------------------------
// artifacts and manifest

constexpr std::string_view kManifest = "manifest.json";

std::string command_for(Stage s) { return fmt::format("newsrisk {}", to_string(s)); }

json load_manifest(const fs::path& out) {
    const auto path = out / kManifest;
    if (!fs::exists(path)) return json::object();
    try {
        return json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw ValidationError(fmt::format("{}: unreadable manifest: {}", path.string(), e.what()));
    }
}

/// Collects one stage's artifacts, writes each atomically and records them in
/// the manifest once the stage completes.
class StageOutput {
public:
    StageOutput(Stage stage, const RunConfig& config) : stage_(stage), config_(config) {}

    void add(const std::string& rel, const std::string& content, std::size_t rows) {
        write_atomic(config_.output_dir / rel, content);
        artifacts_[rel] = json{{"sha256", sha256_hex(content)}, {"rows", rows}};
    }
    void add(const std::string& rel, const tsv::Writer& w) { add(rel, w.str(), w.row_count()); }

    void input(const std::string& name, const fs::path& path) {
        inputs_[name] = sha256_file(path);
    }

    void commit() {
        json manifest = load_manifest(config_.output_dir);
        manifest["tool"] = "newsrisk";
        manifest["config"] = config_.to_json();
        manifest["config_hash"] = config_.hash();
        if (!manifest.contains("stages")) manifest["stages"] = json::object();
        // Downstream results were built from the previous version of this
        // stage; drop them so later commands insist on a rerun.
        bool downstream = false;
        for (Stage s : all_stages()) {
            if (downstream) manifest["stages"].erase(std::string(to_string(s)));
            if (s == stage_) downstream = true;
        }
        manifest["stages"][std::string(to_string(stage_))] =
            json{{"config_hash", config_.hash()}, {"inputs", inputs_}, {"artifacts", artifacts_}};
        write_atomic(config_.output_dir / kManifest, manifest.dump(2) + "\n");
    }

private:
    Stage stage_;
    const RunConfig& config_;
    json inputs_ = json::object();
    json artifacts_ = json::object();
};

/// Verifies that `upstream` has completed and that its artifacts are intact.
void require_stage(const RunConfig& config, Stage upstream, Stage current) {
    const json manifest = load_manifest(config.output_dir);
    const std::string name(to_string(upstream));
    const auto fail = [&](const std::string& why) {
        throw DependencyError(fmt::format("{} needs the output of '{}': {}", command_for(current),
                                          command_for(upstream), why),
                              command_for(upstream));
    };
    if (!manifest.contains("stages") || !manifest["stages"].contains(name)) {
        fail(fmt::format("no completed {} stage recorded in {}", name,
                         (config.output_dir / kManifest).string()));
    }
    for (const auto& [rel, meta] : manifest["stages"][name]["artifacts"].items()) {
        const auto path = config.output_dir / rel;
        if (!fs::exists(path)) fail(fmt::format("missing artifact {}", path.string()));
        if (sha256_file(path) != meta["sha256"].get<std::string>()) {
            fail(fmt::format("artifact {} was modified", path.string()));
        }
    }
}

void require_input(const fs::path& p, std::string_view what) {
    if (p.empty()) throw ValidationError(fmt::format("config: no {} path given", what));
    if (!fs::exists(p)) throw ValidationError(fmt::format("{} file not found: {}", what, p.string()));
}

std::string art(Stage s, std::string_view file) { return fmt::format("{}/{}", to_string(s), file); }

tsv::Table read_artifact(const RunConfig& config, Stage s, std::string_view file) {
    return tsv::read(config.output_dir / art(s, file));
}

// ---------------------------------------------------------------------------
// reloading upstream artifacts

std::vector<QuarterOccurrences> load_occurrences(const RunConfig& config,
                                                 const EntityUniverse& universe) {
    const auto articles = read_artifact(config, Stage::parse, "articles.tsv");
    const auto occurrences = read_artifact(config, Stage::parse, "occurrences.tsv");
    const std::string ctx = "parse/articles.tsv";
    const auto c_id = articles.column("article_id", ctx);
    const auto c_q = articles.column("quarter", ctx);
    const auto c_pol = articles.column("polarity", ctx);
    const auto c_ex = articles.column("excluded", ctx);

    std::map<std::string, std::vector<std::size_t>> mentions;
    const std::string octx = "parse/occurrences.tsv";
    const auto o_id = occurrences.column("article_id", octx);
    const auto o_c = occurrences.column("canonical_id", octx);
    for (const auto& row : occurrences.rows) {
        auto idx = universe.index_of(row[o_c]);
        if (!idx) throw ValidationError(fmt::format("{}: unknown company '{}'", octx, row[o_c]));
        mentions[row[o_id]].push_back(*idx);
    }

    std::vector<QuarterOccurrences> out;
    for (const auto& row : articles.rows) {
        if (row[c_ex] == "1") continue;
        const Quarter q = Quarter::parse(row[c_q]);
        if (out.empty() || out.back().quarter != q) {
            if (!out.empty() && q < out.back().quarter) {
                throw ValidationError(fmt::format("{}: articles out of order", ctx));
            }
            out.push_back({q, {}});
        }
        OccurrenceSet set{row[c_id], parse_polarity(row[c_pol]), {}};
        if (auto it = mentions.find(row[c_id]); it != mentions.end()) {
            set.companies = it->second;
            std::sort(set.companies.begin(), set.companies.end());
        }
        out.back().sets.push_back(std::move(set));
    }
    return out;
}

std::vector<QuarterNetworks> load_networks(const RunConfig& config, const EntityUniverse& universe) {
    const auto dir = config.output_dir / to_string(Stage::networks);
    return import_networks(read_file(dir / "nodes.tsv"), read_file(dir / "edges.tsv"), universe);
}

std::vector<AverageRank> load_average_rank(const RunConfig& config, const EntityUniverse& universe,
                                           CentralityMode mode) {
    const auto t = read_artifact(config, Stage::rank, "average_rank.tsv");
    const std::string ctx = "rank/average_rank.tsv";
    const auto c_pol = t.column("polarity", ctx);
    const auto c_mode = t.column("mode", ctx);
    const auto c_id = t.column("canonical_id", ctx);
    const auto c_mean = t.column("mean_rank", ctx);
    const auto c_n = t.column("quarters", ctx);
    std::vector<AverageRank> out;
    for (const auto& row : t.rows) {
        if (row[c_pol] != "mixed" || parse_centrality_mode(row[c_mode]) != mode) continue;
        auto idx = universe.index_of(row[c_id]);
        if (!idx) throw ValidationError(fmt::format("{}: unknown company '{}'", ctx, row[c_id]));
        out.push_back({*idx, to_double(row[c_mean], ctx), static_cast<std::size_t>(to_int(row[c_n], ctx))});
    }
    return out;
}

std::vector<RiskDatapoint> load_risk(const RunConfig& config, const EntityUniverse& universe) {
    const auto t = read_artifact(config, Stage::risk, "risk.tsv");
    const std::string ctx = "risk/risk.tsv";
    const auto c_q = t.column("quarter", ctx);
    const auto c_id = t.column("canonical_id", ctx);
    const auto c_x = t.column("x_own", ctx);
    const auto c_own = t.column("rr_own", ctx);
    const auto c_dir = t.column("rr_direct", ctx);
    const auto c_ind = t.column("rr_indirect", ctx);
    const auto c_tot = t.column("rr_total", ctx);
    std::vector<RiskDatapoint> out;
    for (const auto& row : t.rows) {
        auto idx = universe.index_of(row[c_id]);
        if (!idx) throw ValidationError(fmt::format("{}: unknown company '{}'", ctx, row[c_id]));
        RiskDatapoint dp;
        dp.company = *idx;
        dp.quarter = Quarter::parse(row[c_q]);
        dp.x_own = to_double(row[c_x], ctx);
        dp.risk = {to_double(row[c_own], ctx), to_double(row[c_dir], ctx),
                   to_double(row[c_ind], ctx), to_double(row[c_tot], ctx)};
        out.push_back(dp);
    }
    return out;
}

std::string clean_field(std::string s) {
    for (char& c : s) {
        if (c == '\t' || c == '\n' || c == '\r') c = ' ';
    }
    return s;
}

// ---------------------------------------------------------------------------
// aligned text tables

class TextTable {
public:
    explicit TextTable(std::vector<std::string> header) { rows_.push_back(std::move(header)); }
    void row(std::vector<std::string> r) { rows_.push_back(std::move(r)); }
    void rule() { rules_.insert(rows_.size()); }

    std::string str() const {
        std::vector<std::size_t> width(rows_.front().size(), 0);
        for (const auto& r : rows_) {
            for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
        }
        std::size_t total = 0;
        for (auto w : width) total += w + 2;
        std::string out;
        const auto line = [&](const std::vector<std::string>& r) {
            std::string s;
            for (std::size_t c = 0; c < r.size(); ++c) {
                // first column left-aligned, numbers right-aligned
                s += c == 0 ? fmt::format("{:<{}}", r[c], width[c]) : fmt::format("{:>{}}", r[c], width[c]);
                if (c + 1 < r.size()) s += "  ";
            }
            out += s + "\n";
        };
        line(rows_.front());
        out += std::string(total - 2, '-') + "\n";
        for (std::size_t i = 1; i < rows_.size(); ++i) {
            if (rules_.count(i)) out += std::string(total - 2, '-') + "\n";
            line(rows_[i]);
        }
        return out;
    }

private:
    std::vector<std::vector<std::string>> rows_;
    std::set<std::size_t> rules_;
};

std::string cell2(const std::string& s) {
    if (s.empty()) return "n/a";
    return fmt::format("{:.2f}", to_double(s, "report"));
}

}  // namespace

// ---------------------------------------------------------------------------
// RunConfig

void RunConfig::validate() const {
    if (!(alpha > 0.0)) throw ValidationError(fmt::format("alpha must be positive, got {}", alpha));
    if (!(alpha_alt > 0.0)) {
        throw ValidationError(fmt::format("alpha_alt must be positive, got {}", alpha_alt));
    }
    calibration.validate();
    if (top_k == 0) throw ValidationError("top_k must be at least 1");
    if (plot_top_k == 0) throw ValidationError("plot_top_k must be at least 1");
    if (thresholds.empty()) throw ValidationError("at least one risk threshold is required");
    for (double t : thresholds) {
        if (!(t >= 0.0 && t <= 1.0)) {
            throw ValidationError(fmt::format("risk threshold {} outside [0, 1]", t));
        }
    }
    delays.validate();
    if (window.last < window.first) {
        throw ValidationError(fmt::format("window {}..{} is empty", window.first.label(),
                                          window.last.label()));
    }
    if (!(centrality.condition_cap > 1.0)) throw ValidationError("condition_cap must exceed 1");
    if (output_dir.empty()) throw ValidationError("no output directory given");
}

json RunConfig::to_json() const {
    json suffixes = matcher.legal_suffixes;
    return json{
        {"articles", articles.generic_string()},
        {"universe", universe.generic_string()},
        {"prices", prices.generic_string()},
        {"marketcaps", marketcaps.generic_string()},
        {"window", {{"first", quarter_json(window.first)}, {"last", quarter_json(window.last)}}},
        {"alpha", alpha},
        {"alpha_alt", alpha_alt},
        {"calibration",
         {{"lambda", calibration.lambda}, {"mu", calibration.mu}, {"theta", calibration.theta}}},
        {"top_k", top_k},
        {"plot_top_k", plot_top_k},
        {"thresholds", thresholds},
        {"delays", {{"first", delays.first}, {"last", delays.last}}},
        {"seed", seed},
        {"matcher",
         {{"case_sensitive_tickers", matcher.case_sensitive_tickers},
          {"require_exchange_prefix_for_short_tickers",
           matcher.require_exchange_prefix_for_short_tickers},
          {"short_ticker_max_length", matcher.short_ticker_max_length},
          {"legal_suffixes", suffixes}}},
        {"condition_cap", centrality.condition_cap},
        {"node_weight", std::string(to_string(centrality.node_weight))},
        {"debug_matches", debug_matches},
        {"fixture", fixture_to_json(fixture)}};
}

RunConfig RunConfig::from_json(const json& j, const fs::path& base_dir) {
    if (!j.is_object()) throw ValidationError("config must be a JSON object");
    static const std::set<std::string> known{
        "articles", "universe", "prices", "marketcaps", "output_dir", "window", "alpha",
        "alpha_alt", "calibration", "top_k", "plot_top_k", "thresholds", "delays", "seed",
        "threads", "matcher", "condition_cap", "node_weight", "debug_matches", "fixture"};
    for (const auto& [key, _] : j.items()) {
        if (!known.count(key)) throw ValidationError(fmt::format("config: unknown key '{}'", key));
    }
    RunConfig c;
    std::string path;
    const auto read_path = [&](const char* key, fs::path& out) {
        if (j.contains(key)) {
            read_opt(j, key, path);
            out = resolve(path, base_dir);
        }
    };
    read_path("articles", c.articles);
    read_path("universe", c.universe);
    read_path("prices", c.prices);
    read_path("marketcaps", c.marketcaps);
    read_path("output_dir", c.output_dir);
    if (j.contains("window")) {
        const auto& w = j["window"];
        if (w.contains("first")) c.window.first = quarter_from(w["first"], "window.first");
        if (w.contains("last")) c.window.last = quarter_from(w["last"], "window.last");
    }
    read_opt(j, "alpha", c.alpha);
    read_opt(j, "alpha_alt", c.alpha_alt);
    if (j.contains("calibration")) {
        const auto& k = j["calibration"];
        read_opt(k, "lambda", c.calibration.lambda);
        read_opt(k, "mu", c.calibration.mu);
        read_opt(k, "theta", c.calibration.theta);
    }
    read_opt(j, "top_k", c.top_k);
    read_opt(j, "plot_top_k", c.plot_top_k);
    read_opt(j, "thresholds", c.thresholds);
    if (j.contains("delays")) {
        read_opt(j["delays"], "first", c.delays.first);
        read_opt(j["delays"], "last", c.delays.last);
    }
    read_opt(j, "seed", c.seed);
    read_opt(j, "threads", c.threads);
    if (j.contains("matcher")) {
        const auto& m = j["matcher"];
        read_opt(m, "case_sensitive_tickers", c.matcher.case_sensitive_tickers);
        read_opt(m, "require_exchange_prefix_for_short_tickers",
                 c.matcher.require_exchange_prefix_for_short_tickers);
        read_opt(m, "short_ticker_max_length", c.matcher.short_ticker_max_length);
        read_opt(m, "legal_suffixes", c.matcher.legal_suffixes);
    }
    read_opt(j, "condition_cap", c.centrality.condition_cap);
    if (j.contains("node_weight")) {
        std::string w;
        read_opt(j, "node_weight", w);
        c.centrality.node_weight = parse_node_weight(w);
    }
    read_opt(j, "debug_matches", c.debug_matches);
    if (j.contains("fixture")) c.fixture = fixture_from_json(j["fixture"]);
    return c;
}

RunConfig RunConfig::load(const fs::path& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw ValidationError(fmt::format("{}: invalid JSON: {}", path.string(), e.what()));
    }
    return from_json(j, fs::absolute(path).parent_path());
}

std::string RunConfig::hash() const { return sha256_hex(to_json().dump()); }

// ---------------------------------------------------------------------------
// stages

std::string_view to_string(Stage s) {
    switch (s) {
        case Stage::parse: return "parse";
        case Stage::networks: return "networks";
        case Stage::rank: return "rank";
        case Stage::risk: return "risk";
        case Stage::backtest: return "backtest";
        case Stage::report: return "report";
    }
    return "?";
}

std::optional<Stage> parse_stage(std::string_view name) {
    for (Stage s : all_stages()) {
        if (to_string(s) == name) return s;
    }
    return std::nullopt;
}

const std::vector<Stage>& all_stages() {
    static const std::vector<Stage> stages{Stage::parse, Stage::networks, Stage::rank,
                                           Stage::risk,  Stage::backtest, Stage::report};
    return stages;
}

void write_atomic(const fs::path& path, std::string_view content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    auto tmp = path;
    tmp += fmt::format(".tmp.{}", ::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw ValidationError(fmt::format("cannot write {}", tmp.string()));
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        f.flush();
        if (!f) {
            fs::remove(tmp);
            throw ValidationError(fmt::format("write failed for {}", tmp.string()));
        }
    }
    fs::rename(tmp, path);
}

void cmd_parse(const RunConfig& config) {
    config.validate();
    require_input(config.articles, "articles");
    require_input(config.universe, "universe");
    log().info("stage=parse event=start articles={} universe={}", config.articles.string(),
               config.universe.string());

    const auto universe = load_universe(config.universe);
    const auto matchers = compile_matchers(universe, config.matcher);
    const auto articles = load_articles(config.articles, config.window);

    std::vector<const Article*> included;
    for (const auto& a : articles) {
        if (!a.excluded) included.push_back(&a);
    }
    std::vector<OccurrenceSet> sets(included.size());
    std::vector<std::vector<MatchRecord>> matches(config.debug_matches ? included.size() : 0);
    parallel_for(included.size(), config.threads, [&](std::size_t i) {
        sets[i] = extract_occurrences(*included[i], matchers);
        if (config.debug_matches) matches[i] = matchers.find_all(article_text(*included[i]));
    });

    StageOutput out(Stage::parse, config);
    out.input("articles", config.articles);
    out.input("universe", config.universe);

    tsv::Writer art_w({"article_id", "published_at", "quarter", "polarity", "excluded", "mentions"});
    tsv::Writer occ_w({"article_id", "quarter", "polarity", "canonical_id"});
    struct Summary {
        std::size_t articles = 0, positive = 0, negative = 0, with_mentions = 0, mentions = 0;
    };
    std::map<Quarter, Summary> summary;
    std::size_t k = 0;
    for (const auto& a : articles) {
        const Quarter q = quarter_of(a.published_at);
        const std::string pol(to_string(a.polarity));
        if (a.excluded) {
            art_w.row({a.id, format_timestamp(a.published_at), q.label(), pol, "1", "0"});
            continue;
        }
        const auto& set = sets[k++];
        art_w.row({a.id, format_timestamp(a.published_at), q.label(), pol, "0",
                   std::to_string(set.companies.size())});
        for (std::size_t c : set.companies) {
            occ_w.row({a.id, q.label(), pol, universe[c].canonical_id});
        }
        auto& s = summary[q];
        ++s.articles;
        ++(a.polarity == Polarity::positive ? s.positive : s.negative);
        if (!set.companies.empty()) ++s.with_mentions;
        s.mentions += set.companies.size();
    }
    tsv::Writer sum_w({"quarter", "articles", "positive", "negative", "with_mentions", "mentions"});
    for (const auto& [q, s] : summary) {
        sum_w.row({q.label(), std::to_string(s.articles), std::to_string(s.positive),
                   std::to_string(s.negative), std::to_string(s.with_mentions),
                   std::to_string(s.mentions)});
    }
    out.add(art(Stage::parse, "articles.tsv"), art_w);
    out.add(art(Stage::parse, "occurrences.tsv"), occ_w);
    out.add(art(Stage::parse, "summary.tsv"), sum_w);

    if (config.debug_matches) {
        tsv::Writer m_w({"article_id", "canonical_id", "literal", "byte_offset"});
        for (std::size_t i = 0; i < included.size(); ++i) {
            for (const auto& m : matches[i]) {
                m_w.row({included[i]->id, universe[m.company].canonical_id, clean_field(m.literal),
                         std::to_string(m.byte_offset)});
            }
        }
        out.add(art(Stage::parse, "matches.tsv"), m_w);
    }
    out.commit();
    log().info("stage=parse event=done articles={} included={} quarters={} occurrences={}",
               articles.size(), included.size(), summary.size(), occ_w.row_count());
}

void cmd_networks(const RunConfig& config) {
    config.validate();
    require_input(config.universe, "universe");
    require_stage(config, Stage::parse, Stage::networks);
    log().info("stage=networks event=start");

    const auto universe = load_universe(config.universe);
    const auto occurrences = load_occurrences(config, universe);
    std::vector<QuarterNetworks> networks;
    networks.reserve(occurrences.size());
    for (const auto& q : occurrences) {
        networks.push_back(build_networks(q.sets, q.quarter, universe.size()));
    }

    StageOutput out(Stage::networks, config);
    out.input("universe", config.universe);
    const auto nodes = export_nodes(networks, universe);
    const auto edges = export_edges(networks, universe);
    const auto rows = [](const std::string& s) {
        return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')) - 1;
    };
    out.add(art(Stage::networks, "nodes.tsv"), nodes, rows(nodes));
    out.add(art(Stage::networks, "edges.tsv"), edges, rows(edges));

    tsv::Writer st({"quarter", "polarity", "articles", "edges", "avg_edges_per_node", "max_degree",
                    "max_degree_id"});
    for (const auto& nets : networks) {
        for (auto p : kAllPolarities) {
            const auto s = network_stats(nets.get(p));
            st.row({nets.mixed.quarter.label(), std::string(to_string(p)),
                    std::to_string(s.article_count), std::to_string(s.edge_count),
                    tsv::fmt_real(s.avg_edges_per_node), std::to_string(s.max_degree),
                    s.max_degree_node ? universe[*s.max_degree_node].canonical_id : std::string()});
        }
    }
    out.add(art(Stage::networks, "stats.tsv"), st);
    out.commit();
    log().info("stage=networks event=done quarters={}", networks.size());
}

void cmd_rank(const RunConfig& config) {
    config.validate();
    require_input(config.universe, "universe");
    require_input(config.marketcaps, "marketcaps");
    require_stage(config, Stage::networks, Stage::rank);
    log().info("stage=rank event=start alpha={} alpha_alt={}", config.alpha, config.alpha_alt);

    const auto universe = load_universe(config.universe);
    const auto caps = load_marketcaps(config.marketcaps);
    const auto networks = load_networks(config, universe);

    struct Task {
        const QuarterNetwork* net;
        NetworkCentrality main;
        std::vector<double> alt;
    };
    std::vector<Task> tasks;
    for (const auto& nets : networks) {
        for (auto p : kAllPolarities) tasks.push_back({&nets.get(p), {}, {}});
    }
    parallel_for(tasks.size(), config.threads, [&](std::size_t i) {
        auto& t = tasks[i];
        t.main = score_network(*t.net, config.alpha, universe, caps, config.centrality);
        t.alt = information_centrality(smooth(*t.net, config.alpha_alt), config.centrality);
    });

    StageOutput out(Stage::rank, config);
    out.input("universe", config.universe);
    out.input("marketcaps", config.marketcaps);

    tsv::Writer cw({"quarter", "polarity", "mode", "canonical_id", "score", "rank"});
    tsv::Writer iw({"quarter", "polarity", "canonical_id", "information"});
    tsv::Writer sw({"quarter", "polarity", "alpha", "alpha_alt", "kendall_tau", "floor", "floor_alt",
                    "degenerate"});
    std::map<std::pair<NetworkPolarity, CentralityMode>, std::vector<CentralityTable>> by_kind;
    for (const auto& t : tasks) {
        const std::string q = t.net->quarter.label();
        const std::string pol(to_string(t.net->polarity));
        if (t.main.degenerate) {
            log().warn("stage=rank event=degenerate quarter={} polarity={}", q, pol);
        }
        for (const auto* table : {&t.main.absolute, &t.main.normalized}) {
            for (const auto& e : table->entries) {
                cw.row({q, pol, std::string(to_string(table->mode)), universe[e.company].canonical_id,
                        tsv::fmt_real(e.score), std::to_string(e.rank)});
            }
            by_kind[{t.net->polarity, table->mode}].push_back(*table);
        }
        for (std::size_t i = 0; i < t.main.raw.size(); ++i) {
            iw.row({q, pol, universe[i].canonical_id, tsv::fmt_real(t.main.raw[i], 17)});
        }
        const auto floor_of = [](const std::vector<double>& v) {
            const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
            return v.empty() ? 0.0 : *lo / *hi;
        };
        sw.row({q, pol, tsv::fmt_real(config.alpha), tsv::fmt_real(config.alpha_alt),
                tsv::fmt_real(kendall_tau(t.main.raw, t.alt)), tsv::fmt_real(floor_of(t.main.raw)),
                tsv::fmt_real(floor_of(t.alt)), t.main.degenerate ? "1" : "0"});
    }

    tsv::Writer aw({"polarity", "mode", "position", "canonical_id", "ticker", "mean_rank", "quarters"});
    std::map<std::pair<NetworkPolarity, CentralityMode>, std::vector<AverageRank>> averages;
    for (auto p : kAllPolarities) {
        for (auto m : {CentralityMode::absolute, CentralityMode::normalized}) {
            const auto& tables = by_kind[{p, m}];
            auto avg = average_rank(tables, universe.size());
            for (std::size_t i = 0; i < avg.size(); ++i) {
                const auto& rec = universe[avg[i].company];
                aw.row({std::string(to_string(p)), std::string(to_string(m)), std::to_string(i + 1),
                        rec.canonical_id, rec.primary_ticker, tsv::fmt_real(avg[i].mean_rank),
                        std::to_string(avg[i].quarters)});
            }
            averages[{p, m}] = std::move(avg);
        }
    }

    // Top companies by average rank: side by side per mode and polarity.
    std::vector<std::string> t1_header{"position"};
    for (auto m : {CentralityMode::absolute, CentralityMode::normalized}) {
        for (auto p : kAllPolarities) {
            t1_header.push_back(fmt::format("{}_{}", to_string(m), to_string(p)));
        }
    }
    tsv::Writer t1(t1_header);
    for (std::size_t i = 0; i < config.plot_top_k; ++i) {
        std::vector<std::string> row{std::to_string(i + 1)};
        for (auto m : {CentralityMode::absolute, CentralityMode::normalized}) {
            for (auto p : kAllPolarities) {
                const auto& avg = averages[{p, m}];
                row.push_back(i < avg.size() ? universe[avg[i].company].primary_ticker : std::string());
            }
        }
        t1.row(row);
    }

    // Per-quarter mixed-network scores of the top companies, for plotting.
    tsv::Writer series({"mode", "quarter", "canonical_id", "ticker", "score", "rank"});
    for (auto m : {CentralityMode::absolute, CentralityMode::normalized}) {
        const auto& avg = averages[{NetworkPolarity::mixed, m}];
        const std::size_t k = std::min(config.plot_top_k, avg.size());
        for (const auto& table : by_kind[{NetworkPolarity::mixed, m}]) {
            for (std::size_t i = 0; i < k; ++i) {
                const auto* e = table.find(avg[i].company);
                if (!e) continue;
                const auto& rec = universe[avg[i].company];
                series.row({std::string(to_string(m)), table.quarter.label(), rec.canonical_id,
                            rec.primary_ticker, tsv::fmt_real(e->score), std::to_string(e->rank)});
            }
        }
    }

    out.add(art(Stage::rank, "centrality.tsv"), cw);
    out.add(art(Stage::rank, "information.tsv"), iw);
    out.add(art(Stage::rank, "smoothing.tsv"), sw);
    out.add(art(Stage::rank, "average_rank.tsv"), aw);
    out.add(art(Stage::rank, "table1.tsv"), t1);
    out.add(art(Stage::rank, "series.tsv"), series);
    out.commit();
    log().info("stage=rank event=done networks={}", tasks.size());
}

void cmd_risk(const RunConfig& config) {
    config.validate();
    require_input(config.universe, "universe");
    require_stage(config, Stage::networks, Stage::risk);
    require_stage(config, Stage::rank, Stage::risk);
    log().info("stage=risk event=start lambda={} mu={} theta={}", config.calibration.lambda,
               config.calibration.mu, config.calibration.theta);

    const auto universe = load_universe(config.universe);
    const auto networks = load_networks(config, universe);
    const auto abs_rank = load_average_rank(config, universe, CentralityMode::absolute);
    const auto norm_rank = load_average_rank(config, universe, CentralityMode::normalized);
    const auto selection = select_universe(abs_rank, norm_rank, config.top_k);
    if (selection.short_list) {
        log().warn("stage=risk event=short_ranking top_k={} absolute={} normalized={}", config.top_k,
                   abs_rank.size(), norm_rank.size());
    }

    std::vector<std::vector<RiskDatapoint>> per_quarter(networks.size());
    parallel_for(networks.size(), config.threads, [&](std::size_t i) {
        per_quarter[i] = riskrank_quarter(networks[i], selection.companies, config.calibration);
    });

    StageOutput out(Stage::risk, config);
    out.input("universe", config.universe);

    tsv::Writer uw({"canonical_id", "ticker", "absolute_position", "normalized_position"});
    const auto position = [](const std::vector<AverageRank>& v, std::size_t c, std::size_t k) {
        for (std::size_t i = 0; i < std::min(k, v.size()); ++i) {
            if (v[i].company == c) return std::to_string(i + 1);
        }
        return std::string();
    };
    for (std::size_t c : selection.companies) {
        uw.row({universe[c].canonical_id, universe[c].primary_ticker,
                position(abs_rank, c, config.top_k), position(norm_rank, c, config.top_k)});
    }

    tsv::Writer rw({"quarter", "canonical_id", "x_own", "rr_own", "rr_direct", "rr_indirect",
                    "rr_total", "lambda", "mu", "theta"});
    const auto& cal = config.calibration;
    for (const auto& q : per_quarter) {
        for (const auto& dp : q) {
            rw.row({dp.quarter.label(), universe[dp.company].canonical_id, tsv::fmt_real(dp.x_own, 17),
                    tsv::fmt_real(dp.risk.rr_own, 17), tsv::fmt_real(dp.risk.rr_direct, 17),
                    tsv::fmt_real(dp.risk.rr_indirect, 17), tsv::fmt_real(dp.risk.rr_total, 17),
                    tsv::fmt_real(cal.lambda), tsv::fmt_real(cal.mu), tsv::fmt_real(cal.theta)});
        }
    }
    out.add(art(Stage::risk, "universe.tsv"), uw);
    out.add(art(Stage::risk, "risk.tsv"), rw);
    out.commit();
    log().info("stage=risk event=done companies={} datapoints={}", selection.companies.size(),
               rw.row_count());
}

void cmd_backtest(const RunConfig& config) {
    config.validate();
    require_input(config.universe, "universe");
    require_input(config.prices, "prices");
    require_stage(config, Stage::risk, Stage::backtest);
    log().info("stage=backtest event=start delays={}..{}", config.delays.first, config.delays.last);

    const auto universe = load_universe(config.universe);
    const auto prices = load_prices(config.prices, universe);
    const auto datapoints = load_risk(config, universe);
    const auto events = compute_events(datapoints, universe, prices, config.delays, config.threads);

    StageOutput out(Stage::backtest, config);
    out.input("universe", config.universe);
    out.input("prices", config.prices);

    tsv::Writer dw({"quarter", "canonical_id", "measurement_date", "valid", "defined_events", "x_own",
                    "rr_total"});
    for (std::size_t i = 0; i < datapoints.size(); ++i) {
        const auto& dp = datapoints[i];
        const auto md = measurement_date(dp.quarter, prices.find(universe[dp.company].canonical_id));
        const auto defined = std::count_if(events.outcomes[i].begin(), events.outcomes[i].end(),
                                           [](signed char o) { return o >= 0; });
        dw.row({dp.quarter.label(), universe[dp.company].canonical_id, md ? format_date(*md) : "",
                events.valid[i] ? "1" : "0", std::to_string(defined), tsv::fmt_real(dp.x_own),
                tsv::fmt_real(dp.risk.rr_total)});
    }

    const auto bench_members = threshold_members(datapoints, events, RiskKind::aggregated, 0.0);
    const auto bench = daily_rates(events, bench_members);

    tsv::Writer rates({"kind", "threshold", "members", "delay", "defined", "decreased", "rate"});
    const auto emit_rates = [&](std::string_view kind, double t, std::size_t members,
                                const DailyRates& r) {
        for (int d = r.bounds.first; d <= r.bounds.last; ++d) {
            const auto k = static_cast<std::size_t>(d - r.bounds.first);
            rates.row({std::string(kind), threshold_label(t), std::to_string(members),
                       std::to_string(d), std::to_string(r.defined[k]), std::to_string(r.decreased[k]),
                       opt_real(r.rate(d))});
        }
    };
    const auto count = [](const std::vector<bool>& m) {
        return static_cast<std::size_t>(std::count(m.begin(), m.end(), true));
    };
    emit_rates("benchmark", 0.0, count(bench_members), bench);

    tsv::Writer t2({"kind", "threshold", "members", "range", "first", "last", "subset_rate",
                    "benchmark_rate", "abs_diff", "rel_diff", "benchmark_std", "std_outperformance"});
    const auto stat_cells = [](const std::optional<RangeStat>& s) -> std::vector<std::string> {
        if (!s) return {"", "", "", "", "", ""};
        return {tsv::fmt_real(s->subset_rate),  tsv::fmt_real(s->benchmark_rate),
                tsv::fmt_real(s->abs_diff),     tsv::fmt_real(s->rel_diff),
                tsv::fmt_real(s->benchmark_daily_std), opt_real(s->std_outperformance)};
    };
    tsv::Writer t3({"threshold", "range", "first", "last", "benchmark_rate", "aggregated_rate",
                    "aggregated_std_outperformance", "individual_rate", "individual_std_outperformance",
                    "aggregated_outperformance"});
    tsv::Writer best({"kind", "threshold", "delay", "diff", "subset_rate", "benchmark_rate"});

    for (double t : config.thresholds) {
        std::map<RiskKind, DailyRates> by_kind;
        for (auto kind : {RiskKind::aggregated, RiskKind::individual}) {
            const auto members = threshold_members(datapoints, events, kind, t);
            auto r = daily_rates(events, members);
            emit_rates(to_string(kind), t, count(members), r);
            const auto table = build_table2(r, bench, t, kind);
            for (const auto& row : table.rows) {
                std::vector<std::string> cells{std::string(to_string(kind)), threshold_label(t),
                                               std::to_string(count(members)),
                                               fmt::format("{} to {}", row.range.first, row.range.last),
                                               std::to_string(row.range.first),
                                               std::to_string(row.range.last)};
                for (auto& c : stat_cells(row.stat)) cells.push_back(std::move(c));
                t2.row(cells);
            }
            std::vector<std::string> avg{std::string(to_string(kind)), threshold_label(t),
                                         std::to_string(count(members)), "Average", "", ""};
            for (auto& c : stat_cells(table.average)) avg.push_back(std::move(c));
            t2.row(avg);
            if (!table.omitted.empty()) {
                log().warn("stage=backtest event=rows_omitted kind={} threshold={} rows={}",
                           to_string(kind), threshold_label(t), table.omitted.size());
            }
            if (auto b = best_single_delay(r, bench)) {
                best.row({std::string(to_string(kind)), threshold_label(t), std::to_string(b->delay),
                          tsv::fmt_real(b->diff), tsv::fmt_real(b->subset_rate),
                          tsv::fmt_real(b->benchmark_rate)});
            }
            by_kind.emplace(kind, std::move(r));
        }
        const auto table3 = build_table3(by_kind.at(RiskKind::aggregated),
                                         by_kind.at(RiskKind::individual), bench, t);
        const auto t3_row = [&](const std::string& label, std::string first, std::string last,
                                const Table3Row& r) {
            const auto& any = r.aggregated ? r.aggregated : r.individual;
            t3.row({threshold_label(t), label, std::move(first), std::move(last),
                    any ? tsv::fmt_real(any->benchmark_rate) : "",
                    r.aggregated ? tsv::fmt_real(r.aggregated->subset_rate) : "",
                    r.aggregated ? opt_real(r.aggregated->std_outperformance) : "",
                    r.individual ? tsv::fmt_real(r.individual->subset_rate) : "",
                    r.individual ? opt_real(r.individual->std_outperformance) : "",
                    opt_real(r.agg_outperformance)});
        };
        for (const auto& r : table3.rows) {
            t3_row(fmt::format("{} to {}", r.range.first, r.range.last), std::to_string(r.range.first),
                   std::to_string(r.range.last), r);
        }
        if (table3.average) t3_row("Average", "", "", *table3.average);
    }

    tsv::Writer hw({"edge", "aggregated", "individual", "aggregated_pct", "individual_pct"});
    for (const auto& b : risk_histogram(datapoints)) {
        hw.row({fmt::format("{:.1f}", b.edge), std::to_string(b.aggregated), std::to_string(b.individual),
                tsv::fmt_real(b.aggregated_pct), tsv::fmt_real(b.individual_pct)});
    }

    // Two-proportion standard errors at threshold 1.0; n counts defined events
    // over the delay range.
    tsv::Writer se({"range", "comparison", "p1", "n1", "p2", "n2", "stderr"});
    {
        const auto agg = daily_rates(events, threshold_members(datapoints, events, RiskKind::aggregated, 1.0));
        const auto ind = daily_rates(events, threshold_members(datapoints, events, RiskKind::individual, 1.0));
        const auto pooled = [](const DailyRates& r, int a, int b) -> std::pair<double, double> {
            double n = 0, dec = 0;
            for (int d = a; d <= b; ++d) {
                const auto k = static_cast<std::size_t>(d - r.bounds.first);
                n += static_cast<double>(r.defined[k]);
                dec += static_cast<double>(r.decreased[k]);
            }
            return {n > 0 ? dec / n : 0.0, n};
        };
        const auto emit = [&](DelayRange range, std::string_view what, const DailyRates& x,
                              const DailyRates& y) {
            if (range.first < config.delays.first || range.last > config.delays.last) return;
            const auto [p1, n1] = pooled(x, range.first, range.last);
            const auto [p2, n2] = pooled(y, range.first, range.last);
            se.row({fmt::format("{} to {}", range.first, range.last), std::string(what),
                    tsv::fmt_real(p1), fmt::format("{:.0f}", n1), tsv::fmt_real(p2),
                    fmt::format("{:.0f}", n2),
                    (n1 > 0 && n2 > 0) ? tsv::fmt_real(proportion_stderr(p1, n1, p2, n2)) : ""});
        };
        for (DelayRange r : {DelayRange{11, 20}, DelayRange{61, 70}}) {
            emit(r, "aggregated_vs_benchmark", agg, bench);
            emit(r, "individual_vs_benchmark", ind, bench);
        }
        for (DelayRange r : {DelayRange{11, 20}, DelayRange{21, 30}, DelayRange{31, 40}, DelayRange{41, 50}}) {
            emit(r, "aggregated_vs_individual", agg, ind);
        }
    }

    tsv::Writer sum({"key", "value"});
    sum.row({"datapoints", std::to_string(datapoints.size())});
    sum.row({"valid_datapoints", std::to_string(events.valid_count())});
    sum.row({"delay_first", std::to_string(config.delays.first)});
    sum.row({"delay_last", std::to_string(config.delays.last)});

    out.add(art(Stage::backtest, "datapoints.tsv"), dw);
    out.add(art(Stage::backtest, "daily_rates.tsv"), rates);
    out.add(art(Stage::backtest, "table2.tsv"), t2);
    out.add(art(Stage::backtest, "table3.tsv"), t3);
    out.add(art(Stage::backtest, "best_delay.tsv"), best);
    out.add(art(Stage::backtest, "histogram.tsv"), hw);
    out.add(art(Stage::backtest, "stderr.tsv"), se);
    out.add(art(Stage::backtest, "summary.tsv"), sum);
    out.commit();
    log().info("stage=backtest event=done datapoints={} valid={}", datapoints.size(),
               events.valid_count());
}

void cmd_report(const RunConfig& config) {
    config.validate();
    require_input(config.universe, "universe");
    require_input(config.prices, "prices");
    require_stage(config, Stage::rank, Stage::report);
    require_stage(config, Stage::risk, Stage::report);
    require_stage(config, Stage::backtest, Stage::report);
    log().info("stage=report event=start");

    const auto universe = load_universe(config.universe);
    const auto prices = load_prices(config.prices, universe);
    StageOutput out(Stage::report, config);
    out.input("universe", config.universe);
    out.input("prices", config.prices);
    const auto& cal = config.calibration;
    const std::string calib = fmt::format("lambda={} mu={} theta={}", cal.lambda, cal.mu, cal.theta);

    // Table 2: one block per kind and threshold.
    {
        const auto t = read_artifact(config, Stage::backtest, "table2.tsv");
        const std::string ctx = "backtest/table2.tsv";
        const auto c = [&](std::string_view n) { return t.column(n, ctx); };
        const auto c_kind = c("kind"), c_t = c("threshold"), c_n = c("members"), c_range = c("range");
        const auto c_sub = c("subset_rate"), c_bench = c("benchmark_rate"), c_abs = c("abs_diff");
        const auto c_rel = c("rel_diff"), c_std = c("benchmark_std"), c_out = c("std_outperformance");
        std::string text;
        std::string current;
        std::optional<TextTable> table;
        const auto flush = [&] {
            if (table) text += table->str() + "\n";
        };
        for (const auto& row : t.rows) {
            const std::string key = row[c_kind] + row[c_t];
            if (key != current) {
                flush();
                current = key;
                text += fmt::format("Risk threshold {} ({} risk, {} datapoints), {}\n", row[c_t],
                                    row[c_kind], row[c_n], calib);
                text += "Average: arithmetic mean of every defined row above, column by column\n";
                table.emplace(std::vector<std::string>{"Delay (days)", "Subset (%)", "Benchmark (%)",
                                                       "Abs. diff", "Rel. diff (%)", "Std",
                                                       "Std outperf."});
            }
            if (row[c_range] == "Average") table->rule();
            table->row({row[c_range], cell2(row[c_sub]), cell2(row[c_bench]), cell2(row[c_abs]),
                        cell2(row[c_rel]), cell2(row[c_std]), cell2(row[c_out])});
        }
        flush();
        out.add(art(Stage::report, "table2.txt"), text, t.rows.size());
    }

    // Table 3: aggregated vs individual risk per threshold.
    {
        const auto t = read_artifact(config, Stage::backtest, "table3.tsv");
        const std::string ctx = "backtest/table3.tsv";
        const auto c = [&](std::string_view n) { return t.column(n, ctx); };
        const auto c_t = c("threshold"), c_range = c("range"), c_bench = c("benchmark_rate");
        const auto c_ar = c("aggregated_rate"), c_ao = c("aggregated_std_outperformance");
        const auto c_ir = c("individual_rate"), c_io = c("individual_std_outperformance");
        const auto c_d = c("aggregated_outperformance");
        std::string text;
        std::string current;
        std::optional<TextTable> table;
        for (const auto& row : t.rows) {
            if (row[c_t] != current) {
                if (table) text += table->str() + "\n";
                current = row[c_t];
                text += fmt::format("Risk threshold {}, aggregated vs individual risk, {}\n", row[c_t],
                                    calib);
                table.emplace(std::vector<std::string>{"Delay (days)", "Benchmark (%)", "Aggregated (%)",
                                                       "Agg. std outperf.", "Individual (%)",
                                                       "Ind. std outperf.", "Agg. outperf."});
            }
            if (row[c_range] == "Average") table->rule();
            table->row({row[c_range], cell2(row[c_bench]), cell2(row[c_ar]), cell2(row[c_ao]),
                        cell2(row[c_ir]), cell2(row[c_io]), cell2(row[c_d])});
        }
        if (table) text += table->str();
        out.add(art(Stage::report, "table3.txt"), text, t.rows.size());
    }

    // Table 1: top companies by average rank.
    {
        const auto t = read_artifact(config, Stage::rank, "table1.tsv");
        TextTable table(t.header);
        for (const auto& row : t.rows) table.row(row);
        out.add(art(Stage::report, "table1.txt"), table.str(), t.rows.size());
    }

    // Figures 1 and 2: per-quarter scores of the top companies.
    {
        const auto t = read_artifact(config, Stage::rank, "series.tsv");
        const std::string ctx = "rank/series.tsv";
        const auto c_mode = t.column("mode", ctx), c_q = t.column("quarter", ctx);
        const auto c_id = t.column("canonical_id", ctx), c_tk = t.column("ticker", ctx);
        const auto c_s = t.column("score", ctx);
        for (auto [mode, file] : {std::pair{"absolute", "figure1_absolute.tsv"},
                                  std::pair{"normalized", "figure2_normalized.tsv"}}) {
            tsv::Writer w({"quarter", "canonical_id", "ticker", "score"});
            for (const auto& row : t.rows) {
                if (row[c_mode] == mode) w.row({row[c_q], row[c_id], row[c_tk], row[c_s]});
            }
            out.add(art(Stage::report, file), w);
        }
    }

    // Figure 3: daily closes alongside the risk of the quarter containing the day.
    {
        const auto risk = load_risk(config, universe);
        std::map<std::pair<std::size_t, Quarter>, const RiskDatapoint*> index;
        for (const auto& dp : risk) index[{dp.company, dp.quarter}] = &dp;
        std::set<std::size_t> companies;
        for (const auto& dp : risk) companies.insert(dp.company);
        tsv::Writer w({"canonical_id", "ticker", "date", "adjusted_close", "rr_own", "rr_own_direct",
                       "rr_total"});
        for (std::size_t c : companies) {
            const auto& rec = universe[c];
            const auto* s = prices.find(rec.canonical_id);
            if (!s) continue;
            for (std::size_t i = 0; i < s->dates.size(); ++i) {
                auto it = index.find({c, quarter_of(s->dates[i])});
                if (it == index.end()) continue;
                const auto& r = it->second->risk;
                w.row({rec.canonical_id, rec.primary_ticker, format_date(s->dates[i]),
                       tsv::fmt_real(s->closes[i]), tsv::fmt_real(r.rr_own),
                       tsv::fmt_real(r.rr_own + r.rr_direct), tsv::fmt_real(r.rr_total)});
            }
        }
        out.add(art(Stage::report, "figure3_risk_price.tsv"), w);
    }

    // Figure 4: share of datapoints at or above each risk level.
    {
        const auto t = read_artifact(config, Stage::backtest, "histogram.tsv");
        tsv::Writer w(t.header);
        for (const auto& row : t.rows) w.row(row);
        out.add(art(Stage::report, "figure4_histogram.tsv"), w);
    }

    out.commit();
    log().info("stage=report event=done dir={}", (config.output_dir / "report").string());
}

void run_stage(Stage stage, const RunConfig& config) {
    switch (stage) {
        case Stage::parse: return cmd_parse(config);
        case Stage::networks: return cmd_networks(config);
        case Stage::rank: return cmd_rank(config);
        case Stage::risk: return cmd_risk(config);
        case Stage::backtest: return cmd_backtest(config);
        case Stage::report: return cmd_report(config);
    }
}

void run_pipeline(const RunConfig& config) {
    config.validate();
    require_input(config.articles, "articles");
    require_input(config.universe, "universe");
    require_input(config.prices, "prices");
    require_input(config.marketcaps, "marketcaps");
    for (Stage s : all_stages()) run_stage(s, config);
}

void cmd_fixture(const FixtureSpec& spec, const fs::path& dir) {
    log().info("stage=fixture event=start seed={} companies={} quarters={} articles={}", spec.seed,
               spec.companies, spec.quarters, spec.articles);
    const auto fixture = generate_fixture(spec);
    write_fixture(fixture, dir);

    RunConfig config;
    config.articles = "articles.jsonl";
    config.universe = "universe.tsv";
    config.prices = "prices.tsv";
    config.marketcaps = "marketcaps.tsv";
    config.seed = spec.seed;
    config.fixture = spec;
    config.window.first = spec.first_quarter;
    Quarter last = spec.first_quarter;
    for (std::size_t i = 1; i < spec.quarters; ++i) last = last.next();
    config.window.last = last;
    json j = config.to_json();
    j["output_dir"] = "out";
    write_atomic(dir / "config.json", j.dump(2) + "\n");
    log().info("stage=fixture event=done dir={} articles={} drifted={}", dir.string(),
               fixture.articles.size(), fixture.truth.drifted.size());
}

}  // namespace newsrisk
