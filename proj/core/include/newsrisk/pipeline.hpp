#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "newsrisk/backtest.hpp"
#include "newsrisk/centrality.hpp"
#include "newsrisk/corpus.hpp"
#include "newsrisk/entity_parser.hpp"
#include "newsrisk/fixture.hpp"
#include "newsrisk/riskrank.hpp"

namespace newsrisk {

/// Everything a pipeline run depends on. Defaults reproduce the reference
/// setup: Q1 2011 to Q2 2016, smoothing 0.1 (1.0 as comparison), top-50
/// selection, thresholds 0.5..1.0 and delays of 3 to 90 days.
struct RunConfig {
    std::filesystem::path articles;
    std::filesystem::path universe;
    std::filesystem::path prices;
    std::filesystem::path marketcaps;
    std::filesystem::path output_dir = "out";

    AnalysisWindow window;
    double alpha = 0.1;
    double alpha_alt = 1.0;
    RiskCalibration calibration;
    std::size_t top_k = 50;
    std::size_t plot_top_k = 25;
    std::vector<double> thresholds{0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    DelayBounds delays;
    std::uint64_t seed = 7;
    unsigned threads = 1;
    MatcherConfig matcher;
    CentralityOptions centrality;
    bool debug_matches = false;
    FixtureSpec fixture;

    /// Range checks; throws ValidationError before any work starts.
    void validate() const;

    /// Canonical JSON. Paths are written as given; the output directory and
    /// thread count are excluded since they do not affect artifact bytes.
    nlohmann::json to_json() const;

    /// Relative paths are resolved against `base_dir`.
    static RunConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
    static RunConfig load(const std::filesystem::path& path);

    std::string hash() const;
};

enum class Stage { parse, networks, rank, risk, backtest, report };

std::string_view to_string(Stage s);
std::optional<Stage> parse_stage(std::string_view name);
const std::vector<Stage>& all_stages();

/// Runs one stage. Each stage reads the previous stage's artifacts from the
/// output directory and writes its own atomically, then records digests and
/// row counts in output_dir/manifest.json.
void run_stage(Stage stage, const RunConfig& config);

void cmd_parse(const RunConfig& config);
void cmd_networks(const RunConfig& config);
void cmd_rank(const RunConfig& config);
void cmd_risk(const RunConfig& config);
void cmd_backtest(const RunConfig& config);
void cmd_report(const RunConfig& config);

/// parse -> networks -> rank -> risk -> backtest -> report
void run_pipeline(const RunConfig& config);

/// Writes a synthetic corpus and market into `dir` plus a config.json that
/// points at it.
void cmd_fixture(const FixtureSpec& spec, const std::filesystem::path& dir);

/// Writes `content` to a temporary sibling and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace newsrisk
