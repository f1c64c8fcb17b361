// newsrisk: staged pipeline from a labelled news corpus to a price-decline backtest.
//
//   newsrisk fixture --output DIR [--seed N ...]
//   newsrisk {parse|networks|rank|risk|backtest|report|run} --config PATH [overrides]
//
// Exit status: 0 success, 1 invalid input or configuration, 2 missing upstream stage.

#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "newsrisk/error.hpp"
#include "newsrisk/pipeline.hpp"

namespace {

using namespace newsrisk;

struct Overrides {
    std::string config;
    std::string output;
    std::optional<double> alpha, lambda, mu, theta;
    std::optional<std::uint64_t> seed;
    std::string quarters;
    std::optional<unsigned> threads;
};

void add_run_options(CLI::App& cmd, Overrides& o) {
    cmd.add_option("--config", o.config, "Run configuration (JSON)")->required();
    cmd.add_option("--output", o.output, "Output directory (overrides the config)");
    cmd.add_option("--alpha", o.alpha, "Smoothing constant added to every edge");
    cmd.add_option("--lambda", o.lambda, "Weight passed from a company to its neighbourhood");
    cmd.add_option("--mu", o.mu, "Share of neighbourhood weight for two-hop nodes");
    cmd.add_option("--theta", o.theta, "Interaction strength");
    cmd.add_option("--seed", o.seed, "Random seed");
    cmd.add_option("--quarters", o.quarters, "Analysis window, e.g. 2011Q1..2016Q2");
    cmd.add_option("--threads", o.threads, "Worker threads");
}

RunConfig make_config(const Overrides& o) {
    RunConfig c = RunConfig::load(o.config);
    if (!o.output.empty()) c.output_dir = std::filesystem::absolute(o.output);
    if (o.alpha) c.alpha = *o.alpha;
    if (o.lambda) c.calibration.lambda = *o.lambda;
    if (o.mu) c.calibration.mu = *o.mu;
    if (o.theta) c.calibration.theta = *o.theta;
    if (o.seed) c.seed = *o.seed;
    if (o.threads) c.threads = *o.threads;
    if (!o.quarters.empty()) {
        const auto sep = o.quarters.find("..");
        if (sep == std::string::npos) {
            throw ValidationError(fmt::format("--quarters expects FROM..TO, got '{}'", o.quarters));
        }
        c.window.first = Quarter::parse(o.quarters.substr(0, sep));
        c.window.last = Quarter::parse(o.quarters.substr(sep + 2));
    }
    c.validate();
    return c;
}

void setup_logging(const std::string& level) {
    auto logger = spdlog::stderr_logger_mt("newsrisk");
    logger->set_pattern("ts=%Y-%m-%dT%H:%M:%S.%eZ level=%l %v", spdlog::pattern_time_type::utc);
    const auto lvl = spdlog::level::from_str(level);
    if (lvl == spdlog::level::off && level != "off") {
        throw ValidationError(fmt::format("unknown log level '{}'", level));
    }
    logger->set_level(lvl);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"News co-occurrence risk pipeline"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string log_level = "info";
    app.add_option("--log-level", log_level, "trace, debug, info, warn, error or off");

    FixtureSpec spec;
    std::string fixture_dir;
    std::string first_quarter;
    auto* fixture = app.add_subcommand("fixture", "Generate a synthetic corpus, universe and prices");
    fixture->add_option("--output", fixture_dir, "Directory to write")->required();
    fixture->add_option("--seed", spec.seed, "Random seed");
    fixture->add_option("--companies", spec.companies, "Number of companies");
    fixture->add_option("--quarters", spec.quarters, "Number of quarters");
    fixture->add_option("--first-quarter", first_quarter, "First quarter, e.g. 2014Q1");
    fixture->add_option("--articles", spec.articles, "Number of articles");
    fixture->add_option("--drift", spec.drift, "Planted log-return dip for all-negative company-quarters");
    fixture->add_option("--drift-window", spec.drift_window_days, "Days over which the dip builds");
    fixture->add_option("--drift-onset", spec.drift_onset_days, "Days after measurement before the dip starts");
    bool step = false;
    fixture->add_flag("--step-drift", step, "Hold the full dip for the window instead of ramping");
    fixture->add_option("--daily-noise", spec.daily_noise, "Std of iid daily log-price noise");
    fixture->add_option("--walk-volatility", spec.walk_volatility, "Std of daily random-walk steps");
    fixture->add_flag("--weekend-trading", spec.weekend_trading, "Quote prices on every calendar day");
    fixture->add_option("--negative-state-share", spec.negative_state_share,
                        "Share of company-quarters in a negative news state");
    fixture->add_option("--negative-article-share", spec.negative_article_share,
                        "Share of negative articles");
    fixture->add_option("--cross-mention-rate", spec.cross_mention_rate,
                        "Chance a negative article also names a positive-state company");

    Overrides overrides;
    std::vector<std::pair<CLI::App*, std::optional<Stage>>> commands;
    for (Stage s : all_stages()) {
        auto* cmd = app.add_subcommand(std::string(to_string(s)),
                                       fmt::format("Run the {} stage", to_string(s)));
        add_run_options(*cmd, overrides);
        commands.emplace_back(cmd, s);
    }
    auto* run = app.add_subcommand("run", "Run every stage in order");
    add_run_options(*run, overrides);
    commands.emplace_back(run, std::nullopt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        setup_logging(log_level);
        if (fixture->parsed()) {
            if (!first_quarter.empty()) spec.first_quarter = Quarter::parse(first_quarter);
            if (step) spec.drift_shape = FixtureSpec::DriftShape::step;
            cmd_fixture(spec, fixture_dir);
            return 0;
        }
        for (auto& [cmd, stage] : commands) {
            if (!cmd->parsed()) continue;
            const RunConfig config = make_config(overrides);
            spdlog::get("newsrisk")->info("event=config hash={} output={}", config.hash(),
                                          config.output_dir.string());
            if (stage) {
                run_stage(*stage, config);
            } else {
                run_pipeline(config);
            }
        }
        return 0;
    } catch (const DependencyError& e) {
        std::fprintf(stderr, "error: %s\nrun `%s` first\n", e.what(), e.required_command().c_str());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
