#include "newsrisk/backtest.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "newsrisk/error.hpp"
#include "newsrisk/parallel.hpp"

namespace newsrisk {

namespace {

constexpr double kThresholdSlack = 1e-9;

double risk_of(const RiskDatapoint& dp, RiskKind kind) {
    return kind == RiskKind::aggregated ? dp.risk.rr_total : dp.x_own;
}

}  // namespace

void DelayBounds::validate() const {
    if (first < 1 || last < first) {
        throw ValidationError(fmt::format("invalid delay bounds [{}, {}]", first, last));
    }
}

std::optional<Date> measurement_date(Quarter quarter, const PriceSeries* prices) {
    if (!prices) return std::nullopt;
    auto idx = prices->last_on_or_before(quarter.last_day());
    if (!idx) return std::nullopt;
    const Date d = prices->dates[*idx];
    if (d < quarter.first_day()) return std::nullopt;
    return d;
}

namespace {

std::optional<bool> decreased_at(const PriceSeries& s, std::size_t base, int delay) {
    const Date target = s.dates[base] + std::chrono::days{delay};
    auto idx = s.last_on_or_before(target);
    if (!idx || *idx <= base) return std::nullopt;
    if (target > s.dates.back()) return std::nullopt;  // no data that far out
    return s.closes[*idx] < s.closes[base];
}

}  // namespace

DeclineEvent decline_event(const RiskDatapoint& datapoint, int delay_days, const PriceSeries* prices) {
    DeclineEvent ev{datapoint.company, datapoint.quarter, delay_days, std::nullopt};
    auto m = measurement_date(datapoint.quarter, prices);
    if (!m) return ev;
    auto base = prices->last_on_or_before(*m);
    ev.decreased = decreased_at(*prices, *base, delay_days);
    return ev;
}

std::size_t EventTable::valid_count() const {
    return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), true));
}

EventTable compute_events(std::span<const RiskDatapoint> datapoints, const EntityUniverse& universe,
                          const PriceBook& prices, DelayBounds bounds, unsigned threads) {
    bounds.validate();
    EventTable table;
    table.bounds = bounds;
    table.outcomes.assign(datapoints.size(), std::vector<signed char>(bounds.count(), -1));
    std::vector<char> valid(datapoints.size(), 0);
    parallel_for(datapoints.size(), threads, [&](std::size_t i) {
        const auto& dp = datapoints[i];
        const auto* series = prices.find(universe[dp.company].canonical_id);
        auto m = measurement_date(dp.quarter, series);
        if (!m) return;
        const auto base = *series->last_on_or_before(*m);
        for (int d = bounds.first; d <= bounds.last; ++d) {
            if (auto dec = decreased_at(*series, base, d)) {
                table.outcomes[i][d - bounds.first] = *dec ? 1 : 0;
                valid[i] = 1;
            }
        }
    });
    table.valid.assign(valid.begin(), valid.end());
    return table;
}

std::optional<double> DailyRates::rate(int delay) const {
    if (delay < bounds.first || delay > bounds.last) return std::nullopt;
    const auto k = static_cast<std::size_t>(delay - bounds.first);
    if (defined[k] == 0) return std::nullopt;
    return 100.0 * static_cast<double>(decreased[k]) / static_cast<double>(defined[k]);
}

DailyRates daily_rates(const EventTable& events, const std::vector<bool>& members) {
    DailyRates r;
    r.bounds = events.bounds;
    r.defined.assign(events.bounds.count(), 0);
    r.decreased.assign(events.bounds.count(), 0);
    for (std::size_t i = 0; i < events.outcomes.size(); ++i) {
        if (i >= members.size() || !members[i]) continue;
        for (std::size_t k = 0; k < events.outcomes[i].size(); ++k) {
            const auto o = events.outcomes[i][k];
            if (o < 0) continue;
            ++r.defined[k];
            if (o == 1) ++r.decreased[k];
        }
    }
    return r;
}

std::string_view to_string(RiskKind k) {
    return k == RiskKind::aggregated ? "aggregated" : "individual";
}

std::vector<bool> threshold_members(std::span<const RiskDatapoint> datapoints,
                                    const EventTable& events, RiskKind kind, double threshold) {
    std::vector<bool> members(datapoints.size(), false);
    for (std::size_t i = 0; i < datapoints.size(); ++i) {
        members[i] = events.valid.at(i) && risk_of(datapoints[i], kind) >= threshold - kThresholdSlack;
    }
    return members;
}

std::string RangeStat::label() const { return fmt::format("{} to {}", first, last); }

RangeStat make_range_stat(int first, int last, double subset_rate, double benchmark_rate,
                          double benchmark_daily_std) {
    RangeStat s;
    s.first = first;
    s.last = last;
    s.subset_rate = subset_rate;
    s.benchmark_rate = benchmark_rate;
    s.abs_diff = subset_rate - benchmark_rate;
    s.rel_diff = benchmark_rate != 0.0 ? 100.0 * s.abs_diff / benchmark_rate : 0.0;
    s.benchmark_daily_std = benchmark_daily_std;
    if (benchmark_daily_std > 0.0) {
        s.std_outperformance = s.abs_diff / benchmark_daily_std;
    } else if (s.abs_diff == 0.0) {
        s.std_outperformance = 0.0;
    }
    return s;
}

std::optional<RangeStat> range_stat(const DailyRates& subset, const DailyRates& benchmark,
                                    int first, int last) {
    double sub_sum = 0.0, bench_sum = 0.0;
    std::size_t sub_n = 0;
    std::vector<double> bench_rates;
    for (int d = first; d <= last; ++d) {
        if (auto r = subset.rate(d)) {
            sub_sum += *r;
            ++sub_n;
        }
        if (auto r = benchmark.rate(d)) {
            bench_sum += *r;
            bench_rates.push_back(*r);
        }
    }
    if (sub_n == 0 || bench_rates.empty()) return std::nullopt;
    const double bench_mean = bench_sum / static_cast<double>(bench_rates.size());
    double var = 0.0;
    for (double r : bench_rates) var += (r - bench_mean) * (r - bench_mean);
    var /= static_cast<double>(bench_rates.size());
    return make_range_stat(first, last, sub_sum / static_cast<double>(sub_n), bench_mean,
                           std::sqrt(var));
}

std::vector<DelayRange> standard_ranges() {
    std::vector<DelayRange> r{{3, 90}, {3, 45}, {45, 90}, {3, 10}};
    for (int start = 11; start <= 81; start += 10) r.push_back({start, start + 9});
    return r;
}

namespace {

std::optional<RangeStat> mean_row(const std::vector<const RangeStat*>& rows) {
    if (rows.empty()) return std::nullopt;
    RangeStat avg;
    avg.first = rows.front()->first;
    avg.last = rows.front()->last;
    double n = static_cast<double>(rows.size());
    double out_sum = 0.0;
    std::size_t out_n = 0;
    for (const auto* r : rows) {
        avg.subset_rate += r->subset_rate / n;
        avg.benchmark_rate += r->benchmark_rate / n;
        avg.abs_diff += r->abs_diff / n;
        avg.rel_diff += r->rel_diff / n;
        avg.benchmark_daily_std += r->benchmark_daily_std / n;
        if (r->std_outperformance) {
            out_sum += *r->std_outperformance;
            ++out_n;
        }
    }
    if (out_n) avg.std_outperformance = out_sum / static_cast<double>(out_n);
    return avg;
}

}  // namespace

Table2 build_table2(const DailyRates& subset, const DailyRates& benchmark, double threshold,
                    RiskKind kind) {
    Table2 t;
    t.threshold = threshold;
    t.kind = kind;
    std::vector<const RangeStat*> defined;
    for (auto range : standard_ranges()) {
        t.rows.push_back({range, range_stat(subset, benchmark, range.first, range.last)});
    }
    for (const auto& row : t.rows) {
        if (row.stat) {
            defined.push_back(&*row.stat);
        } else {
            t.omitted.push_back(fmt::format("{} to {}", row.range.first, row.range.last));
        }
    }
    t.average = mean_row(defined);
    return t;
}

Table3 build_table3(const DailyRates& aggregated, const DailyRates& individual,
                    const DailyRates& benchmark, double threshold) {
    Table3 t;
    t.threshold = threshold;
    std::vector<const RangeStat*> agg_rows, ind_rows;
    double outperf_sum = 0.0;
    std::size_t outperf_n = 0;
    for (auto range : standard_ranges()) {
        Table3Row row{range, range_stat(aggregated, benchmark, range.first, range.last),
                      range_stat(individual, benchmark, range.first, range.last), std::nullopt};
        if (row.aggregated && row.individual && row.aggregated->std_outperformance &&
            row.individual->std_outperformance) {
            row.agg_outperformance =
                *row.aggregated->std_outperformance - *row.individual->std_outperformance;
        }
        t.rows.push_back(std::move(row));
    }
    for (const auto& row : t.rows) {
        if (row.aggregated) agg_rows.push_back(&*row.aggregated);
        if (row.individual) ind_rows.push_back(&*row.individual);
        if (row.agg_outperformance) {
            outperf_sum += *row.agg_outperformance;
            ++outperf_n;
        }
    }
    Table3Row avg{{standard_ranges().front()}, mean_row(agg_rows), mean_row(ind_rows), std::nullopt};
    if (outperf_n) avg.agg_outperformance = outperf_sum / static_cast<double>(outperf_n);
    t.average = avg;
    return t;
}

std::optional<BestDelay> best_single_delay(const DailyRates& subset, const DailyRates& benchmark) {
    std::optional<BestDelay> best;
    for (int d = subset.bounds.first; d <= subset.bounds.last; ++d) {
        auto s = subset.rate(d);
        auto b = benchmark.rate(d);
        if (!s || !b) continue;
        const double diff = *s - *b;
        if (!best || diff > best->diff) best = BestDelay{d, diff, *s, *b};
    }
    return best;
}

double proportion_stderr(double p1, double n1, double p2, double n2) {
    if (!(n1 > 0.0) || !(n2 > 0.0)) {
        throw ValidationError("proportion_stderr: sample sizes must be positive");
    }
    return std::sqrt(p1 * (1.0 - p1) / n1 + p2 * (1.0 - p2) / n2);
}

std::vector<HistogramBin> risk_histogram(std::span<const RiskDatapoint> datapoints) {
    std::vector<HistogramBin> bins;
    const double total = static_cast<double>(datapoints.size());
    for (int k = 0; k <= 10; ++k) {
        HistogramBin bin;
        bin.edge = k / 10.0;
        for (const auto& dp : datapoints) {
            if (dp.risk.rr_total >= bin.edge - kThresholdSlack) ++bin.aggregated;
            if (dp.x_own >= bin.edge - kThresholdSlack) ++bin.individual;
        }
        if (total > 0) {
            bin.aggregated_pct = 100.0 * static_cast<double>(bin.aggregated) / total;
            bin.individual_pct = 100.0 * static_cast<double>(bin.individual) / total;
        }
        bins.push_back(bin);
    }
    return bins;
}

}  // namespace newsrisk
