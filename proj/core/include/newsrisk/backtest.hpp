#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "newsrisk/corpus.hpp"
#include "newsrisk/riskrank.hpp"

namespace newsrisk {

struct DelayBounds {
    int first = 3;
    int last = 90;

    int count() const { return last - first + 1; }
    void validate() const;
};

/// Last price date on or before the quarter's final calendar day that falls
/// inside the quarter.
std::optional<Date> measurement_date(Quarter quarter, const PriceSeries* prices);

struct DeclineEvent {
    std::size_t company = 0;
    Quarter quarter;
    int delay_days = 0;
    std::optional<bool> decreased;
};

/// Compares the close at the measurement date with the close on the most
/// recent trading day at or before measurement + delay (calendar days). The
/// later price must come from a day after the measurement date.
DeclineEvent decline_event(const RiskDatapoint& datapoint, int delay_days, const PriceSeries* prices);

/// Outcomes per datapoint and delay: -1 undefined, 0 no decrease, 1 decrease.
struct EventTable {
    DelayBounds bounds;
    std::vector<std::vector<signed char>> outcomes;  // [datapoint][delay - first]
    std::vector<bool> valid;                         // measurement date and >= 1 defined event

    std::size_t valid_count() const;
};

EventTable compute_events(std::span<const RiskDatapoint> datapoints, const EntityUniverse& universe,
                          const PriceBook& prices, DelayBounds bounds, unsigned threads = 1);

/// Per-delay decline statistics of a datapoint subset.
struct DailyRates {
    DelayBounds bounds;
    std::vector<std::size_t> defined;
    std::vector<std::size_t> decreased;

    /// Percentage of defined events that decreased at `delay`.
    std::optional<double> rate(int delay) const;
};

DailyRates daily_rates(const EventTable& events, const std::vector<bool>& members);

enum class RiskKind { aggregated, individual };
std::string_view to_string(RiskKind k);

/// Valid datapoints whose risk of the given kind is at least t - 1e-9.
/// Threshold 0 returns every valid datapoint (the benchmark).
std::vector<bool> threshold_members(std::span<const RiskDatapoint> datapoints,
                                    const EventTable& events, RiskKind kind, double threshold);

struct RangeStat {
    int first = 0;
    int last = 0;
    double subset_rate = 0.0;     // %
    double benchmark_rate = 0.0;  // %
    double abs_diff = 0.0;        // percentage points
    double rel_diff = 0.0;        // %
    double benchmark_daily_std = 0.0;
    std::optional<double> std_outperformance;  // undefined when the std is 0

    std::string label() const;
};

/// Derived columns from the three measured quantities.
RangeStat make_range_stat(int first, int last, double subset_rate, double benchmark_rate,
                          double benchmark_daily_std);

/// Mean daily rates over [first, last] for subset and benchmark, with the
/// population standard deviation of the benchmark's daily rates. Undefined when
/// either side has no defined events in the range.
std::optional<RangeStat> range_stat(const DailyRates& subset, const DailyRates& benchmark,
                                    int first, int last);

struct DelayRange {
    int first;
    int last;
};

/// 3-90, 3-45, 45-90, then ten-day buckets 3-10, 11-20, ..., 81-90.
std::vector<DelayRange> standard_ranges();

struct Table2Row {
    DelayRange range;
    std::optional<RangeStat> stat;
};

struct Table2 {
    double threshold = 1.0;
    RiskKind kind = RiskKind::aggregated;
    std::vector<Table2Row> rows;
    std::optional<RangeStat> average;  // column-wise mean over every defined row
    std::vector<std::string> omitted;  // labels of rows without defined events
};

Table2 build_table2(const DailyRates& subset, const DailyRates& benchmark, double threshold,
                    RiskKind kind = RiskKind::aggregated);

struct Table3Row {
    DelayRange range;
    std::optional<RangeStat> aggregated;
    std::optional<RangeStat> individual;
    std::optional<double> agg_outperformance;  // agg std outperf - ind std outperf
};

struct Table3 {
    double threshold = 1.0;
    std::vector<Table3Row> rows;
    std::optional<Table3Row> average;
};

Table3 build_table3(const DailyRates& aggregated, const DailyRates& individual,
                    const DailyRates& benchmark, double threshold);

struct BestDelay {
    int delay = 0;
    double diff = 0.0;  // percentage points
    double subset_rate = 0.0;
    double benchmark_rate = 0.0;
};

/// Single delay maximising subset rate minus benchmark rate; ties go to the
/// smallest delay.
std::optional<BestDelay> best_single_delay(const DailyRates& subset, const DailyRates& benchmark);

/// sqrt(p1(1-p1)/n1 + p2(1-p2)/n2) with rates as fractions.
double proportion_stderr(double p1, double n1, double p2, double n2);

struct HistogramBin {
    double edge = 0.0;
    std::size_t aggregated = 0;
    std::size_t individual = 0;
    double aggregated_pct = 0.0;
    double individual_pct = 0.0;
};

/// Counts of datapoints with risk >= edge for edges 0.0, 0.1, ..., 1.0.
std::vector<HistogramBin> risk_histogram(std::span<const RiskDatapoint> datapoints);

}  // namespace newsrisk
