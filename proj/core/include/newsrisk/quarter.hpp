#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace newsrisk {

using Date = std::chrono::sys_days;
using Timestamp = std::chrono::sys_seconds;

/// A calendar quarter in UTC. Ordered by (year, index).
struct Quarter {
    int year = 1970;
    int index = 1;  // 1..4

    auto operator<=>(const Quarter&) const = default;

    Date first_day() const;
    Date last_day() const;
    Quarter next() const;

    /// "2016Q2"
    std::string label() const;
    static Quarter parse(std::string_view label);
};

Quarter quarter_of(Timestamp ts);
Quarter quarter_of(Date d);

/// Parses ISO-8601 timestamps: "YYYY-MM-DD", "YYYY-MM-DDThh:mm[:ss[.fff]]" with
/// optional "Z" or "+hh:mm"/"-hh:mm" offset. Offsets are folded into UTC.
Timestamp parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp ts);

Date parse_date(std::string_view text);
std::string format_date(Date d);

}  // namespace newsrisk

template <>
struct std::hash<newsrisk::Quarter> {
    std::size_t operator()(const newsrisk::Quarter& q) const noexcept {
        return std::hash<int>{}(q.year * 4 + q.index);
    }
};
