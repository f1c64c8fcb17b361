#include "newsrisk/quarter.hpp"

#include <charconv>
#include <fmt/format.h>

#include "newsrisk/error.hpp"

namespace newsrisk {

namespace chr = std::chrono;

namespace {

int parse_int(std::string_view text, std::string_view whole) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw ValidationError(fmt::format("invalid number '{}' in '{}'", text, whole));
    }
    return value;
}

Date make_date(int y, int m, int d, std::string_view whole) {
    chr::year_month_day ymd{chr::year{y}, chr::month{static_cast<unsigned>(m)},
                            chr::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) {
        throw ValidationError(fmt::format("invalid calendar date '{}'", whole));
    }
    return Date{ymd};
}

}  // namespace

Date Quarter::first_day() const {
    return Date{chr::year{year} / chr::month{static_cast<unsigned>(3 * index - 2)} / 1};
}

Date Quarter::last_day() const {
    return Date{chr::year{year} / chr::month{static_cast<unsigned>(3 * index)} / chr::last};
}

Quarter Quarter::next() const {
    return index == 4 ? Quarter{year + 1, 1} : Quarter{year, index + 1};
}

std::string Quarter::label() const { return fmt::format("{:04d}Q{}", year, index); }

Quarter Quarter::parse(std::string_view label) {
    if (label.size() != 6 || (label[4] != 'Q' && label[4] != 'q')) {
        throw ValidationError(fmt::format("invalid quarter label '{}' (expected YYYYQn)", label));
    }
    int y = parse_int(label.substr(0, 4), label);
    int n = parse_int(label.substr(5, 1), label);
    if (n < 1 || n > 4) {
        throw ValidationError(fmt::format("invalid quarter index in '{}'", label));
    }
    return Quarter{y, n};
}

Quarter quarter_of(Date d) {
    chr::year_month_day ymd{d};
    unsigned m = static_cast<unsigned>(ymd.month());
    return Quarter{static_cast<int>(ymd.year()), static_cast<int>((m - 1) / 3 + 1)};
}

Quarter quarter_of(Timestamp ts) { return quarter_of(chr::floor<chr::days>(ts)); }

Date parse_date(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        throw ValidationError(fmt::format("invalid date '{}' (expected YYYY-MM-DD)", text));
    }
    return make_date(parse_int(text.substr(0, 4), text), parse_int(text.substr(5, 2), text),
                     parse_int(text.substr(8, 2), text), text);
}

std::string format_date(Date d) {
    chr::year_month_day ymd{d};
    return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(ymd.year()),
                       static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
}

Timestamp parse_timestamp(std::string_view text) {
    if (text.size() < 10) {
        throw ValidationError(fmt::format("invalid timestamp '{}'", text));
    }
    Date day = parse_date(text.substr(0, 10));
    Timestamp ts{day};
    std::string_view rest = text.substr(10);
    if (rest.empty()) {
        return ts;
    }
    if (rest[0] != 'T' && rest[0] != 't' && rest[0] != ' ') {
        throw ValidationError(fmt::format("invalid timestamp '{}'", text));
    }
    rest.remove_prefix(1);
    if (rest.size() < 5 || rest[2] != ':') {
        throw ValidationError(fmt::format("invalid time of day in '{}'", text));
    }
    int hh = parse_int(rest.substr(0, 2), text);
    int mm = parse_int(rest.substr(3, 2), text);
    int ss = 0;
    rest.remove_prefix(5);
    if (!rest.empty() && rest[0] == ':') {
        if (rest.size() < 3) {
            throw ValidationError(fmt::format("invalid seconds in '{}'", text));
        }
        ss = parse_int(rest.substr(1, 2), text);
        rest.remove_prefix(3);
        if (!rest.empty() && rest[0] == '.') {
            std::size_t n = 1;
            while (n < rest.size() && rest[n] >= '0' && rest[n] <= '9') ++n;
            if (n == 1) {
                throw ValidationError(fmt::format("invalid fractional seconds in '{}'", text));
            }
            rest.remove_prefix(n);  // sub-second precision is dropped
        }
    }
    if (hh > 23 || mm > 59 || ss > 60) {
        throw ValidationError(fmt::format("time of day out of range in '{}'", text));
    }
    ts += chr::hours{hh} + chr::minutes{mm} + chr::seconds{ss};
    if (rest.empty() || rest == "Z" || rest == "z") {
        return ts;
    }
    if ((rest[0] == '+' || rest[0] == '-') && rest.size() == 6 && rest[3] == ':') {
        int oh = parse_int(rest.substr(1, 2), text);
        int om = parse_int(rest.substr(4, 2), text);
        auto offset = chr::hours{oh} + chr::minutes{om};
        return rest[0] == '+' ? ts - offset : ts + offset;
    }
    throw ValidationError(fmt::format("invalid UTC offset in '{}'", text));
}

std::string format_timestamp(Timestamp ts) {
    auto day = chr::floor<chr::days>(ts);
    chr::hh_mm_ss tod{ts - day};
    return fmt::format("{}T{:02d}:{:02d}:{:02d}Z", format_date(day), tod.hours().count(),
                       tod.minutes().count(), tod.seconds().count());
}

}  // namespace newsrisk
