#include "newsrisk/tsv.hpp"

#include <cmath>
#include <fmt/format.h>

#include "newsrisk/corpus.hpp"
#include "newsrisk/error.hpp"

namespace newsrisk::tsv {

std::vector<std::string> split(std::string_view line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(line.substr(start));
            return out;
        }
        out.emplace_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::size_t Table::column(std::string_view name, std::string_view context) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw ValidationError(fmt::format("{}: missing column '{}'", context, name));
}

Table parse(std::string_view text, std::string_view context) {
    Table table;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    bool have_header = false;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        auto fields = split(line, '\t');
        if (!have_header) {
            table.header = std::move(fields);
            have_header = true;
            continue;
        }
        if (fields.size() != table.header.size()) {
            throw ValidationError(fmt::format("{}:{}: expected {} fields, found {}", context,
                                              line_no, table.header.size(), fields.size()));
        }
        table.rows.push_back(std::move(fields));
        table.line_numbers.push_back(line_no);
    }
    if (!have_header) {
        throw ValidationError(fmt::format("{}: empty table (no header row)", context));
    }
    return table;
}

Table read(const std::filesystem::path& path) { return parse(read_file(path), path.string()); }

Writer::Writer(std::vector<std::string> header) : columns_(header.size()) {
    row(header);
    rows_ = 0;
}

void Writer::row(const std::vector<std::string>& fields) {
    if (fields.size() != columns_) {
        throw ValidationError(
            fmt::format("table row has {} fields, expected {}", fields.size(), columns_));
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (fields[i].find_first_of("\t\n\r") != std::string::npos) {
            throw ValidationError(fmt::format("field '{}' contains a tab or newline", fields[i]));
        }
        if (i) buffer_.push_back('\t');
        buffer_ += fields[i];
    }
    buffer_.push_back('\n');
    ++rows_;
}

std::string fmt_real(double v, int precision) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::string s = fmt::format("{:.{}f}", v, precision);
    if (s.find_first_not_of("-0.") == std::string::npos) {
        return fmt::format("{:.{}f}", 0.0, precision);  // no negative zero
    }
    return s;
}

}  // namespace newsrisk::tsv
