#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace newsrisk::tsv {

// Tab-separated tables with a single header row. Fields may not contain tabs
// or newlines; writers reject such values instead of quoting them.

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;  // 1-based source line per row

    /// Column index by name; throws ValidationError naming `context` if absent.
    std::size_t column(std::string_view name, std::string_view context) const;
};

Table read(const std::filesystem::path& path);
Table parse(std::string_view text, std::string_view context);

std::vector<std::string> split(std::string_view line, char sep);

class Writer {
public:
    explicit Writer(std::vector<std::string> header);

    void row(const std::vector<std::string>& fields);
    std::size_t row_count() const noexcept { return rows_; }
    const std::string& str() const noexcept { return buffer_; }

private:
    std::size_t columns_;
    std::size_t rows_ = 0;
    std::string buffer_;
};

/// Fixed-precision decimal rendering used by every exported table.
std::string fmt_real(double v, int precision = 10);

}  // namespace newsrisk::tsv
