#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace recnet::csv {

/// A parsed comma-separated table. Cells are kept as text.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    /// 1-based source line of each row, for diagnostics.
    std::vector<std::size_t> lines;

    /// Column index of `name`; throws DataError if absent.
    std::size_t column(std::string_view name) const;
    bool has_column(std::string_view name) const;
};

/// Parses text with a header row. Double-quoted cells may contain commas and
/// doubled quotes. Blank lines are skipped. Every row must match the header width.
Table parse(std::string_view text, const std::string& source_name = "<memory>");

Table read_file(const std::filesystem::path& path);

/// Quotes a cell if it contains a comma, quote or newline.
std::string escape(std::string_view cell);

double to_double(const std::string& cell, const std::string& what);
long long to_integer(const std::string& cell, const std::string& what);

/// Writes `contents` to a sibling temporary file and renames it over `path`,
/// so readers never observe a truncated table.
void write_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_text(const std::filesystem::path& path);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

}  // namespace recnet::csv
