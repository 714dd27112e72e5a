#include "recnet/csv.hpp"

#include "recnet/error.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

namespace recnet::csv {

namespace {

std::vector<std::string> split_line(std::string_view line, const std::string& source, std::size_t lineno) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cell.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            cells.push_back(std::move(cell));
            cell.clear();
        } else {
            cell.push_back(c);
        }
    }
    if (quoted) {
        throw DataError(source + ":" + std::to_string(lineno) + ": unterminated quoted cell");
    }
    cells.push_back(std::move(cell));
    return cells;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

}  // namespace

std::size_t Table::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw DataError("missing column '" + std::string(name) + "'");
}

bool Table::has_column(std::string_view name) const {
    for (const auto& h : header) {
        if (h == name) return true;
    }
    return false;
}

Table parse(std::string_view text, const std::string& source_name) {
    Table table;
    bool have_header = false;
    std::size_t lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = text.find('\n', pos);
        const std::string_view raw = text.substr(pos, end == std::string_view::npos ? text.size() - pos : end - pos);
        pos = (end == std::string_view::npos) ? text.size() + 1 : end + 1;
        ++lineno;
        const std::string_view line = trim(raw);
        if (line.empty()) continue;
        auto cells = split_line(line, source_name, lineno);
        for (auto& c : cells) c = std::string(trim(c));
        if (!have_header) {
            if (!cells.empty() && cells[0].starts_with("\xEF\xBB\xBF")) cells[0].erase(0, 3);
            table.header = std::move(cells);
            have_header = true;
            continue;
        }
        if (cells.size() != table.header.size()) {
            throw DataError(source_name + ":" + std::to_string(lineno) + ": expected " +
                            std::to_string(table.header.size()) + " cells, found " + std::to_string(cells.size()));
        }
        table.rows.push_back(std::move(cells));
        table.lines.push_back(lineno);
    }
    if (!have_header) throw DataError(source_name + ": empty file (no header row)");
    return table;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("read failed: " + path.string());
    return buf.str();
}

Table read_file(const std::filesystem::path& path) {
    return parse(read_text(path), path.string());
}

std::string escape(std::string_view cell) {
    if (cell.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(cell);
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

double to_double(const std::string& cell, const std::string& what) {
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    if (!cell.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || cell.empty()) {
        throw DataError(what + ": not a number: '" + cell + "'");
    }
    return value;
}

long long to_integer(const std::string& cell, const std::string& what) {
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc{} || ptr != cell.data() + cell.size() || cell.empty()) {
        throw DataError(what + ": not an integer: '" + cell + "'");
    }
    return value;
}

void write_atomic(const std::filesystem::path& path, std::string_view contents) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out) throw IoError("write failed: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot rename onto " + path.string());
    }
}

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

}  // namespace recnet::csv
