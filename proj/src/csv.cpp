#include "sae/csv.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sae/types.hpp"

namespace sae::csv {

namespace {

std::string_view trim(std::string_view s) {
    const auto* ws = " \t\r\n";
    const auto begin = s.find_first_not_of(ws);
    if (begin == std::string_view::npos) return {};
    const auto end = s.find_last_not_of(ws);
    return s.substr(begin, end - begin + 1);
}

}  // namespace

int Table::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return static_cast<int>(i);
    }
    return -1;
}

std::vector<std::string> split_line(std::string_view line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        const std::string_view field =
            comma == std::string_view::npos ? line.substr(start) : line.substr(start, comma - start);
        fields.emplace_back(trim(field));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

Table read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);
    Table table;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        if (!have_header) {
            table.header = split_line(line);
            have_header = true;
            continue;
        }
        table.rows.push_back(split_line(line));
    }
    if (!have_header) throw DataError("empty file: " + path);
    return table;
}

void write_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write file: " + tmp);
        out << content;
        if (!out) throw DataError("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

std::string read_whole_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

double parse_double(std::string_view token, const std::string& context) {
    const std::string s{trim(token)};
    if (s.empty()) throw DataError(context + ": empty numeric field");
    errno = 0;
    char* end = nullptr;
    const double value = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE)
        throw DataError(context + ": bad number '" + s + "'");
    return value;
}

long parse_long(std::string_view token, const std::string& context) {
    const std::string s{trim(token)};
    if (s.empty()) throw DataError(context + ": empty integer field");
    long value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw DataError(context + ": bad integer '" + s + "'");
    return value;
}

}  // namespace sae::csv
