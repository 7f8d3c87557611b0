#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace sae::csv {

/// A parsed delimited file: header row plus data rows, whitespace-trimmed.
/// The schemas handled here are plain comma-separated text without quoting.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;  // row numbers start at 2 (header is line 1)

    /// Column position of `name`, or -1 when absent.
    int column(std::string_view name) const;
};

Table read_file(const std::string& path);
std::vector<std::string> split_line(std::string_view line);

/// Writes content to `path` via a temporary file and rename, so readers never
/// observe a partial file.
void write_atomic(const std::string& path, const std::string& content);

std::string read_whole_file(const std::string& path);

/// Strict numeric parsing; `context` names the file/row for error messages.
double parse_double(std::string_view token, const std::string& context);
long parse_long(std::string_view token, const std::string& context);

}  // namespace sae::csv
