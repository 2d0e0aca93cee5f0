#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace rgbm::csv {

struct Table {
    std::vector<std::string> header;
    /// Data rows paired with their 1-based line number in the file.
    std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;

    /// Column index by name, or -1.
    [[nodiscard]] int column(std::string_view name) const;
};

/// Reads a comma-separated file with a header row. Blank lines are skipped,
/// fields are trimmed; quoting is not supported.
Table read_file(const std::filesystem::path &path);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);
/// Strict decimal parse of a whole field.
bool parse_double(std::string_view text, double &out);
bool parse_int(std::string_view text, int &out);

/// Writes `content` to `path` via a sibling temp file and rename.
void write_atomic(const std::filesystem::path &path, std::string_view content);

} // namespace rgbm::csv
