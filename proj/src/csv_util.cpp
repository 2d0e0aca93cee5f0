#include "rgbm/csv_util.hpp"

#include "rgbm/errors.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

namespace rgbm::csv {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string> split_line(std::string_view line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        auto comma = line.find(',', start);
        auto field = line.substr(start, comma == std::string_view::npos ? line.size() - start
                                                                        : comma - start);
        fields.emplace_back(trim(field));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return fields;
}

} // namespace

int Table::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

Table read_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw IngestError(IngestErrorKind::FileNotFound, path.string(), std::nullopt, "",
                          "cannot open file");
    }
    Table table;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (line_no == 1 && view.size() >= 3 && view.substr(0, 3) == "\xEF\xBB\xBF") {
            view.remove_prefix(3); // UTF-8 BOM
        }
        if (trim(view).empty()) {
            continue;
        }
        if (!have_header) {
            table.header = split_line(view);
            have_header = true;
            continue;
        }
        table.rows.emplace_back(line_no, split_line(view));
    }
    return table;
}

std::string format_double(double value) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) {
        return "nan";
    }
    return {buf.data(), ptr};
}

bool parse_double(std::string_view text, double &out) {
    text = trim(text);
    if (text.empty()) {
        return false;
    }
    if (text.front() == '+') {
        text.remove_prefix(1);
    }
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

bool parse_int(std::string_view text, int &out) {
    text = trim(text);
    if (text.empty()) {
        return false;
    }
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

void write_atomic(const std::filesystem::path &path, std::string_view content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error("cannot write " + tmp.string());
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) {
            throw Error("short write to " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error("cannot rename into " + path.string());
    }
}

} // namespace rgbm::csv
