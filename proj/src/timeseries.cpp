#include "rgbm/timeseries.hpp"

#include "rgbm/csv_util.hpp"
#include "rgbm/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace rgbm {

namespace {

std::string describe(std::optional<std::size_t> line, const std::string &column) {
    std::string out;
    if (line) {
        out += "line " + std::to_string(*line);
    }
    if (!column.empty()) {
        out += (out.empty() ? "column " : ", column ") + column;
    }
    return out;
}

std::size_t require_column(const csv::Table &table, const std::string &path,
                           const std::string &name) {
    int idx = table.column(name);
    if (idx < 0) {
        throw IngestError(IngestErrorKind::MissingColumn, path, 1, name,
                          "header does not name column '" + name + "'");
    }
    return static_cast<std::size_t>(idx);
}

const std::string &field(const std::vector<std::string> &row, std::size_t idx,
                         const std::string &path, std::size_t line, const std::string &name) {
    if (idx >= row.size()) {
        throw IngestError(IngestErrorKind::MissingColumn, path, line, name, "row is too short");
    }
    return row[idx];
}

double read_double(const std::vector<std::string> &row, std::size_t idx, const std::string &path,
                   std::size_t line, const std::string &name) {
    double v = 0.0;
    if (!csv::parse_double(field(row, idx, path, line, name), v)) {
        throw IngestError(IngestErrorKind::MalformedValue, path, line, name,
                          "not a decimal number: '" + row[idx] + "'");
    }
    return v;
}

int read_year(const std::vector<std::string> &row, std::size_t idx, const std::string &path,
              std::size_t line) {
    int v = 0;
    if (!csv::parse_int(field(row, idx, path, line, "year"), v)) {
        throw IngestError(IngestErrorKind::MalformedValue, path, line, "year",
                          "not an integer year: '" + row[idx] + "'");
    }
    return v;
}

/// Permutation that sorts `keys` ascending; stable so duplicate reporting
/// names the later of two equal rows.
template <typename Key> std::vector<std::size_t> sort_order(const std::vector<Key> &keys) {
    std::vector<std::size_t> order(keys.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
    return order;
}

void check_share(double v, const std::string &path, std::size_t line, const std::string &col) {
    if (!(v > 0.0 && v < 1.0)) {
        throw IngestError(IngestErrorKind::ShareOutOfRange, path, line, col,
                          "share " + csv::format_double(v) + " outside (0, 1)");
    }
}

} // namespace

IngestError::IngestError(IngestErrorKind kind, std::string path, std::optional<std::size_t> line,
                         std::string column, const std::string &detail)
    : Error(path + (line || !column.empty() ? " (" + describe(line, column) + ")" : "") + ": " +
            detail),
      kind_{kind}, path_{std::move(path)}, line_{line}, column_{std::move(column)} {}

bool ShareSeries::is_consecutive() const noexcept {
    for (std::size_t i = 1; i < years.size(); ++i) {
        if (years[i] != years[i - 1] + 1) {
            return false;
        }
    }
    return true;
}

std::optional<std::size_t> ShareSeries::index_of(int year) const noexcept {
    auto it = std::lower_bound(years.begin(), years.end(), year);
    if (it == years.end() || *it != year) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - years.begin());
}

ShareSeries load_share_series(const std::filesystem::path &file) {
    const std::string path = file.string();
    auto table = csv::read_file(file);
    auto year_col = require_column(table, path, "year");
    auto s50_col = require_column(table, path, "s50");
    int s10_col = table.column("s10_top");
    int s1_col = table.column("s1_top");
    if ((s10_col < 0) != (s1_col < 0)) {
        throw IngestError(IngestErrorKind::MissingColumn, path, 1, s10_col < 0 ? "s10_top" : "s1_top",
                          "top-share columns must appear together");
    }
    const bool has_top = s10_col >= 0;

    struct Row {
        std::size_t line;
        int year;
        double s50, s10, s1;
    };
    std::vector<Row> rows;
    for (const auto &[line, fields] : table.rows) {
        Row r{line, read_year(fields, year_col, path, line), 0.0, 0.0, 0.0};
        r.s50 = read_double(fields, s50_col, path, line, "s50");
        check_share(r.s50, path, line, "s50");
        if (has_top) {
            r.s10 = read_double(fields, static_cast<std::size_t>(s10_col), path, line, "s10_top");
            r.s1 = read_double(fields, static_cast<std::size_t>(s1_col), path, line, "s1_top");
            check_share(r.s10, path, line, "s10_top");
            check_share(r.s1, path, line, "s1_top");
            if (r.s1 > r.s10) {
                throw IngestError(IngestErrorKind::ShareOutOfRange, path, line, "s1_top",
                                  "top-1% share exceeds top-10% share");
            }
        }
        rows.push_back(r);
    }

    std::vector<int> keys;
    keys.reserve(rows.size());
    for (const auto &r : rows) {
        keys.push_back(r.year);
    }
    ShareSeries out;
    if (has_top) {
        out.s10_top.emplace();
        out.s1_top.emplace();
    }
    for (auto idx : sort_order(keys)) {
        const auto &r = rows[idx];
        if (!out.years.empty() && out.years.back() == r.year) {
            throw IngestError(IngestErrorKind::NonMonotonicYears, path, r.line, "year",
                              "duplicate year " + std::to_string(r.year));
        }
        out.years.push_back(r.year);
        out.s50.push_back(r.s50);
        if (has_top) {
            out.s10_top->push_back(r.s10);
            out.s1_top->push_back(r.s1);
        }
    }
    return out;
}

MeanIncomeSeries load_mean_income_series(const std::filesystem::path &file) {
    const std::string path = file.string();
    auto table = csv::read_file(file);
    auto year_col = require_column(table, path, "year");
    auto income_col = require_column(table, path, "mean_income");

    std::vector<int> keys;
    std::vector<double> values;
    std::vector<std::size_t> lines;
    for (const auto &[line, fields] : table.rows) {
        int year = read_year(fields, year_col, path, line);
        double v = read_double(fields, income_col, path, line, "mean_income");
        if (!(v > 0.0)) {
            throw IngestError(IngestErrorKind::NonPositiveIncome, path, line, "mean_income",
                              "income must be positive, got " + fields[income_col]);
        }
        keys.push_back(year);
        values.push_back(v);
        lines.push_back(line);
    }
    MeanIncomeSeries out;
    for (auto idx : sort_order(keys)) {
        if (!out.years.empty() && out.years.back() == keys[idx]) {
            throw IngestError(IngestErrorKind::NonMonotonicYears, path, lines[idx], "year",
                              "duplicate year " + std::to_string(keys[idx]));
        }
        out.years.push_back(keys[idx]);
        out.mean_income.push_back(values[idx]);
    }
    return out;
}

PriceSeries load_price_series(const std::filesystem::path &file,
                              std::optional<std::string> commodity) {
    const std::string path = file.string();
    auto table = csv::read_file(file);
    auto date_col = require_column(table, path, "date");
    auto price_col = require_column(table, path, "price");

    std::vector<std::chrono::sys_days> keys;
    std::vector<double> values;
    std::vector<std::size_t> lines;
    for (const auto &[line, fields] : table.rows) {
        const auto &text = field(fields, date_col, path, line, "date");
        auto date = parse_iso_date(text);
        if (!date) {
            throw IngestError(IngestErrorKind::MalformedValue, path, line, "date",
                              "not an ISO-8601 date: '" + text + "'");
        }
        double v = read_double(fields, price_col, path, line, "price");
        if (!(v > 0.0)) {
            throw IngestError(IngestErrorKind::NonPositivePrice, path, line, "price",
                              "price must be positive, got " + fields[price_col]);
        }
        keys.push_back(*date);
        values.push_back(v);
        lines.push_back(line);
    }
    PriceSeries out;
    out.commodity = commodity ? *commodity : file.stem().string();
    for (auto idx : sort_order(keys)) {
        if (!out.observations.empty() && out.observations.back().date == keys[idx]) {
            throw IngestError(IngestErrorKind::NonMonotonicDates, path, lines[idx], "date",
                              "duplicate date " + format_iso_date(keys[idx]));
        }
        out.observations.push_back({keys[idx], values[idx]});
    }
    return out;
}

std::string to_csv(const ShareSeries &series) {
    std::ostringstream out;
    const bool has_top = series.s10_top && series.s1_top;
    out << (has_top ? "year,s50,s10_top,s1_top\n" : "year,s50\n");
    for (std::size_t i = 0; i < series.size(); ++i) {
        out << series.years[i] << ',' << csv::format_double(series.s50[i]);
        if (has_top) {
            out << ',' << csv::format_double((*series.s10_top)[i]) << ','
                << csv::format_double((*series.s1_top)[i]);
        }
        out << '\n';
    }
    return out.str();
}

std::string to_csv(const MeanIncomeSeries &series) {
    std::ostringstream out;
    out << "year,mean_income\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        out << series.years[i] << ',' << csv::format_double(series.mean_income[i]) << '\n';
    }
    return out.str();
}

std::string to_csv(const PriceSeries &series) {
    std::ostringstream out;
    out << "date,price\n";
    for (const auto &obs : series.observations) {
        out << format_iso_date(obs.date) << ',' << csv::format_double(obs.price) << '\n';
    }
    return out.str();
}

std::optional<std::chrono::sys_days> parse_iso_date(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        return std::nullopt;
    }
    int y = 0, m = 0, d = 0;
    if (!csv::parse_int(text.substr(0, 4), y) || !csv::parse_int(text.substr(5, 2), m) ||
        !csv::parse_int(text.substr(8, 2), d)) {
        return std::nullopt;
    }
    std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                                    std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) {
        return std::nullopt;
    }
    return std::chrono::sys_days{ymd};
}

std::string format_iso_date(std::chrono::sys_days date) {
    std::chrono::year_month_day ymd{date};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

} // namespace rgbm
