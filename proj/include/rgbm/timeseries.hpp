#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace rgbm {

/// Annual income-share fractions. `s50` is the share held by the poorest half;
/// the top-share columns are optional and carried through untouched.
struct ShareSeries {
    std::vector<int> years;
    std::vector<double> s50;
    std::optional<std::vector<double>> s10_top;
    std::optional<std::vector<double>> s1_top;

    [[nodiscard]] std::size_t size() const noexcept { return years.size(); }
    /// True when the years form one run of consecutive integers.
    [[nodiscard]] bool is_consecutive() const noexcept;
    /// Index of `year`, or nullopt if absent.
    [[nodiscard]] std::optional<std::size_t> index_of(int year) const noexcept;

    bool operator==(const ShareSeries &) const = default;
};

struct MeanIncomeSeries {
    std::vector<int> years;
    std::vector<double> mean_income;

    [[nodiscard]] std::size_t size() const noexcept { return years.size(); }
    bool operator==(const MeanIncomeSeries &) const = default;
};

struct PriceObservation {
    std::chrono::sys_days date;
    double price;

    bool operator==(const PriceObservation &) const = default;
};

struct PriceSeries {
    std::string commodity;
    std::vector<PriceObservation> observations;

    [[nodiscard]] std::size_t size() const noexcept { return observations.size(); }
    bool operator==(const PriceSeries &) const = default;
};

// Loaders sort by key before validating, so unsorted-but-unique rows are fine;
// duplicates and out-of-range values raise IngestError naming line and column.
ShareSeries load_share_series(const std::filesystem::path &path);
MeanIncomeSeries load_mean_income_series(const std::filesystem::path &path);
/// The commodity tag defaults to the file stem.
PriceSeries load_price_series(const std::filesystem::path &path,
                              std::optional<std::string> commodity = std::nullopt);

std::string to_csv(const ShareSeries &series);
std::string to_csv(const MeanIncomeSeries &series);
std::string to_csv(const PriceSeries &series);

/// Parses `YYYY-MM-DD`. Returns nullopt for anything else or an invalid date.
std::optional<std::chrono::sys_days> parse_iso_date(std::string_view text);
std::string format_iso_date(std::chrono::sys_days date);

} // namespace rgbm
