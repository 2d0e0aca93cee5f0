#pragma once

#include "rgbm/estimators.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rgbm::cli {

/// Everything a subcommand needs. Defaults reproduce the base case
/// (mu 0.0231, sigma 0.15, 100,000 agents) against the bundled data.
struct RunConfig {
    std::filesystem::path shares = "data/india_shares.csv";
    std::filesystem::path mean_income = "data/india_mean_income.csv";
    std::vector<std::filesystem::path> prices = {"data/rice.csv", "data/jaggery.csv",
                                                 "data/wheat.csv", "data/gold.csv"};
    std::optional<double> mu; ///< unset: 0.0231
    double sigma = 0.15;
    SigmaPolicy sigma_policy = MeanPolicy{};
    std::size_t n_agents = 100'000;
    double dt = 1.0;
    int substeps = 1;
    std::uint64_t seed = 1;
    int window = 5;
    double zero_band = 0.005;
    std::vector<double> sigmas = {0.1, 0.15, 0.2};
    std::filesystem::path out = "out";

    std::size_t regime_agents = 1000;
    int regime_years = 65;
    std::vector<double> regime_taus = {0.1, 0.0, -0.1};
    double initial_income = 1.0;

    [[nodiscard]] double drift() const { return mu.value_or(0.0231); }
};

/// Flat `key = value` file; `#` starts a comment. Relative paths resolve
/// against the file's directory. Throws std::invalid_argument on unknown
/// keys or unparsable values.
void apply_config_file(RunConfig &config, const std::filesystem::path &path);

/// Applies one key/value pair; `base` resolves relative paths.
void apply_setting(RunConfig &config, const std::string &key, const std::string &value,
                   const std::filesystem::path &base = {});

/// Checks numeric ranges. Throws std::invalid_argument.
void validate_numbers(const RunConfig &config);

std::vector<double> parse_double_list(const std::string &text);

} // namespace rgbm::cli
