#pragma once

#include "rgbm/calibration.hpp"
#include "rgbm/engine.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace rgbm {

struct DecileShares {
    std::array<double, 10> decile{}; ///< decile[0] is the poorest tenth
    double percentile1 = 0.0;        ///< poorest hundredth
};

/// Sorts ascending and splits into ten equal blocks. Requires N divisible by
/// 100 and positive total income.
DecileShares decile_shares(std::span<const double> incomes);
DecileShares decile_shares(const Population &pop);

struct DecileShareTable {
    std::vector<int> years;
    std::vector<DecileShares> rows;

    /// `year,d1,...,d10,p1`
    [[nodiscard]] std::string to_csv() const;
    [[nodiscard]] std::optional<DecileShares> at(int year) const;
};

/// Mean over median. Throws AnalysisError(NonPositiveMedian) when the median is <= 0.
double mean_median_ratio(std::span<const double> incomes);
double mean_median_ratio(const Population &pop);

enum class Regime { Negative = -1, Zero = 0, Positive = 1 };

std::string to_string(Regime regime);

struct RegimeLabel {
    int year;
    Regime label;
    double tau_eff;
    double threshold;
};

/// Zero when |tau_eff| <= zero_band, otherwise the sign of tau_eff.
std::vector<RegimeLabel> classify_regime(const EffectiveTauSeries &tau_eff, double zero_band = 0.005);
std::string regimes_to_csv(const std::vector<RegimeLabel> &labels);

/// First year where tau_eff turns from positive to negative and then stays
/// negative for at least `min_run` consecutive years.
std::optional<int> negative_regime_onset(const EffectiveTauSeries &tau_eff, int min_run = 5);

/// A calibration together with the per-year distribution diagnostics taken
/// along the fitted path.
struct CalibratedRun {
    double sigma = 0.0;
    CalibrationResult calibration;
    DecileShareTable deciles;
    std::vector<double> mean_median; ///< aligned with calibration.years

    [[nodiscard]] std::string ratio_csv() const;
    /// `year,tau,tau_eff,s50_obs,s50_model,d1,p1`
    [[nodiscard]] std::string sensitivity_csv() const;
};

/// calibrate_series plus deciles and mean/median ratio for every year.
CalibratedRun analyze_calibration(const ShareSeries &observed, const ModelParams &params,
                                  std::uint64_t seed, CalibrationOptions options = {});

struct SensitivityReport {
    std::vector<CalibratedRun> scenarios; ///< in the order sigmas were given
    std::vector<double> duplicates_dropped;
};

/// Runs analyze_calibration once per distinct sigma with the same seed and
/// years. Scenarios are independent and may run concurrently.
SensitivityReport sensitivity_sweep(const ShareSeries &observed, std::span<const double> sigmas,
                                    const ModelParams &base, std::uint64_t seed,
                                    const CalibrationOptions &options = {});

} // namespace rgbm
