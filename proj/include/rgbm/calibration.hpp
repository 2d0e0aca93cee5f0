#pragma once

#include "rgbm/engine.hpp"
#include "rgbm/timeseries.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace rgbm {

/// Fitted reallocation rates. Entry k belongs to years[k] and is the rate
/// applied over [years[k], years[k] + 1).
struct TauSeries {
    std::vector<int> years;
    std::vector<double> tau;
    /// Achieved |modelled share - observed share| at years[k] + 1.
    std::vector<double> objective;
    /// True where the target lay outside even the widened bracket.
    std::vector<bool> saturated;

    [[nodiscard]] std::size_t size() const noexcept { return years.size(); }
};

/// Trailing moving average of a TauSeries; tau_eff[k] averages
/// tau[k - window + 1 .. k], truncated at the start of the series.
struct EffectiveTauSeries {
    std::vector<int> years;
    std::vector<double> tau_eff;
    int window = 5;

    [[nodiscard]] std::size_t size() const noexcept { return years.size(); }
};

struct Bracket {
    double lo = -1.0;
    double hi = 1.0;
};

struct TauFit {
    double tau = 0.0;
    double objective = 0.0;
    bool saturated = false;
    int iterations = 0;
};

struct FitOptions {
    double share_tolerance = 1e-5;
    int max_iterations = 60;
    double quantile = 0.5;
};

/// Invoked with each population along the calibrated path, initial state first.
using PopulationObserver = std::function<void(const Population &)>;

struct CalibrationOptions {
    Bracket bracket{-1.0, 1.0};
    /// Tried once when the default bracket saturates.
    Bracket wide_bracket{-5.0, 5.0};
    FitOptions fit{};
    int window = 5;
    double location = 1.0;
    InitOptions init{};
    PopulationObserver observer{};
};

struct CalibrationResult {
    std::vector<int> years; ///< observed years used, consecutive
    std::vector<double> s50_obs;
    TauSeries tau_series;
    EffectiveTauSeries tau_eff;
    std::vector<double> s50_model;     ///< path under the fitted tau
    std::vector<double> s50_model_eff; ///< path under tau_eff

    /// One row per observed year:
    /// `year,tau,tau_eff,s50_obs,s50_model,s50_model_eff,objective,saturated`.
    /// The final year has no outgoing interval, so its tau, tau_eff and
    /// objective fields are empty.
    [[nodiscard]] std::string to_csv() const;
};

/// Share of total income held by the poorest floor(q N) agents. Negative
/// incomes count as they are. Throws CalibrationError(NonPositiveTotal)
/// when total income is not positive.
double bottom_share(std::span<const double> incomes, double q);
double bottom_share(const Population &pop, double q);

/// Solves bottom_share(step(pop, tau)) = target by bisection on `bracket`
/// using the same noise for every candidate. If the target is outside
/// [g(lo), g(hi)] the endpoint with the smaller miss is returned, flagged
/// saturated.
TauFit fit_tau_step(const Population &pop, double target_next, const ModelParams &params,
                    const NoisePlan &plan, std::uint32_t year_index, Bracket bracket = {},
                    const FitOptions &options = {});

/// Same, with deviates already drawn by year_deviates().
TauFit fit_tau_step(const Population &pop, double target_next, const ModelParams &params,
                    std::span<const double> deviates, Bracket bracket = {},
                    const FitOptions &options = {});

EffectiveTauSeries effective_tau(const TauSeries &series, int window = 5);

/// Initialises at the first observed share and fits one tau per year,
/// carrying forward the population produced under the accepted tau.
CalibrationResult calibrate_series(const ShareSeries &observed, const ModelParams &params,
                                   std::uint64_t seed, const CalibrationOptions &options = {});

/// Replays the calibration's initial population under a fixed tau path and
/// returns the modelled bottom-50% share for every observed year.
std::vector<double> repropagate(const ShareSeries &observed, const EffectiveTauSeries &tau_eff,
                                const ModelParams &params, std::uint64_t seed,
                                const CalibrationOptions &options = {});
std::vector<double> repropagate(const ShareSeries &observed, const TauSeries &tau,
                                const ModelParams &params, std::uint64_t seed,
                                const CalibrationOptions &options = {});

} // namespace rgbm
