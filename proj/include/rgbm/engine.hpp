#pragma once

#include "rgbm/noise.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace rgbm {

/// Global dynamics parameters. Defaults mirror the base case for India:
/// drift 0.0231/yr, volatility 0.15/sqrt(yr), 100,000 agents, yearly steps.
struct ModelParams {
    double mu = 0.0231;
    double sigma = 0.15;
    std::size_t n_agents = 100'000;
    double dt = 1.0;
    int substeps = 1;

    /// Throws EngineError(InvalidParams) unless sigma >= 0, n_agents >= 2,
    /// dt > 0 and substeps >= 1.
    void validate() const;
};

struct Population {
    std::vector<double> incomes;
    int year = 0;

    [[nodiscard]] std::size_t size() const noexcept { return incomes.size(); }
};

/// Order-independent sum: fixed pairwise tree over 64-element leaves, so the
/// result depends only on the values and their positions.
double pairwise_sum(std::span<const double> values) noexcept;

/// Arithmetic mean of the incomes; 0 for an empty population.
double sample_mean(const Population &pop) noexcept;
double sample_mean(std::span<const double> incomes) noexcept;

/// Sample median (mean of the two central order statistics for even sizes).
double sample_median(std::span<const double> incomes);

/// One Euler-Maruyama substep of length h applied in place:
///   x_i += x_i (mu h + sigma sqrt(h) xi_i) - tau (x_i - <x>) h
/// with <x> taken before the update.
void apply_substep(std::span<double> incomes, double mu, double sigma, double h, double tau,
                   std::span<const double> deviates);

/// Deviates for every substep of one reported year, laid out substep-major.
std::vector<double> year_deviates(const NoisePlan &plan, const ModelParams &params,
                                  std::uint32_t year_index);

/// Advances one reported year (params.substeps substeps of dt / substeps)
/// holding tau fixed. The returned population carries year + 1.
/// Throws EngineError(DegenerateState) if every income ends up exactly zero.
Population step(const Population &pop, const ModelParams &params, double tau,
                const NoisePlan &plan, std::uint32_t year_index);

/// Same as step() with deviates precomputed by year_deviates().
Population step_with_deviates(const Population &pop, const ModelParams &params, double tau,
                              std::span<const double> deviates);

/// Log-scale parameter s of a lognormal whose poorest-half share is
/// `target_s50`, from L(p) = Phi(Phi^-1(p) - s) at p = 1/2: s = -Phi^-1(target).
double lognormal_scale_for_bottom_share(double target_s50);

/// Lorenz value L(p) of a lognormal with log-scale s.
double lognormal_lorenz(double p, double s);

struct InitOptions {
    /// Allowed |sampled share - target| before a resample.
    double tolerance = 0.005;
    int max_attempts = 10;
};

/// Draws n_agents i.i.d. lognormal incomes with median `location` and log
/// scale -Phi^-1(target_s50). Resamples on a fresh noise stream while the
/// sampled poorest-half share misses the target by more than the tolerance;
/// throws EngineError(TargetUnreachable) once the budget is spent.
Population init_lognormal(const ModelParams &params, double target_s50, std::uint64_t seed,
                          double location = 1.0, InitOptions options = {});

struct RegimeYear {
    int year;
    double min, max, mean, median;
};

struct RegimeTrajectory {
    double tau;
    std::vector<RegimeYear> years; ///< year 0 is the initial state
};

/// Starts every agent at `initial_income` and advances n_years under fixed
/// tau, recording the income envelope, mean and median each year.
RegimeTrajectory simulate_regime(const ModelParams &params, double tau, int n_years,
                                 double initial_income, std::uint64_t seed);

} // namespace rgbm
