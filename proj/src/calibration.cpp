#include "rgbm/calibration.hpp"

#include "rgbm/csv_util.hpp"
#include "rgbm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rgbm {

namespace {

/// Evaluates g(tau) = bottom share after one year, reusing scratch buffers.
class ShareAfterStep {
  public:
    ShareAfterStep(const Population &pop, const ModelParams &params,
                   std::span<const double> deviates, double q)
        : pop_{pop}, params_{params}, deviates_{deviates}, q_{q}, scratch_(pop.size()) {}

    double operator()(double tau) {
        std::copy(pop_.incomes.begin(), pop_.incomes.end(), scratch_.begin());
        const std::size_t n = scratch_.size();
        const double h = params_.dt / params_.substeps;
        for (int s = 0; s < params_.substeps; ++s) {
            apply_substep(scratch_, params_.mu, params_.sigma, h, tau,
                          deviates_.subspan(static_cast<std::size_t>(s) * n, n));
        }
        return bottom_share(scratch_, q_);
    }

  private:
    const Population &pop_;
    const ModelParams &params_;
    std::span<const double> deviates_;
    double q_;
    std::vector<double> scratch_;
};

std::vector<double> propagate_path(const ShareSeries &observed, std::span<const int> tau_years,
                                   std::span<const double> taus, const ModelParams &params,
                                   std::uint64_t seed, const CalibrationOptions &options) {
    if (observed.size() < 2) {
        throw CalibrationError(CalibrationErrorKind::SeriesTooShort,
                               "need at least two observed years");
    }
    if (!observed.is_consecutive()) {
        throw CalibrationError(CalibrationErrorKind::GapInSeries,
                               "observed years are not consecutive");
    }
    // The path needs a rate for every year except the last.
    std::vector<double> path;
    path.reserve(observed.size() - 1);
    for (std::size_t k = 0; k + 1 < observed.size(); ++k) {
        auto it = std::lower_bound(tau_years.begin(), tau_years.end(), observed.years[k]);
        if (it == tau_years.end() || *it != observed.years[k]) {
            throw CalibrationError(CalibrationErrorKind::NoOverlap,
                                   "no reallocation rate for year " +
                                       std::to_string(observed.years[k]),
                                   observed.years[k]);
        }
        path.push_back(taus[static_cast<std::size_t>(it - tau_years.begin())]);
    }

    auto pop = init_lognormal(params, observed.s50.front(), seed, options.location, options.init);
    pop.year = observed.years.front();
    const NoisePlan plan(seed);
    std::vector<double> shares;
    shares.reserve(observed.size());
    shares.push_back(bottom_share(pop, options.fit.quantile));
    for (std::size_t k = 0; k < path.size(); ++k) {
        try {
            pop = step(pop, params, path[k], plan, static_cast<std::uint32_t>(k));
            shares.push_back(bottom_share(pop, options.fit.quantile));
        } catch (const EngineError &e) {
            throw CalibrationError(CalibrationErrorKind::EngineFailure, e.what(),
                                   observed.years[k]);
        } catch (const CalibrationError &e) {
            throw CalibrationError(e.kind(), e.what(), observed.years[k + 1]);
        }
    }
    return shares;
}

} // namespace

double bottom_share(std::span<const double> incomes, double q) {
    if (incomes.empty()) {
        throw CalibrationError(CalibrationErrorKind::NonPositiveTotal, "empty population");
    }
    if (!(q > 0.0 && q <= 1.0)) {
        throw CalibrationError(CalibrationErrorKind::InvalidTarget, "quantile must lie in (0, 1]");
    }
    const double total = pairwise_sum(incomes);
    if (!(total > 0.0)) {
        throw CalibrationError(CalibrationErrorKind::NonPositiveTotal,
                               "total income " + csv::format_double(total) + " is not positive");
    }
    const auto k = static_cast<std::size_t>(std::floor(q * static_cast<double>(incomes.size())));
    if (k == incomes.size()) {
        return 1.0;
    }
    std::vector<double> v(incomes.begin(), incomes.end());
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
    return pairwise_sum({v.data(), k}) / total;
}

double bottom_share(const Population &pop, double q) { return bottom_share(pop.incomes, q); }

TauFit fit_tau_step(const Population &pop, double target_next, const ModelParams &params,
                    std::span<const double> deviates, Bracket bracket, const FitOptions &options) {
    if (!(bracket.lo < bracket.hi) || !std::isfinite(bracket.lo) || !std::isfinite(bracket.hi)) {
        throw CalibrationError(CalibrationErrorKind::InvalidBracket,
                               "bracket needs lo < hi, got [" + csv::format_double(bracket.lo) +
                                   ", " + csv::format_double(bracket.hi) + "]");
    }
    if (!(target_next > 0.0 && target_next < 1.0)) {
        throw CalibrationError(CalibrationErrorKind::InvalidTarget, "target share must lie in (0, 1)");
    }
    ShareAfterStep g(pop, params, deviates, options.quantile);

    const double g_lo = g(bracket.lo);
    const double g_hi = g(bracket.hi);
    TauFit fit;
    if (target_next < g_lo - options.share_tolerance || target_next > g_hi + options.share_tolerance) {
        const double miss_lo = std::abs(g_lo - target_next);
        const double miss_hi = std::abs(g_hi - target_next);
        fit.saturated = true;
        fit.tau = miss_lo <= miss_hi ? bracket.lo : bracket.hi;
        fit.objective = std::min(miss_lo, miss_hi);
        return fit;
    }

    double lo = bracket.lo, hi = bracket.hi;
    double best_tau = std::abs(g_lo - target_next) <= std::abs(g_hi - target_next) ? lo : hi;
    double best_obj = std::min(std::abs(g_lo - target_next), std::abs(g_hi - target_next));
    for (fit.iterations = 1; fit.iterations <= options.max_iterations; ++fit.iterations) {
        const double mid = 0.5 * (lo + hi);
        const double g_mid = g(mid);
        const double obj = std::abs(g_mid - target_next);
        if (obj < best_obj || (obj == best_obj && std::abs(mid) < std::abs(best_tau))) {
            best_obj = obj;
            best_tau = mid;
        }
        if (obj <= options.share_tolerance) {
            break;
        }
        if (g_mid < target_next) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    fit.iterations = std::min(fit.iterations, options.max_iterations);
    fit.tau = best_tau;
    fit.objective = best_obj;
    return fit;
}

TauFit fit_tau_step(const Population &pop, double target_next, const ModelParams &params,
                    const NoisePlan &plan, std::uint32_t year_index, Bracket bracket,
                    const FitOptions &options) {
    params.validate();
    return fit_tau_step(pop, target_next, params, year_deviates(plan, params, year_index), bracket,
                        options);
}

EffectiveTauSeries effective_tau(const TauSeries &series, int window) {
    if (window < 1) {
        throw std::invalid_argument("moving-average window must be >= 1");
    }
    EffectiveTauSeries out;
    out.window = window;
    out.years = series.years;
    out.tau_eff.reserve(series.size());
    for (std::size_t k = 0; k < series.size(); ++k) {
        const std::size_t first = k + 1 >= static_cast<std::size_t>(window)
                                      ? k + 1 - static_cast<std::size_t>(window)
                                      : 0;
        double sum = 0.0;
        for (std::size_t j = first; j <= k; ++j) {
            sum += series.tau[j];
        }
        out.tau_eff.push_back(sum / static_cast<double>(k - first + 1));
    }
    return out;
}

CalibrationResult calibrate_series(const ShareSeries &observed, const ModelParams &params,
                                   std::uint64_t seed, const CalibrationOptions &options) {
    params.validate();
    if (observed.size() < 2) {
        throw CalibrationError(CalibrationErrorKind::SeriesTooShort,
                               "need at least two observed years");
    }
    if (!observed.is_consecutive()) {
        for (std::size_t k = 1; k < observed.size(); ++k) {
            if (observed.years[k] != observed.years[k - 1] + 1) {
                throw CalibrationError(CalibrationErrorKind::GapInSeries,
                                       "observed years jump from " +
                                           std::to_string(observed.years[k - 1]) + " to " +
                                           std::to_string(observed.years[k]),
                                       observed.years[k - 1] + 1);
            }
        }
    }

    CalibrationResult result;
    result.years = observed.years;
    result.s50_obs = observed.s50;

    Population pop;
    try {
        pop = init_lognormal(params, observed.s50.front(), seed, options.location, options.init);
    } catch (const EngineError &e) {
        throw CalibrationError(CalibrationErrorKind::EngineFailure, e.what(), observed.years.front());
    }
    pop.year = observed.years.front();
    if (options.observer) {
        options.observer(pop);
    }
    result.s50_model.push_back(bottom_share(pop, options.fit.quantile));

    const NoisePlan plan(seed);
    auto &taus = result.tau_series;
    for (std::size_t k = 0; k + 1 < observed.size(); ++k) {
        const int year = observed.years[k];
        try {
            const auto deviates = year_deviates(plan, params, static_cast<std::uint32_t>(k));
            auto fit = fit_tau_step(pop, observed.s50[k + 1], params, deviates, options.bracket,
                                    options.fit);
            if (fit.saturated) {
                auto wide = fit_tau_step(pop, observed.s50[k + 1], params, deviates,
                                         options.wide_bracket, options.fit);
                if (!wide.saturated || wide.objective < fit.objective) {
                    fit = wide;
                }
            }
            pop = step_with_deviates(pop, params, fit.tau, deviates);
            taus.years.push_back(year);
            taus.tau.push_back(fit.tau);
            taus.objective.push_back(fit.objective);
            taus.saturated.push_back(fit.saturated);
            result.s50_model.push_back(bottom_share(pop, options.fit.quantile));
        } catch (const EngineError &e) {
            throw CalibrationError(CalibrationErrorKind::EngineFailure, e.what(), year);
        } catch (const CalibrationError &e) {
            throw CalibrationError(e.kind(), e.what(), year);
        }
        if (options.observer) {
            options.observer(pop);
        }
    }

    result.tau_eff = effective_tau(taus, options.window);
    result.s50_model_eff = repropagate(observed, result.tau_eff, params, seed, options);
    return result;
}

std::vector<double> repropagate(const ShareSeries &observed, const EffectiveTauSeries &tau_eff,
                                const ModelParams &params, std::uint64_t seed,
                                const CalibrationOptions &options) {
    return propagate_path(observed, tau_eff.years, tau_eff.tau_eff, params, seed, options);
}

std::vector<double> repropagate(const ShareSeries &observed, const TauSeries &tau,
                                const ModelParams &params, std::uint64_t seed,
                                const CalibrationOptions &options) {
    return propagate_path(observed, tau.years, tau.tau, params, seed, options);
}

std::string CalibrationResult::to_csv() const {
    std::ostringstream out;
    out << "year,tau,tau_eff,s50_obs,s50_model,s50_model_eff,objective,saturated\n";
    for (std::size_t k = 0; k < years.size(); ++k) {
        out << years[k] << ',';
        const bool has_tau = k < tau_series.size();
        out << (has_tau ? csv::format_double(tau_series.tau[k]) : "") << ','
            << (has_tau ? csv::format_double(tau_eff.tau_eff[k]) : "") << ','
            << csv::format_double(s50_obs[k]) << ',' << csv::format_double(s50_model[k]) << ','
            << csv::format_double(s50_model_eff[k]) << ','
            << (has_tau ? csv::format_double(tau_series.objective[k]) : "") << ','
            << (has_tau && tau_series.saturated[k] ? 1 : 0) << '\n';
    }
    return out.str();
}

} // namespace rgbm
