#include "rgbm/analysis.hpp"

#include "rgbm/csv_util.hpp"
#include "rgbm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>

namespace rgbm {

DecileShares decile_shares(std::span<const double> incomes) {
    const std::size_t n = incomes.size();
    if (n == 0 || n % 100 != 0) {
        throw AnalysisError(AnalysisErrorKind::IndivisiblePopulation,
                            "population of " + std::to_string(n) + " is not divisible by 100");
    }
    std::vector<double> sorted(incomes.begin(), incomes.end());
    std::stable_sort(sorted.begin(), sorted.end());
    const double total = pairwise_sum(sorted);
    if (!(total > 0.0)) {
        throw AnalysisError(AnalysisErrorKind::NonPositiveTotal, "total income is not positive");
    }
    DecileShares out;
    const std::size_t block = n / 10;
    for (std::size_t d = 0; d < 10; ++d) {
        out.decile[d] = pairwise_sum(std::span<const double>(sorted).subspan(d * block, block)) / total;
    }
    out.percentile1 = pairwise_sum(std::span<const double>(sorted).first(n / 100)) / total;
    return out;
}

DecileShares decile_shares(const Population &pop) { return decile_shares(pop.incomes); }

std::string DecileShareTable::to_csv() const {
    std::ostringstream out;
    out << "year";
    for (int d = 1; d <= 10; ++d) {
        out << ",d" << d;
    }
    out << ",p1\n";
    for (std::size_t k = 0; k < years.size(); ++k) {
        out << years[k];
        for (double v : rows[k].decile) {
            out << ',' << csv::format_double(v);
        }
        out << ',' << csv::format_double(rows[k].percentile1) << '\n';
    }
    return out.str();
}

std::optional<DecileShares> DecileShareTable::at(int year) const {
    for (std::size_t k = 0; k < years.size(); ++k) {
        if (years[k] == year) {
            return rows[k];
        }
    }
    return std::nullopt;
}

double mean_median_ratio(std::span<const double> incomes) {
    if (incomes.empty()) {
        throw AnalysisError(AnalysisErrorKind::EmptyInput, "empty population");
    }
    const double median = sample_median(incomes);
    if (!(median > 0.0)) {
        throw AnalysisError(AnalysisErrorKind::NonPositiveMedian, "median income is not positive");
    }
    return sample_mean(incomes) / median;
}

double mean_median_ratio(const Population &pop) { return mean_median_ratio(pop.incomes); }

std::string to_string(Regime regime) {
    switch (regime) {
    case Regime::Negative:
        return "negative";
    case Regime::Zero:
        return "zero";
    case Regime::Positive:
        return "positive";
    }
    return "zero";
}

std::vector<RegimeLabel> classify_regime(const EffectiveTauSeries &tau_eff, double zero_band) {
    if (!(zero_band >= 0.0)) {
        throw std::invalid_argument("zero band must be >= 0");
    }
    std::vector<RegimeLabel> out;
    out.reserve(tau_eff.size());
    for (std::size_t k = 0; k < tau_eff.size(); ++k) {
        const double v = tau_eff.tau_eff[k];
        Regime label = Regime::Zero;
        if (std::abs(v) > zero_band) {
            label = v > 0.0 ? Regime::Positive : Regime::Negative;
        }
        out.push_back({tau_eff.years[k], label, v, zero_band});
    }
    return out;
}

std::string regimes_to_csv(const std::vector<RegimeLabel> &labels) {
    std::ostringstream out;
    out << "year,tau_eff,label\n";
    for (const auto &l : labels) {
        out << l.year << ',' << csv::format_double(l.tau_eff) << ',' << to_string(l.label) << '\n';
    }
    return out.str();
}

std::optional<int> negative_regime_onset(const EffectiveTauSeries &tau_eff, int min_run) {
    const auto &v = tau_eff.tau_eff;
    const auto run = static_cast<std::size_t>(std::max(min_run, 1));
    for (std::size_t k = 1; k + run <= v.size(); ++k) {
        if (!(v[k - 1] > 0.0 && v[k] < 0.0)) {
            continue;
        }
        if (std::all_of(v.begin() + static_cast<std::ptrdiff_t>(k),
                        v.begin() + static_cast<std::ptrdiff_t>(k + run),
                        [](double x) { return x < 0.0; })) {
            return tau_eff.years[k];
        }
    }
    return std::nullopt;
}

std::string CalibratedRun::ratio_csv() const {
    std::ostringstream out;
    out << "year,mean_median\n";
    for (std::size_t k = 0; k < mean_median.size(); ++k) {
        out << calibration.years[k] << ',' << csv::format_double(mean_median[k]) << '\n';
    }
    return out.str();
}

std::string CalibratedRun::sensitivity_csv() const {
    std::ostringstream out;
    out << "year,tau,tau_eff,s50_obs,s50_model,d1,p1\n";
    const auto &c = calibration;
    for (std::size_t k = 0; k < c.years.size(); ++k) {
        const bool has_tau = k < c.tau_series.size();
        out << c.years[k] << ',' << (has_tau ? csv::format_double(c.tau_series.tau[k]) : "") << ','
            << (has_tau ? csv::format_double(c.tau_eff.tau_eff[k]) : "") << ','
            << csv::format_double(c.s50_obs[k]) << ',' << csv::format_double(c.s50_model[k]) << ','
            << csv::format_double(deciles.rows[k].decile[0]) << ','
            << csv::format_double(deciles.rows[k].percentile1) << '\n';
    }
    return out.str();
}

CalibratedRun analyze_calibration(const ShareSeries &observed, const ModelParams &params,
                                  std::uint64_t seed, CalibrationOptions options) {
    CalibratedRun run;
    run.sigma = params.sigma;
    auto user_observer = options.observer;
    options.observer = [&](const Population &pop) {
        run.deciles.years.push_back(pop.year);
        run.deciles.rows.push_back(decile_shares(pop));
        run.mean_median.push_back(mean_median_ratio(pop));
        if (user_observer) {
            user_observer(pop);
        }
    };
    run.calibration = calibrate_series(observed, params, seed, options);
    return run;
}

SensitivityReport sensitivity_sweep(const ShareSeries &observed, std::span<const double> sigmas,
                                    const ModelParams &base, std::uint64_t seed,
                                    const CalibrationOptions &options) {
    if (sigmas.empty()) {
        throw AnalysisError(AnalysisErrorKind::EmptyInput, "sensitivity sweep needs at least one sigma");
    }
    SensitivityReport report;
    std::vector<double> distinct;
    for (double s : sigmas) {
        if (std::find(distinct.begin(), distinct.end(), s) != distinct.end()) {
            report.duplicates_dropped.push_back(s);
        } else {
            distinct.push_back(s);
        }
    }
    std::vector<std::future<CalibratedRun>> jobs;
    jobs.reserve(distinct.size());
    for (double s : distinct) {
        auto params = base;
        params.sigma = s;
        jobs.push_back(std::async(std::launch::async, [&observed, params, seed, &options] {
            return analyze_calibration(observed, params, seed, options);
        }));
    }
    for (auto &job : jobs) {
        report.scenarios.push_back(job.get());
    }
    return report;
}

} // namespace rgbm
