#include "rgbm/estimators.hpp"

#include "rgbm/csv_util.hpp"
#include "rgbm/errors.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace rgbm {

DriftEstimate estimate_drift(const MeanIncomeSeries &series) {
    const auto n = series.size();
    if (n < 3) {
        throw EstimationError(EstimationErrorKind::SeriesTooShort,
                              "drift fit needs at least 3 years, got " + std::to_string(n));
    }
    DriftEstimate est;
    est.t0 = series.years.front();

    // Centered two-pass sums keep the slope exact for exact log-lines.
    double mean_t = 0.0, mean_y = 0.0;
    std::vector<double> t(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = static_cast<double>(series.years[i] - est.t0);
        y[i] = std::log(series.mean_income[i]);
        mean_t += t[i];
        mean_y += y[i];
    }
    mean_t /= static_cast<double>(n);
    mean_y /= static_cast<double>(n);

    double stt = 0.0, sty = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dt = t[i] - mean_t;
        const double dy = y[i] - mean_y;
        stt += dt * dt;
        sty += dt * dy;
        syy += dy * dy;
    }
    est.mu = sty / stt;
    est.intercept = mean_y - est.mu * mean_t;

    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (est.intercept + est.mu * t[i]);
        sse += r * r;
    }
    // Relative threshold: ln(income) is constant up to rounding.
    if (syy <= 1e-24 * std::max(1.0, mean_y * mean_y) * static_cast<double>(n)) {
        est.degenerate = true;
        est.mu = 0.0;
        est.r_squared = 1.0;
    } else {
        est.r_squared = std::clamp(1.0 - sse / syy, 0.0, 1.0);
    }
    return est;
}

VolatilityEstimate estimate_volatility(const PriceSeries &prices) {
    VolatilityEstimate est;
    est.commodity = prices.commodity;

    std::map<int, std::vector<double>> returns_by_year;
    const auto &obs = prices.observations;
    for (std::size_t i = 1; i < obs.size(); ++i) {
        const auto gap = (obs[i].date - obs[i - 1].date).count();
        if (gap > kMaxReturnGapDays) {
            ++est.excluded_pairs;
            continue;
        }
        const int year = static_cast<int>(std::chrono::year_month_day{obs[i].date}.year());
        returns_by_year[year].push_back(std::log(obs[i].price / obs[i - 1].price));
    }

    const double annualise = std::sqrt(52.0);
    double total = 0.0;
    for (const auto &[year, r] : returns_by_year) {
        if (r.size() < 2) {
            continue;
        }
        double mean = 0.0;
        for (double v : r) {
            mean += v;
        }
        mean /= static_cast<double>(r.size());
        double ss = 0.0;
        for (double v : r) {
            ss += (v - mean) * (v - mean);
        }
        const double sigma = std::sqrt(ss / static_cast<double>(r.size() - 1)) * annualise;
        est.per_year_sigmas.push_back({year, sigma, r.size()});
        total += sigma;
    }
    if (est.per_year_sigmas.empty()) {
        throw EstimationError(EstimationErrorKind::InsufficientData,
                              "price series '" + prices.commodity +
                                  "' has no calendar year with two or more weekly returns");
    }
    est.sigma_annual = total / static_cast<double>(est.per_year_sigmas.size());
    return est;
}

SigmaPolicy parse_sigma_policy(std::string_view text) {
    if (text == "mean") {
        return MeanPolicy{};
    }
    constexpr std::string_view prefix = "fixed:";
    if (text.substr(0, prefix.size()) == prefix) {
        double v = 0.0;
        if (csv::parse_double(text.substr(prefix.size()), v) && v >= 0.0 && std::isfinite(v)) {
            return FixedPolicy{v};
        }
    }
    throw std::invalid_argument("sigma policy must be 'mean' or 'fixed:<value>', got '" +
                                std::string(text) + "'");
}

std::string to_string(const SigmaPolicy &policy) {
    if (const auto *fixed = std::get_if<FixedPolicy>(&policy)) {
        return "fixed:" + csv::format_double(fixed->value);
    }
    return "mean";
}

double consolidate_sigma(std::span<const double> sigmas, const SigmaPolicy &policy) {
    if (sigmas.empty()) {
        throw EstimationError(EstimationErrorKind::EmptyInput, "no volatility estimates to consolidate");
    }
    if (const auto *fixed = std::get_if<FixedPolicy>(&policy)) {
        return fixed->value;
    }
    double total = 0.0;
    for (double s : sigmas) {
        total += s;
    }
    return total / static_cast<double>(sigmas.size());
}

double consolidate_sigma(std::span<const VolatilityEstimate> estimates, const SigmaPolicy &policy) {
    std::vector<double> sigmas;
    sigmas.reserve(estimates.size());
    for (const auto &e : estimates) {
        sigmas.push_back(e.sigma_annual);
    }
    return consolidate_sigma(std::span<const double>(sigmas), policy);
}

} // namespace rgbm
