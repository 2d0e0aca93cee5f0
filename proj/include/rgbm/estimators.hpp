#pragma once

#include "rgbm/timeseries.hpp"

#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace rgbm {

struct DriftEstimate {
    double mu = 0.0;        ///< growth rate per year
    double intercept = 0.0; ///< fitted ln(mean income) at the first year
    double r_squared = 0.0;
    int t0 = 0;             ///< first calendar year of the fit
    /// Set when ln(income) has zero variance; r_squared is then reported as 1.
    bool degenerate = false;
};

struct YearSigma {
    int year;
    double sigma;
    std::size_t returns; ///< number of weekly log returns that year
};

struct VolatilityEstimate {
    std::string commodity;
    double sigma_annual = 0.0;
    std::vector<YearSigma> per_year_sigmas;
    /// Return pairs dropped because the observations were more than ten days apart.
    std::size_t excluded_pairs = 0;
};

/// Least-squares fit of ln(mean_income) against (year - t0). Needs three or
/// more points.
DriftEstimate estimate_drift(const MeanIncomeSeries &series);

/// Weekly log returns grouped by the calendar year of the later observation;
/// per-year sample standard deviation (n - 1) scaled by sqrt(52), then the
/// plain mean over years that have at least two returns.
VolatilityEstimate estimate_volatility(const PriceSeries &prices);

/// Largest gap (in days) between two observations still treated as one weekly return.
inline constexpr int kMaxReturnGapDays = 10;

struct MeanPolicy {};
struct FixedPolicy {
    double value;
};
using SigmaPolicy = std::variant<MeanPolicy, FixedPolicy>;

/// Parses "mean" or "fixed:<v>". Throws std::invalid_argument otherwise.
SigmaPolicy parse_sigma_policy(std::string_view text);
std::string to_string(const SigmaPolicy &policy);

double consolidate_sigma(std::span<const VolatilityEstimate> estimates, const SigmaPolicy &policy);
double consolidate_sigma(std::span<const double> sigmas, const SigmaPolicy &policy);

} // namespace rgbm
