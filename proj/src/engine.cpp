#include "rgbm/engine.hpp"

#include "rgbm/errors.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <string>

namespace rgbm {

namespace {

constexpr std::size_t kLeaf = 64;

double pairwise_sum_impl(const double *data, std::size_t n) noexcept {
    if (n <= kLeaf) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            s += data[i];
        }
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum_impl(data, half) + pairwise_sum_impl(data + half, n - half);
}

// Bottom-half share of a sampled population; init-only copy of the
// calibration metric so the engine stays independent of it.
double poorest_half_share(std::span<const double> incomes) {
    std::vector<double> sorted(incomes.begin(), incomes.end());
    const std::size_t k = sorted.size() / 2;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k), sorted.end());
    return pairwise_sum({sorted.data(), k}) / pairwise_sum(sorted);
}

} // namespace

void ModelParams::validate() const {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw EngineError(EngineErrorKind::InvalidParams, "sigma must be >= 0");
    }
    if (n_agents < 2) {
        throw EngineError(EngineErrorKind::InvalidParams, "population needs at least 2 agents");
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw EngineError(EngineErrorKind::InvalidParams, "dt must be > 0");
    }
    if (substeps < 1) {
        throw EngineError(EngineErrorKind::InvalidParams, "substeps must be >= 1");
    }
    if (!std::isfinite(mu)) {
        throw EngineError(EngineErrorKind::InvalidParams, "mu must be finite");
    }
}

double pairwise_sum(std::span<const double> values) noexcept {
    return pairwise_sum_impl(values.data(), values.size());
}

double sample_mean(std::span<const double> incomes) noexcept {
    if (incomes.empty()) {
        return 0.0;
    }
    return pairwise_sum(incomes) / static_cast<double>(incomes.size());
}

double sample_mean(const Population &pop) noexcept { return sample_mean(pop.incomes); }

double sample_median(std::span<const double> incomes) {
    if (incomes.empty()) {
        return 0.0;
    }
    std::vector<double> v(incomes.begin(), incomes.end());
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double upper = v[mid];
    if (v.size() % 2 == 1) {
        return upper;
    }
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

void apply_substep(std::span<double> incomes, double mu, double sigma, double h, double tau,
                   std::span<const double> deviates) {
    const double mean = sample_mean(incomes);
    const double drift = mu * h;
    const double vol = sigma * std::sqrt(h);
    const double pull = tau * h;
    for (std::size_t i = 0; i < incomes.size(); ++i) {
        const double x = incomes[i];
        incomes[i] = x + x * (drift + vol * deviates[i]) - pull * (x - mean);
    }
}

std::vector<double> year_deviates(const NoisePlan &plan, const ModelParams &params,
                                  std::uint32_t year_index) {
    const std::size_t n = params.n_agents;
    std::vector<double> out(n * static_cast<std::size_t>(params.substeps));
    for (int s = 0; s < params.substeps; ++s) {
        plan.fill(year_index, static_cast<std::uint32_t>(s),
                  std::span<double>(out).subspan(static_cast<std::size_t>(s) * n, n));
    }
    return out;
}

Population step_with_deviates(const Population &pop, const ModelParams &params, double tau,
                              std::span<const double> deviates) {
    const std::size_t n = pop.size();
    if (n != params.n_agents) {
        throw EngineError(EngineErrorKind::InvalidParams,
                          "population size " + std::to_string(n) + " does not match n_agents " +
                              std::to_string(params.n_agents));
    }
    Population next{pop.incomes, pop.year + 1};
    const double h = params.dt / params.substeps;
    for (int s = 0; s < params.substeps; ++s) {
        apply_substep(next.incomes, params.mu, params.sigma, h, tau,
                      deviates.subspan(static_cast<std::size_t>(s) * n, n));
    }
    if (std::all_of(next.incomes.begin(), next.incomes.end(), [](double x) { return x == 0.0; })) {
        throw EngineError(EngineErrorKind::DegenerateState,
                          "all incomes are zero after year " + std::to_string(pop.year));
    }
    return next;
}

Population step(const Population &pop, const ModelParams &params, double tau,
                const NoisePlan &plan, std::uint32_t year_index) {
    params.validate();
    if (params.sigma == 0.0) {
        // Deviates are multiplied by zero; skip generating them.
        std::vector<double> zeros(pop.size() * static_cast<std::size_t>(params.substeps), 0.0);
        return step_with_deviates(pop, params, tau, zeros);
    }
    return step_with_deviates(pop, params, tau, year_deviates(plan, params, year_index));
}

double lognormal_scale_for_bottom_share(double target_s50) {
    if (!(target_s50 > 0.0 && target_s50 < 1.0)) {
        throw EngineError(EngineErrorKind::InvalidParams, "target share must lie in (0, 1)");
    }
    const boost::math::normal_distribution<double> std_normal;
    return -boost::math::quantile(std_normal, target_s50);
}

double lognormal_lorenz(double p, double s) {
    if (p <= 0.0) {
        return 0.0;
    }
    if (p >= 1.0) {
        return 1.0;
    }
    const boost::math::normal_distribution<double> std_normal;
    return boost::math::cdf(std_normal, boost::math::quantile(std_normal, p) - s);
}

Population init_lognormal(const ModelParams &params, double target_s50, std::uint64_t seed,
                          double location, InitOptions options) {
    params.validate();
    if (!(location > 0.0)) {
        throw EngineError(EngineErrorKind::InvalidParams, "location must be positive");
    }
    const double s = lognormal_scale_for_bottom_share(target_s50);
    const NoisePlan plan(seed);
    Population pop;
    pop.incomes.resize(params.n_agents);
    double last_share = 0.0;
    for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
        // Stream 0 belongs to the dynamics; attempts use streams 1, 2, ...
        plan.fill(0, 0, pop.incomes, static_cast<std::uint32_t>(attempt + 1));
        for (double &x : pop.incomes) {
            x = location * std::exp(s * x);
        }
        last_share = poorest_half_share(pop.incomes);
        if (std::abs(last_share - target_s50) <= options.tolerance) {
            return pop;
        }
    }
    throw EngineError(EngineErrorKind::TargetUnreachable,
                      "sampled bottom-50% share " + std::to_string(last_share) +
                          " misses target " + std::to_string(target_s50) + " after " +
                          std::to_string(options.max_attempts) + " attempts");
}

RegimeTrajectory simulate_regime(const ModelParams &params, double tau, int n_years,
                                 double initial_income, std::uint64_t seed) {
    params.validate();
    if (n_years < 1) {
        throw EngineError(EngineErrorKind::InvalidParams, "n_years must be >= 1");
    }
    const NoisePlan plan(seed);
    Population pop{std::vector<double>(params.n_agents, initial_income), 0};
    RegimeTrajectory out{tau, {}};
    out.years.reserve(static_cast<std::size_t>(n_years) + 1);
    auto record = [&](const Population &p) {
        auto [mn, mx] = std::minmax_element(p.incomes.begin(), p.incomes.end());
        out.years.push_back({p.year, *mn, *mx, sample_mean(p), sample_median(p.incomes)});
    };
    record(pop);
    for (int y = 0; y < n_years; ++y) {
        pop = step(pop, params, tau, plan, static_cast<std::uint32_t>(y));
        record(pop);
    }
    return out;
}

} // namespace rgbm
