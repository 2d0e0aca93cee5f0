#include "cli/commands.hpp"

#include "cli/svg_plot.hpp"
#include "rgbm/analysis.hpp"
#include "rgbm/calibration.hpp"
#include "rgbm/csv_util.hpp"
#include "rgbm/engine.hpp"
#include "rgbm/errors.hpp"
#include "rgbm/estimators.hpp"
#include "rgbm/timeseries.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace rgbm::cli {

namespace fs = std::filesystem;

namespace {

void require_file(const fs::path &path) {
    if (!fs::is_regular_file(path)) {
        throw IngestError(IngestErrorKind::FileNotFound, path.string(), std::nullopt, "",
                          "input file does not exist");
    }
}

fs::path prepare_out(const RunConfig &config) {
    fs::create_directories(config.out);
    return config.out;
}

ModelParams model_params(const RunConfig &config) {
    ModelParams p;
    p.mu = config.drift();
    p.sigma = config.sigma;
    p.n_agents = config.n_agents;
    p.dt = config.dt;
    p.substeps = config.substeps;
    return p;
}

CalibrationOptions calibration_options(const RunConfig &config) {
    CalibrationOptions o;
    o.window = config.window;
    return o;
}

std::vector<double> as_double(const std::vector<int> &years) {
    return {years.begin(), years.end()};
}

std::string fixed(double v, int digits) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << v;
    return s.str();
}

/// Observed years with tau values padded by NaN for the final year.
std::vector<double> padded(const std::vector<double> &values, std::size_t size) {
    std::vector<double> out(values);
    out.resize(size, std::nan(""));
    return out;
}

} // namespace

int cmd_estimate(const RunConfig &config, std::ostream &out) {
    require_file(config.mean_income);
    if (config.prices.empty()) {
        throw IngestError(IngestErrorKind::FileNotFound, "prices", std::nullopt, "",
                          "at least one price series is required");
    }
    for (const auto &p : config.prices) {
        require_file(p);
    }
    const auto income = load_mean_income_series(config.mean_income);
    std::vector<PriceSeries> prices;
    for (const auto &p : config.prices) {
        prices.push_back(load_price_series(p));
    }

    const auto drift = estimate_drift(income);
    std::vector<VolatilityEstimate> vols;
    for (const auto &p : prices) {
        vols.push_back(estimate_volatility(p));
    }
    const double sigma = consolidate_sigma(std::span<const VolatilityEstimate>(vols), config.sigma_policy);

    std::ostringstream csv;
    csv << "quantity,source,value\n";
    csv << "mu,mean_income," << csv::format_double(drift.mu) << '\n';
    csv << "intercept,mean_income," << csv::format_double(drift.intercept) << '\n';
    csv << "r_squared,mean_income," << csv::format_double(drift.r_squared) << '\n';
    csv << "t0,mean_income," << drift.t0 << '\n';
    for (const auto &v : vols) {
        csv << "sigma," << v.commodity << ',' << csv::format_double(v.sigma_annual) << '\n';
    }
    csv << "sigma_consolidated," << to_string(config.sigma_policy) << ','
        << csv::format_double(sigma) << '\n';

    std::ostringstream by_year;
    by_year << "commodity,year,sigma,returns\n";
    for (const auto &v : vols) {
        for (const auto &y : v.per_year_sigmas) {
            by_year << v.commodity << ',' << y.year << ',' << csv::format_double(y.sigma) << ','
                    << y.returns << '\n';
        }
    }

    LineChart chart("Mean per-capita income", "year", "mean income");
    chart.log_y();
    std::vector<double> fit;
    for (int y : income.years) {
        fit.push_back(std::exp(drift.intercept + drift.mu * (y - drift.t0)));
    }
    chart.add({"observed", as_double(income.years), income.mean_income, palette(0)});
    chart.add({"exp fit, mu=" + fixed(drift.mu, 4), as_double(income.years), fit, "#000000", true});

    const auto dir = prepare_out(config);
    csv::write_atomic(dir / "estimates.csv", csv.str());
    csv::write_atomic(dir / "volatility_by_year.csv", by_year.str());
    csv::write_atomic(dir / "fig2.svg", chart.render());

    out << "mu = " << fixed(drift.mu, 4) << " (r^2 " << fixed(drift.r_squared, 3) << ", t0 "
        << drift.t0 << ")\n";
    for (const auto &v : vols) {
        out << "sigma(" << v.commodity << ") = " << fixed(v.sigma_annual, 4) << " over "
            << v.per_year_sigmas.size() << " years\n";
    }
    out << "sigma [" << to_string(config.sigma_policy) << "] = " << fixed(sigma, 4) << '\n';
    return kOk;
}

int cmd_calibrate(const RunConfig &config, std::ostream &out) {
    require_file(config.shares);
    const auto shares = load_share_series(config.shares);
    const auto result = calibrate_series(shares, model_params(config), config.seed,
                                         calibration_options(config));

    const auto years = as_double(result.years);
    const auto n = result.years.size();
    const auto onset = negative_regime_onset(result.tau_eff, 5);

    LineChart shares_chart("Bottom 50% income share", "year", "share");
    shares_chart.add({"observed", years, result.s50_obs, palette(0)})
        .add({"model (tau)", years, result.s50_model, palette(2), true})
        .add({"model (tau_eff)", years, result.s50_model_eff, palette(1), true});

    LineChart tau_chart("Reallocation rate", "year", "tau (1/year)");
    tau_chart.add({"tau", years, padded(result.tau_series.tau, n), palette(0)})
        .add({"tau_eff (" + std::to_string(config.window) + "-yr)", years,
              padded(result.tau_eff.tau_eff, n), palette(1), true})
        .add({"zero", {years.front(), years.back()}, {0.0, 0.0}, "#999999"});
    if (onset) {
        tau_chart.marker(*onset, std::to_string(*onset));
    }

    const auto dir = prepare_out(config);
    csv::write_atomic(dir / "calibration.csv", result.to_csv());
    csv::write_atomic(dir / "fig4a.svg", shares_chart.render());
    csv::write_atomic(dir / "fig4b.svg", tau_chart.render());

    double max_err = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        max_err = std::max(max_err, std::abs(result.s50_model_eff[k] - result.s50_obs[k]));
    }
    std::size_t saturated = 0;
    for (bool s : result.tau_series.saturated) {
        saturated += s ? 1 : 0;
    }
    out << "calibrated " << result.tau_series.size() << " years (" << result.years.front() << "-"
        << result.years.back() << "), saturated " << saturated << '\n';
    out << "max |s50_model_eff - s50_obs| = " << fixed(max_err, 4) << '\n';
    out << "negative regime onset: " << (onset ? std::to_string(*onset) : std::string("none")) << '\n';
    return kOk;
}

int cmd_regimes(const RunConfig &config, std::ostream &out) {
    ModelParams params = model_params(config);
    params.n_agents = config.regime_agents;
    const auto dir = prepare_out(config);
    for (double tau : config.regime_taus) {
        const auto traj = simulate_regime(params, tau, config.regime_years, config.initial_income,
                                          config.seed);
        std::ostringstream csv;
        csv << "year,min,max,mean,median\n";
        std::vector<double> t, mn, mx, mean, median;
        for (const auto &y : traj.years) {
            csv << y.year << ',' << csv::format_double(y.min) << ',' << csv::format_double(y.max)
                << ',' << csv::format_double(y.mean) << ',' << csv::format_double(y.median) << '\n';
            t.push_back(y.year);
            mn.push_back(y.min);
            mx.push_back(y.max);
            mean.push_back(y.mean);
            median.push_back(y.median);
        }
        const auto tag = csv::format_double(tau);
        LineChart chart("Reallocation regime, tau = " + tag, "years", "income");
        chart.add({"max", t, mx, "#000000"})
            .add({"min", t, mn, "#000000", true})
            .add({"mean", t, mean, palette(0)})
            .add({"median", t, median, palette(3)});
        csv::write_atomic(dir / ("regime_tau_" + tag + ".csv"), csv.str());
        csv::write_atomic(dir / ("fig3_tau_" + tag + ".svg"), chart.render());

        const auto &last = traj.years.back();
        out << "tau " << tag << ": year " << last.year << " min " << fixed(last.min, 4) << " max "
            << fixed(last.max, 4) << " mean " << fixed(last.mean, 4) << " median "
            << fixed(last.median, 4) << '\n';
    }
    return kOk;
}

int cmd_analyze(const RunConfig &config, std::ostream &out) {
    require_file(config.shares);
    const auto shares = load_share_series(config.shares);
    const auto params = model_params(config);
    const auto options = calibration_options(config);
    const auto base = analyze_calibration(shares, params, config.seed, options);

    // Other volatilities only feed the bottom-decile comparison.
    std::vector<double> others;
    for (double s : config.sigmas) {
        if (s != params.sigma && std::find(others.begin(), others.end(), s) == others.end()) {
            others.push_back(s);
        }
    }
    std::vector<CalibratedRun> variants;
    if (!others.empty()) {
        variants = sensitivity_sweep(shares, others, params, config.seed, options).scenarios;
    }

    const auto labels = classify_regime(base.calibration.tau_eff, config.zero_band);
    const auto years = as_double(base.deciles.years);

    LineChart ratio_chart("Mean / median income", "year", "mean / median");
    ratio_chart.add({"mean/median", years, base.mean_median, palette(0)});

    LineChart decile_chart("Income share by decile", "year", "share");
    decile_chart.log_y();
    for (std::size_t d = 0; d < 10; ++d) {
        std::vector<double> v;
        for (const auto &row : base.deciles.rows) {
            v.push_back(row.decile[d]);
        }
        decile_chart.add({"decile " + std::to_string(d + 1), years, v, palette(d)});
    }

    LineChart bottom_chart("Bottom decile and percentile", "year", "share");
    bottom_chart.log_y();
    auto column = [](const DecileShareTable &t, bool percentile) {
        std::vector<double> v;
        for (const auto &row : t.rows) {
            v.push_back(percentile ? row.percentile1 : row.decile[0]);
        }
        return v;
    };
    const auto sigma_tag = csv::format_double(params.sigma);
    bottom_chart.add({"decile 1, sigma " + sigma_tag, years, column(base.deciles, false), palette(1)});
    for (std::size_t i = 0; i < variants.size(); ++i) {
        bottom_chart.add({"decile 1, sigma " + csv::format_double(variants[i].sigma), years,
                          column(variants[i].deciles, false), "#000000", true});
    }
    bottom_chart.add({"percentile 1, sigma " + sigma_tag, years, column(base.deciles, true), palette(2)});

    const auto dir = prepare_out(config);
    csv::write_atomic(dir / "deciles.csv", base.deciles.to_csv());
    csv::write_atomic(dir / "ratio.csv", base.ratio_csv());
    csv::write_atomic(dir / "regimes.csv", regimes_to_csv(labels));
    csv::write_atomic(dir / "fig5b.svg", ratio_chart.render());
    csv::write_atomic(dir / "fig6a.svg", decile_chart.render());
    csv::write_atomic(dir / "fig6b.svg", bottom_chart.render());

    for (int year : {1983, 2002, 2015}) {
        if (auto row = base.deciles.at(year)) {
            out << year << ": decile 1 " << fixed(row->decile[0], 4) << ", percentile 1 "
                << fixed(row->percentile1, 5) << '\n';
        }
    }
    out << "mean/median " << base.deciles.years.back() << ": " << fixed(base.mean_median.back(), 3)
        << '\n';
    const auto onset = negative_regime_onset(base.calibration.tau_eff, 5);
    out << "negative regime onset: " << (onset ? std::to_string(*onset) : std::string("none")) << '\n';
    return kOk;
}

int cmd_sensitivity(const RunConfig &config, std::ostream &out, std::ostream &err) {
    require_file(config.shares);
    if (config.sigmas.empty()) {
        throw AnalysisError(AnalysisErrorKind::EmptyInput, "sigma list is empty");
    }
    const auto shares = load_share_series(config.shares);
    const auto report = sensitivity_sweep(shares, config.sigmas, model_params(config), config.seed,
                                          calibration_options(config));
    for (double d : report.duplicates_dropped) {
        err << "warning: duplicate sigma " << csv::format_double(d) << " ignored\n";
    }

    const auto dir = prepare_out(config);
    LineChart chart("Effective reallocation rate by volatility", "year", "tau_eff (1/year)");
    for (std::size_t i = 0; i < report.scenarios.size(); ++i) {
        const auto &run = report.scenarios[i];
        const auto tag = csv::format_double(run.sigma);
        csv::write_atomic(dir / ("sensitivity_" + tag + ".csv"), run.sensitivity_csv());
        const auto &eff = run.calibration.tau_eff;
        chart.add({"sigma " + tag, as_double(eff.years), eff.tau_eff, palette(i), i > 0});

        double mean_eff = 0.0;
        for (double v : eff.tau_eff) {
            mean_eff += v;
        }
        mean_eff /= static_cast<double>(std::max<std::size_t>(eff.size(), 1));
        out << "sigma " << tag << ": mean tau_eff " << fixed(mean_eff, 4) << ", decile 1 in "
            << run.deciles.years.back() << " " << fixed(run.deciles.rows.back().decile[0], 4)
            << '\n';
    }
    if (!report.scenarios.empty()) {
        const auto &eff = report.scenarios.front().calibration.tau_eff;
        if (!eff.years.empty()) {
            chart.add({"zero", {double(eff.years.front()), double(eff.years.back())}, {0.0, 0.0}, "#999999"});
        }
    }
    csv::write_atomic(dir / "fig5a.svg", chart.render());
    return kOk;
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Reallocating geometric Brownian motion: estimate, calibrate and analyse income dynamics"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<double> sigma, mu;
    std::optional<std::string> sigma_policy, sigmas, shares, mean_income, prices;
    std::optional<std::size_t> agents;
    std::optional<int> window, substeps;
    std::optional<std::string> out_dir;

    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--seed", seed, "random seed (u64)");
    app.add_option("--sigma", sigma, "income volatility");
    app.add_option("--sigma-policy", sigma_policy, "mean | fixed:<v>");
    app.add_option("--agents", agents, "population size");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--window", window, "moving-average window (years)");
    app.add_option("--mu", mu, "drift override");
    app.add_option("--substeps", substeps, "Euler substeps per year");
    app.add_option("--sigmas", sigmas, "comma-separated volatilities for sweeps");
    app.add_option("--shares", shares, "bottom-50% share CSV");
    app.add_option("--mean-income", mean_income, "mean income CSV");
    app.add_option("--prices", prices, "comma-separated weekly price CSVs");

    auto *estimate = app.add_subcommand("estimate", "estimate drift and volatility")->fallthrough();
    auto *calibrate = app.add_subcommand("calibrate", "fit the reallocation rate series")->fallthrough();
    auto *regimes = app.add_subcommand("regimes", "simulate fixed-tau regimes")->fallthrough();
    auto *analyze = app.add_subcommand("analyze", "decile, ratio and regime diagnostics")->fallthrough();
    auto *sensitivity = app.add_subcommand("sensitivity", "calibrate across volatilities")->fallthrough();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    RunConfig config;
    try {
        if (!config_path.empty()) {
            apply_config_file(config, config_path);
        }
        auto set = [&](const char *key, const std::optional<std::string> &v) {
            if (v) {
                apply_setting(config, key, *v);
            }
        };
        set("sigma_policy", sigma_policy);
        set("sigmas", sigmas);
        set("shares", shares);
        set("mean_income", mean_income);
        set("prices", prices);
        set("out", out_dir);
        if (seed) config.seed = *seed;
        if (sigma) config.sigma = *sigma;
        if (mu) config.mu = *mu;
        if (agents) config.n_agents = *agents;
        if (window) config.window = *window;
        if (substeps) config.substeps = *substeps;
        validate_numbers(config);
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    try {
        if (*estimate) {
            return cmd_estimate(config, out);
        }
        if (*calibrate) {
            return cmd_calibrate(config, out);
        }
        if (*regimes) {
            return cmd_regimes(config, out);
        }
        if (*analyze) {
            return cmd_analyze(config, out);
        }
        if (*sensitivity) {
            return cmd_sensitivity(config, out, err);
        }
    } catch (const IngestError &e) {
        err << "ingestion error: " << e.what() << '\n';
        return kIngestion;
    } catch (const EstimationError &e) {
        err << "estimation error: " << e.what() << '\n';
        return kEstimation;
    } catch (const CalibrationError &e) {
        err << "calibration error";
        if (e.year()) {
            err << " in " << *e.year();
        }
        err << ": " << e.what() << '\n';
        return kCalibration;
    } catch (const EngineError &e) {
        err << "simulation error: " << e.what() << '\n';
        return kCalibration;
    } catch (const AnalysisError &e) {
        err << "analysis error: " << e.what() << '\n';
        return kAnalysis;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

} // namespace rgbm::cli
