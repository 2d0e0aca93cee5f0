#include "cli/config.hpp"

#include "rgbm/csv_util.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace rgbm::cli {

namespace {

std::string trim(const std::string &s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double to_double(const std::string &key, const std::string &value) {
    double v = 0.0;
    if (!csv::parse_double(value, v)) {
        throw std::invalid_argument(key + ": not a number: '" + value + "'");
    }
    return v;
}

long long to_integer(const std::string &key, const std::string &value) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw std::invalid_argument(key + ": not an integer: '" + value + "'");
    }
    return v;
}

std::filesystem::path resolve(const std::filesystem::path &base, const std::string &value) {
    std::filesystem::path p(value);
    if (p.is_relative() && !base.empty()) {
        return base / p;
    }
    return p;
}

} // namespace

std::vector<double> parse_double_list(const std::string &text) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto comma = text.find(',', start);
        auto item = trim(text.substr(start, comma == std::string::npos ? std::string::npos
                                                                      : comma - start));
        if (!item.empty()) {
            out.push_back(to_double("list", item));
        }
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

void apply_setting(RunConfig &config, const std::string &key, const std::string &value,
                   const std::filesystem::path &base) {
    if (key == "shares") {
        config.shares = resolve(base, value);
    } else if (key == "mean_income") {
        config.mean_income = resolve(base, value);
    } else if (key == "prices") {
        config.prices.clear();
        std::size_t start = 0;
        while (start <= value.size()) {
            auto comma = value.find(',', start);
            auto item = trim(value.substr(start, comma == std::string::npos ? std::string::npos
                                                                           : comma - start));
            if (!item.empty()) {
                config.prices.push_back(resolve(base, item));
            }
            if (comma == std::string::npos) {
                break;
            }
            start = comma + 1;
        }
    } else if (key == "mu") {
        config.mu = to_double(key, value);
    } else if (key == "sigma") {
        config.sigma = to_double(key, value);
    } else if (key == "sigma_policy") {
        config.sigma_policy = parse_sigma_policy(value);
    } else if (key == "agents") {
        const auto n = to_integer(key, value);
        if (n < 0) {
            throw std::invalid_argument("agents must be positive");
        }
        config.n_agents = static_cast<std::size_t>(n);
    } else if (key == "dt") {
        config.dt = to_double(key, value);
    } else if (key == "substeps") {
        config.substeps = static_cast<int>(to_integer(key, value));
    } else if (key == "seed") {
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
        if (ec != std::errc{} || ptr != value.data() + value.size()) {
            throw std::invalid_argument("seed: not an unsigned integer: '" + value + "'");
        }
        config.seed = v;
    } else if (key == "window") {
        config.window = static_cast<int>(to_integer(key, value));
    } else if (key == "zero_band") {
        config.zero_band = to_double(key, value);
    } else if (key == "sigmas") {
        config.sigmas = parse_double_list(value);
    } else if (key == "out") {
        config.out = resolve(base, value);
    } else if (key == "regime_agents") {
        config.regime_agents = static_cast<std::size_t>(to_integer(key, value));
    } else if (key == "regime_years") {
        config.regime_years = static_cast<int>(to_integer(key, value));
    } else if (key == "regime_taus") {
        config.regime_taus = parse_double_list(value);
    } else if (key == "initial_income") {
        config.initial_income = to_double(key, value);
    } else {
        throw std::invalid_argument("unknown config key '" + key + "'");
    }
}

void apply_config_file(RunConfig &config, const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open config file " + path.string());
    }
    const auto base = path.parent_path();
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument(path.string() + ":" + std::to_string(line_no) +
                                        ": expected key = value");
        }
        try {
            apply_setting(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), base);
        } catch (const std::invalid_argument &e) {
            throw std::invalid_argument(path.string() + ":" + std::to_string(line_no) + ": " +
                                        e.what());
        }
    }
}

void validate_numbers(const RunConfig &c) {
    if (c.n_agents < 2) {
        throw std::invalid_argument("agents must be >= 2");
    }
    if (!(c.sigma >= 0.0)) {
        throw std::invalid_argument("sigma must be >= 0");
    }
    if (!(c.dt > 0.0)) {
        throw std::invalid_argument("dt must be > 0");
    }
    if (c.substeps < 1) {
        throw std::invalid_argument("substeps must be >= 1");
    }
    if (c.window < 1) {
        throw std::invalid_argument("window must be >= 1");
    }
    if (!(c.zero_band >= 0.0)) {
        throw std::invalid_argument("zero_band must be >= 0");
    }
    for (double s : c.sigmas) {
        if (!(s >= 0.0)) {
            throw std::invalid_argument("sigmas must be >= 0");
        }
    }
    if (c.regime_agents < 2 || c.regime_years < 1) {
        throw std::invalid_argument("regime_agents must be >= 2 and regime_years >= 1");
    }
}

} // namespace rgbm::cli
