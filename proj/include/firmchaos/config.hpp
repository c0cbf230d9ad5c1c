#pragma once

// Run configuration: every tunable of the engine in one place, loadable from
// an INI file whose sections mirror the library modules.
//
//   [dynamics]     x0, transient, samples
//   [bifurcation]  lambda_min, lambda_max, grid, period_tolerance, max_period,
//                  max_doublings, resolution, jump_threshold, threads
//   [lyapunov]     n, transient, delta0, renorm_interval, zero_band
//   [forcing]      amplitude_min, amplitude_max, lambda_min, lambda_max,
//                  t_start, t_end, t_step
//   [cycle.NAME]   amplitude, period, phase   (business cycles)
//   [risk.NAME]    amplitude, period, phase   (all seven categories)
//   [asset.NAME]   amplitude, period, phase   (portfolio asset classes)
//   [stability]    n, delta0, epsilon, short_steps, long_steps, horizon,
//                  saturation_cap

#include <charconv>
#include <cstddef>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "firmchaos/bifurcation.hpp"
#include "firmchaos/error.hpp"
#include "firmchaos/forcing.hpp"
#include "firmchaos/lyapunov.hpp"
#include "firmchaos/stability.hpp"

namespace firmchaos {

inline constexpr const char* kConfigEnvVar = "FIRMCHAOS_CONFIG";

struct LyapunovSettings {
    std::size_t n = kDefaultLyapunovIterations;
    std::size_t transient = kDefaultTransient;
    double delta0 = 1e-8;
    std::size_t renorm_interval = 1;
    double zero_band = kDefaultZeroBand;
};

struct ForcingSettings {
    double t_start = 0.0;
    double t_end = 100.0;
    double t_step = 0.25;
};

/// Illustrative seven-category profile: equal amplitudes summing to 1 and
/// periods of 1..7 years. No canonical values exist; override in the config.
inline RiskProfile illustrative_risk_profile() {
    RiskProfile profile;
    double period = 1.0;
    for (RiskCategory c : kRiskCategories) {
        profile.set(c, CycleSpec{std::string(to_string(c)), 1.0 / 7.0, period, 0.0});
        period += 1.0;
    }
    return profile;
}

/// Illustrative asset-class oscillations whose amplitudes sum to 1.
inline std::vector<CycleSpec> illustrative_asset_classes() {
    return {{"equities", 0.4, 3.5, 0.0},
            {"bonds", 0.2, 7.0, 0.0},
            {"commodities", 0.3, 5.0, 0.0},
            {"real_estate", 0.1, 18.0, 0.0}};
}

struct RunConfig {
    SweepConfig sweep{};
    LyapunovSettings lyapunov{};
    Calibration calibration{};
    ForcingSettings forcing{};
    std::vector<CycleSpec> cycles = canonical_business_cycles();
    RiskProfile risk = illustrative_risk_profile();
    std::vector<CycleSpec> assets = illustrative_asset_classes();
    StabilityParams stability{};

    void validate() const {
        sweep.validate();
        calibration.validate();
        stability.validate();
        if (lyapunov.n < 1) throw ConfigError("[lyapunov] n must be >= 1");
        if (!(lyapunov.delta0 > 0.0 && lyapunov.delta0 <= 1e-6)) throw ConfigError("[lyapunov] delta0 must lie in (0, 1e-6]");
        if (lyapunov.renorm_interval < 1 || lyapunov.renorm_interval > lyapunov.n) {
            throw ConfigError("[lyapunov] renorm_interval must lie in [1, n]");
        }
        if (!(lyapunov.zero_band > 0.0)) throw ConfigError("[lyapunov] zero_band must be positive");
        if (!(forcing.t_step > 0.0 && forcing.t_end >= forcing.t_start)) {
            throw ConfigError("[forcing] needs t_step > 0 and t_end >= t_start");
        }
        for (const CycleSpec& c : cycles) c.validate();
        for (const CycleSpec& c : assets) c.validate();
    }
};

namespace detail {

using Ptree = boost::property_tree::ptree;

class SectionReader {
public:
    SectionReader(std::string name, const Ptree& tree) : name_(std::move(name)), tree_(tree) {}

    template <class T>
    void read(const char* key, T& target) {
        seen_.insert(key);
        const auto child = tree_.get_child_optional(Ptree::path_type(key, '\0'));
        if (!child) return;
        const std::string text = child->data();
        if constexpr (std::is_same_v<T, std::string>) {
            target = text;
        } else {
            T value{};
            const char* first = text.data();
            const char* last = first + text.size();
            if (first != last && *first == '+') ++first;
            auto [ptr, ec] = std::from_chars(first, last, value);
            if (ec != std::errc{} || ptr != last || text.empty()) {
                throw ConfigError("[" + name_ + "] " + key + ": invalid value '" + text + "'");
            }
            target = value;
        }
    }

    void reject_unknown() const {
        for (const auto& [key, child] : tree_) {
            if (!seen_.count(key)) throw ConfigError("[" + name_ + "] unknown key '" + key + "'");
        }
    }

private:
    std::string name_;
    const Ptree& tree_;
    std::set<std::string, std::less<>> seen_;
};

inline CycleSpec read_cycle(const std::string& section, const std::string& name, const Ptree& tree) {
    CycleSpec spec{name, 0.0, 1.0, 0.0};
    SectionReader r(section, tree);
    r.read("amplitude", spec.amplitude);
    r.read("period", spec.period);
    r.read("phase", spec.phase);
    r.reject_unknown();
    try {
        spec.validate();
    } catch (const DomainError& e) {
        throw ConfigError("[" + section + "] " + e.what());
    }
    return spec;
}

}  // namespace detail

/// Applies an INI document on top of `base`. Unknown sections or keys are rejected.
inline RunConfig parse_config(std::istream& in, RunConfig base = {}) {
    detail::Ptree pt;
    try {
        boost::property_tree::ini_parser::read_ini(in, pt);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    RunConfig cfg = std::move(base);
    std::vector<CycleSpec> cycles, assets;
    std::map<std::string, CycleSpec, std::less<>> risks;
    for (const auto& [section, tree] : pt) {
        if (tree.empty() && !tree.data().empty()) {
            throw ConfigError("config key '" + section + "' must live inside a [section]");
        }
        const auto dot = section.find('.');
        const std::string kind = section.substr(0, dot);
        const std::string name = dot == std::string::npos ? std::string{} : section.substr(dot + 1);

        if (dot != std::string::npos) {
            if (name.empty()) throw ConfigError("[" + section + "] needs a name after the dot");
            if (kind == "cycle") {
                cycles.push_back(detail::read_cycle(section, name, tree));
            } else if (kind == "asset") {
                assets.push_back(detail::read_cycle(section, name, tree));
            } else if (kind == "risk") {
                risks.emplace(name, detail::read_cycle(section, name, tree));
            } else {
                throw ConfigError("unknown config section [" + section + "]");
            }
            continue;
        }

        detail::SectionReader r(section, tree);
        if (section == "dynamics") {
            r.read("x0", cfg.sweep.x0);
            r.read("transient", cfg.sweep.transient_len);
            r.read("samples", cfg.sweep.sample_len);
        } else if (section == "bifurcation") {
            r.read("lambda_min", cfg.sweep.lambda_min);
            r.read("lambda_max", cfg.sweep.lambda_max);
            r.read("grid", cfg.sweep.grid_points);
            r.read("period_tolerance", cfg.sweep.period.tolerance);
            r.read("max_period", cfg.sweep.period.max_period);
            r.read("max_doublings", cfg.sweep.max_doublings);
            r.read("resolution", cfg.sweep.doubling_resolution);
            r.read("jump_threshold", cfg.sweep.jump_threshold);
            r.read("threads", cfg.sweep.threads);
        } else if (section == "lyapunov") {
            r.read("n", cfg.lyapunov.n);
            r.read("transient", cfg.lyapunov.transient);
            r.read("delta0", cfg.lyapunov.delta0);
            r.read("renorm_interval", cfg.lyapunov.renorm_interval);
            r.read("zero_band", cfg.lyapunov.zero_band);
        } else if (section == "forcing") {
            r.read("amplitude_min", cfg.calibration.amplitude_min);
            r.read("amplitude_max", cfg.calibration.amplitude_max);
            r.read("lambda_min", cfg.calibration.lambda_min);
            r.read("lambda_max", cfg.calibration.lambda_max);
            r.read("t_start", cfg.forcing.t_start);
            r.read("t_end", cfg.forcing.t_end);
            r.read("t_step", cfg.forcing.t_step);
        } else if (section == "stability") {
            std::string horizon(to_string(cfg.stability.horizon));
            r.read("n", cfg.stability.n);
            r.read("delta0", cfg.stability.delta0);
            r.read("epsilon", cfg.stability.epsilon);
            r.read("short_steps", cfg.stability.short_steps);
            r.read("long_steps", cfg.stability.long_steps);
            r.read("saturation_cap", cfg.stability.saturation_cap);
            r.read("horizon", horizon);
            const auto parsed = parse_horizon(horizon);
            if (!parsed) throw ConfigError("[stability] horizon must be short_1y or long_3y");
            cfg.stability.horizon = *parsed;
        } else {
            throw ConfigError("unknown config section [" + section + "]");
        }
        r.reject_unknown();
    }

    if (!cycles.empty()) cfg.cycles = std::move(cycles);
    if (!assets.empty()) cfg.assets = std::move(assets);
    if (!risks.empty()) cfg.risk = RiskProfile::from_map(risks);
    cfg.validate();
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in);
}

}  // namespace firmchaos
