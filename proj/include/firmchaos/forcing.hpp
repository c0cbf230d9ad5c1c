#pragma once

// Oscillatory forcings (business cycles, risk categories) and the
// calibration that turns a forcing amplitude into a control parameter.

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "firmchaos/error.hpp"
#include "firmchaos/logistic.hpp"

namespace firmchaos {

struct CycleSpec {
    std::string name;
    double amplitude = 0.0;
    double period = 1.0;  // years
    double phase = 0.0;   // radians

    void validate() const {
        if (!(amplitude >= 0.0)) throw DomainError("cycle '" + name + "': amplitude must be >= 0");
        if (!(period > 0.0)) throw DomainError("cycle '" + name + "': period must be > 0");
        if (!std::isfinite(phase)) throw DomainError("cycle '" + name + "': phase must be finite");
    }

    double value(double t) const { return amplitude * std::sin(2.0 * std::numbers::pi * t / period + phase); }
};

/// Kitchin, Juglar, Kuznets and Kondratieff cycles at the midpoints of their
/// period ranges, zero phase, equal amplitudes summing to `total_amplitude`.
inline std::vector<CycleSpec> canonical_business_cycles(double total_amplitude = 1.0) {
    const double a = total_amplitude / 4.0;
    return {{"kitchin", a, 5.0, 0.0},
            {"juglar", a, 9.0, 0.0},
            {"kuznets", a, 20.0, 0.0},
            {"kondratieff", a, 52.5, 0.0}};
}

inline double superpose(std::span<const CycleSpec> cycles, double t) {
    double sum = 0.0;
    for (const CycleSpec& c : cycles) sum += c.value(t);
    return sum;
}

inline double total_amplitude(std::span<const CycleSpec> cycles) {
    double sum = 0.0;
    for (const CycleSpec& c : cycles) sum += c.amplitude;
    return sum;
}

enum class RiskCategory { operational, product_market, input, tax, regulatory, legal, financial };

inline constexpr std::array<RiskCategory, 7> kRiskCategories{
    RiskCategory::operational, RiskCategory::product_market, RiskCategory::input, RiskCategory::tax,
    RiskCategory::regulatory,  RiskCategory::legal,          RiskCategory::financial};

inline constexpr std::array<std::string_view, 7> kRiskLabels{
    "operational", "product_market", "input", "tax", "regulatory", "legal", "financial"};

inline std::string_view to_string(RiskCategory c) { return kRiskLabels[static_cast<std::size_t>(c)]; }

inline std::optional<RiskCategory> parse_risk_category(std::string_view label) {
    for (std::size_t i = 0; i < kRiskLabels.size(); ++i) {
        if (kRiskLabels[i] == label) return kRiskCategories[i];
    }
    return std::nullopt;
}

/// One oscillation per risk category; all seven are always present.
class RiskProfile {
public:
    RiskProfile() {
        for (RiskCategory c : kRiskCategories) at(c).name = std::string(to_string(c));
    }

    /// Builds a profile from a label-keyed map that must name each category exactly once.
    static RiskProfile from_map(const std::map<std::string, CycleSpec, std::less<>>& components) {
        RiskProfile profile;
        for (const auto& [label, spec] : components) {
            if (!parse_risk_category(label)) throw ConfigError("unknown risk category '" + label + "'");
        }
        for (RiskCategory c : kRiskCategories) {
            auto it = components.find(to_string(c));
            if (it == components.end()) {
                throw ConfigError("risk profile is missing category '" + std::string(to_string(c)) + "'");
            }
            profile.set(c, it->second);
        }
        return profile;
    }

    void set(RiskCategory c, CycleSpec spec) {
        spec.validate();
        spec.name = std::string(to_string(c));
        at(c) = std::move(spec);
    }

    const CycleSpec& operator[](RiskCategory c) const { return components_[static_cast<std::size_t>(c)]; }

    std::span<const CycleSpec> components() const noexcept { return components_; }

private:
    CycleSpec& at(RiskCategory c) { return components_[static_cast<std::size_t>(c)]; }

    std::array<CycleSpec, 7> components_{};
};

/// Instantaneous total risk: the superposition of the seven category oscillations.
inline double total_risk(const RiskProfile& profile, double t) { return superpose(profile.components(), t); }

/// Static aggregate: the sum of the seven category amplitudes.
inline double total_risk_amplitude(const RiskProfile& profile) { return total_amplitude(profile.components()); }

/// Maps a forcing amplitude to a control parameter.
template <class C>
concept LambdaCalibration = requires(const C& c, double amplitude) {
    { c.to_lambda(amplitude) } -> std::convertible_to<double>;
    { c.lambda_min } -> std::convertible_to<double>;
    { c.lambda_max } -> std::convertible_to<double>;
};

/// Affine amplitude -> lambda calibration, clamped to [lambda_min, lambda_max].
struct Calibration {
    double amplitude_min = 0.0;
    double amplitude_max = 1.0;
    double lambda_min = 2.5;
    double lambda_max = 4.0;

    void validate() const {
        if (!(amplitude_min < amplitude_max)) throw ConfigError("calibration needs amplitude_min < amplitude_max");
        if (!(lambda_min >= 0.0 && lambda_min < lambda_max && lambda_max <= 4.0)) {
            throw ConfigError("calibration needs 0 <= lambda_min < lambda_max <= 4");
        }
    }

    double to_lambda(double amplitude) const {
        const double u = (amplitude - amplitude_min) / (amplitude_max - amplitude_min);
        const double lambda = lambda_min + (lambda_max - lambda_min) * u;
        return std::clamp(lambda, lambda_min, lambda_max);
    }
};

/// Logistic-shaped alternative: lambda rises smoothly from lambda_min to
/// lambda_max, reaching the midpoint at amplitude `center`.
struct SigmoidCalibration {
    double center = 0.5;
    double steepness = 10.0;
    double lambda_min = 2.5;
    double lambda_max = 4.0;

    double to_lambda(double amplitude) const {
        const double s = 1.0 / (1.0 + std::exp(-steepness * (amplitude - center)));
        return std::clamp(lambda_min + (lambda_max - lambda_min) * s, lambda_min, lambda_max);
    }
};

static_assert(LambdaCalibration<Calibration>);
static_assert(LambdaCalibration<SigmoidCalibration>);

inline double map_to_lambda(double amplitude, const Calibration& cal) { return cal.to_lambda(amplitude); }

struct DrivePoint {
    double t = 0.0;
    double amplitude = 0.0;
    double lambda = 0.0;
};

template <LambdaCalibration Cal>
std::vector<DrivePoint> drive(std::span<const CycleSpec> cycles, const Cal& cal, std::span<const double> t_grid) {
    if (t_grid.empty()) throw DomainError("drive needs a non-empty time grid");
    std::vector<DrivePoint> trace;
    trace.reserve(t_grid.size());
    for (double t : t_grid) {
        const double a = superpose(cycles, t);
        trace.push_back({t, a, cal.to_lambda(a)});
    }
    return trace;
}

template <LambdaCalibration Cal>
std::vector<DrivePoint> drive(const RiskProfile& profile, const Cal& cal, std::span<const double> t_grid) {
    return drive(profile.components(), cal, t_grid);
}

/// Evenly spaced times t0, t0 + dt, ... not exceeding t1.
inline std::vector<double> time_grid(double t0, double t1, double dt) {
    if (!(dt > 0.0) || !(t1 >= t0)) throw DomainError("time grid needs dt > 0 and t1 >= t0");
    const auto steps = static_cast<std::size_t>(std::floor((t1 - t0) / dt + 1e-9));
    std::vector<double> grid(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i) grid[i] = t0 + dt * static_cast<double>(i);
    return grid;
}

}  // namespace firmchaos
