#pragma once

// Firm stability across the eight theory channels: per-channel stability
// magnitudes, pairwise trajectory-closeness verdicts and their aggregate.

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "firmchaos/error.hpp"
#include "firmchaos/logistic.hpp"
#include "firmchaos/lyapunov.hpp"
#include "firmchaos/parallel.hpp"
#include "firmchaos/theory.hpp"

namespace firmchaos {

struct TheoryChannel {
    Theory theory;
    LogisticMap map;
    double x0 = kDefaultX0;
    std::optional<LyapunovEstimate> exponent;
};

enum class Horizon { short_1y, long_3y };

inline std::string_view to_string(Horizon h) { return h == Horizon::short_1y ? "short_1y" : "long_3y"; }

inline std::optional<Horizon> parse_horizon(std::string_view label) {
    if (label == "short_1y" || label == "short") return Horizon::short_1y;
    if (label == "long_3y" || label == "long") return Horizon::long_3y;
    return std::nullopt;
}

struct StabilityParams {
    std::size_t n = kDefaultLyapunovIterations;
    std::size_t transient = kDefaultTransient;
    double delta0 = 1e-6;
    double epsilon = 1e-3;
    std::size_t short_steps = 10000;
    std::size_t long_steps = 30000;
    Horizon horizon = Horizon::short_1y;
    double zero_band = kDefaultZeroBand;
    /// Magnitude reported for channels whose exponent hit the derivative floor.
    double saturation_cap = 30.0;
    std::size_t threads = 0;

    std::size_t horizon_steps() const noexcept {
        return horizon == Horizon::short_1y ? short_steps : long_steps;
    }

    void validate() const {
        if (n < 1) throw ConfigError("stability needs n >= 1");
        if (!(delta0 > 0.0 && delta0 < epsilon)) throw ConfigError("stability needs 0 < delta0 < epsilon");
        if (short_steps < 1 || long_steps < 1) throw ConfigError("stability horizons must be >= 1 step");
        if (!(zero_band > 0.0)) throw ConfigError("zero band must be positive");
    }
};

/// Stability magnitude: the negated Lyapunov exponent, so positive means
/// stable. Saturated (superstable) channels report +saturation_cap.
inline double magnitude_of(const LyapunovEstimate& estimate, double saturation_cap = 30.0) {
    return estimate.saturated_low ? saturation_cap : -estimate.exponent;
}

inline double channel_magnitude(const TheoryChannel& channel, std::size_t n,
                                std::size_t transient = kDefaultTransient, double saturation_cap = 30.0) {
    return magnitude_of(lyapunov_derivative(channel.map, channel.x0, transient, n), saturation_cap);
}

/// Starts a second trajectory delta0 from the channel's x0 and reports
/// whether the two stay closer than epsilon for every one of horizon_steps
/// steps. The first breach ends the check.
inline bool trajectories_stay_close(const TheoryChannel& channel, double delta0, double epsilon,
                                    std::size_t horizon_steps) {
    detail::require_unit(channel.x0, "channel initial state");
    double x = channel.x0;
    double y = x + delta0 <= 1.0 ? x + delta0 : x - delta0;
    for (std::size_t i = 0; i < horizon_steps; ++i) {
        x = channel.map(x);
        y = channel.map(y);
        if (!(std::abs(y - x) < epsilon)) return false;
    }
    return true;
}

inline bool pairwise_stable(const TheoryChannel& a, const TheoryChannel& b, double delta0, double epsilon,
                            std::size_t horizon_steps) {
    if (!(delta0 > 0.0 && delta0 < epsilon)) throw DomainError("need 0 < delta0 < epsilon");
    if (horizon_steps < 1) throw DomainError("horizon must be at least one step");
    return trajectories_stay_close(a, delta0, epsilon, horizon_steps) &&
           trajectories_stay_close(b, delta0, epsilon, horizon_steps);
}

struct PairVerdict {
    Theory a;
    Theory b;
    bool stable = false;
    bool horizon_stable = false;  // finite-horizon result before the exponent cross-check
    bool demoted = false;         // horizon passed but a channel has a positive exponent
};

struct FirmStabilityReport {
    std::vector<TheoryChannel> channels;  // enumeration order
    std::array<double, kTheoryCount> magnitudes{};
    std::array<bool, kTheoryCount> channel_close{};  // per-channel finite-horizon verdicts
    std::vector<PairVerdict> pairwise;  // the 28 unordered pairs, a < b
    bool firm_stable = false;
    double total_stability = 0.0;
    Horizon horizon = Horizon::short_1y;
    std::size_t horizon_steps = 0;

    double magnitude(Theory t) const { return magnitudes[index_of(t)]; }

    /// Symmetric lookup; a channel paired with itself reports its own closeness verdict.
    bool pair_stable(Theory a, Theory b) const {
        if (a == b) return channel_close[index_of(a)];
        if (index_of(b) < index_of(a)) std::swap(a, b);
        for (const PairVerdict& p : pairwise) {
            if (p.a == a && p.b == b) return p.stable;
        }
        return false;
    }
};

/// Orders channels by theory, rejecting missing or repeated theories.
inline std::vector<TheoryChannel> order_channels(std::span<const TheoryChannel> channels) {
    std::array<const TheoryChannel*, kTheoryCount> slots{};
    for (const TheoryChannel& c : channels) {
        auto& slot = slots[index_of(c.theory)];
        if (slot) throw TheorySetError("duplicate theory channel '" + std::string(to_string(c.theory)) + "'");
        slot = &c;
    }
    std::vector<TheoryChannel> ordered;
    ordered.reserve(kTheoryCount);
    for (Theory t : kTheories) {
        if (!slots[index_of(t)]) throw TheorySetError("missing theory channel '" + std::string(to_string(t)) + "'");
        ordered.push_back(*slots[index_of(t)]);
    }
    return ordered;
}

inline FirmStabilityReport evaluate_firm(std::span<const TheoryChannel> channels, const StabilityParams& params) {
    params.validate();
    FirmStabilityReport report;
    report.channels = order_channels(channels);
    report.horizon = params.horizon;
    report.horizon_steps = params.horizon_steps();

    auto& close = report.channel_close;
    parallel_for(kTheoryCount, params.threads, [&](std::size_t i) {
        TheoryChannel& ch = report.channels[i];
        ch.exponent = lyapunov_derivative(ch.map, ch.x0, params.transient, params.n);
        report.magnitudes[i] = magnitude_of(*ch.exponent, params.saturation_cap);
        close[i] = trajectories_stay_close(ch, params.delta0, params.epsilon, report.horizon_steps);
    });

    std::array<bool, kTheoryCount> expanding{};
    for (std::size_t i = 0; i < kTheoryCount; ++i) {
        const LyapunovEstimate& e = *report.channels[i].exponent;
        expanding[i] = !e.saturated_low && e.exponent > params.zero_band;
    }

    report.firm_stable = true;
    for (std::size_t i = 0; i < kTheoryCount; ++i) {
        for (std::size_t j = i + 1; j < kTheoryCount; ++j) {
            PairVerdict v{kTheories[i], kTheories[j]};
            v.horizon_stable = close[i] && close[j];
            v.demoted = v.horizon_stable && (expanding[i] || expanding[j]);
            v.stable = v.horizon_stable && !v.demoted;
            report.firm_stable = report.firm_stable && v.stable;
            report.pairwise.push_back(v);
        }
    }

    report.total_stability = 0.0;
    for (double m : report.magnitudes) report.total_stability += m;
    return report;
}

}  // namespace firmchaos
