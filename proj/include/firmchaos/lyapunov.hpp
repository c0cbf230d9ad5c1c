#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string_view>

#include "firmchaos/error.hpp"
#include "firmchaos/logistic.hpp"

namespace firmchaos {

enum class LyapunovMethod { derivative_average, trajectory_separation };

enum class StabilityClass { stable, marginal, chaotic };

inline constexpr double kDerivativeFloor = 1e-300;
inline constexpr double kDefaultZeroBand = 0.01;
inline constexpr std::size_t kDefaultLyapunovIterations = 100000;

struct LyapunovEstimate {
    double exponent = 0.0;  // nats per iterate
    LyapunovMethod method = LyapunovMethod::derivative_average;
    std::size_t iterations = 0;
    bool saturated_low = false;
};

inline std::string_view to_string(LyapunovMethod m) {
    return m == LyapunovMethod::derivative_average ? "derivative_average" : "trajectory_separation";
}

inline std::string_view to_string(StabilityClass c) {
    switch (c) {
        case StabilityClass::stable: return "stable";
        case StabilityClass::marginal: return "marginal";
        case StabilityClass::chaotic: return "chaotic";
    }
    return "marginal";
}

/// Mean of ln|f'(x_i)| over n post-transient iterates. |f'| is floored at
/// kDerivativeFloor so superstable orbits yield a finite, flagged estimate.
inline LyapunovEstimate lyapunov_derivative(const LogisticMap& map, double x0, std::size_t transient,
                                            std::size_t n) {
    detail::require_unit(x0, "initial state");
    if (n < 1) throw DomainError("Lyapunov estimate needs at least one iterate");
    double x = advance(map, x0, transient);
    double sum = 0.0;
    bool saturated = false;
    for (std::size_t i = 0; i < n; ++i) {
        double slope = std::abs(map.derivative(x));
        if (slope < kDerivativeFloor) {
            slope = kDerivativeFloor;
            saturated = true;
        }
        sum += std::log(slope);
        x = map(x);
    }
    return {sum / static_cast<double>(n), LyapunovMethod::derivative_average, n, saturated};
}

/// Two-trajectory estimate: a companion orbit is kept delta0 away from the
/// reference orbit and pulled back along the separation direction every
/// renorm_interval steps; the logged growth factors are averaged per iterate.
inline LyapunovEstimate lyapunov_separation(const LogisticMap& map, double x0, double delta0,
                                            std::size_t renorm_interval, std::size_t n,
                                            std::size_t transient = kDefaultTransient) {
    detail::require_unit(x0, "initial state");
    if (!(delta0 > 0.0 && delta0 <= 1e-6)) throw DomainError("delta0 must lie in (0, 1e-6]");
    if (renorm_interval < 1 || n < renorm_interval) {
        throw DomainError("need n >= renorm_interval >= 1");
    }

    auto place = [delta0](double reference, double direction) {
        const double up = reference + delta0;
        const double down = reference - delta0;
        if (direction >= 0.0) return up <= 1.0 ? up : down;
        return down >= 0.0 ? down : up;
    };

    double x = advance(map, x0, transient);
    double y = place(x, 1.0);
    double sum = 0.0;
    bool restarted = false;
    std::size_t done = 0;
    while (done < n) {
        const std::size_t block = std::min(renorm_interval, n - done);
        for (std::size_t i = 0; i < block; ++i) {
            x = map(x);
            y = map(y);
        }
        done += block;
        const double separation = y - x;
        if (separation == 0.0) {
            if (restarted) {
                throw DegenerateSeparationError("trajectory separation collapsed to zero at lambda " +
                                                detail::fmt_real(map.lambda()));
            }
            restarted = true;
            y = place(x, 1.0);
            continue;
        }
        sum += std::log(std::abs(separation) / delta0);
        y = place(x, separation);
    }
    return {sum / static_cast<double>(n), LyapunovMethod::trajectory_separation, n, false};
}

inline StabilityClass classify(const LyapunovEstimate& estimate, double zero_band = kDefaultZeroBand) {
    if (!(zero_band > 0.0)) throw DomainError("zero band must be positive");
    if (estimate.exponent > zero_band) return StabilityClass::chaotic;
    if (estimate.exponent < -zero_band) return StabilityClass::stable;
    return StabilityClass::marginal;
}

}  // namespace firmchaos
