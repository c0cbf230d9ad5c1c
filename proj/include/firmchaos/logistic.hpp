#pragma once

// The logistic map x -> lambda * x * (1 - x) on the unit interval, and the
// orbit bookkeeping shared by every analysis in this library.

#include <cmath>
#include <cstdio>
#include <cstddef>
#include <string>
#include <vector>

#include "firmchaos/error.hpp"

namespace firmchaos {

inline constexpr double kDefaultX0 = 0.371;
inline constexpr std::size_t kDefaultTransient = 1000;
inline constexpr std::size_t kDefaultSamples = 1000;

/// Accumulation point of the period-doubling cascade of the logistic map.
inline constexpr double kAccumulationPoint = 3.5699456718709449;

namespace detail {

inline std::string fmt_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void require_unit(double x, const char* what) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw DomainError(std::string(what) + " must lie in [0, 1], got " + fmt_real(x));
    }
}

}  // namespace detail

class LogisticMap {
public:
    explicit LogisticMap(double lambda) : lambda_(lambda) {
        if (!(lambda >= 0.0 && lambda <= 4.0)) {
            throw DomainError("control parameter must lie in [0, 4], got " + detail::fmt_real(lambda));
        }
    }

    double lambda() const noexcept { return lambda_; }

    /// Unchecked step; callers guarantee x in [0, 1].
    double operator()(double x) const noexcept { return lambda_ * x * (1.0 - x); }

    double derivative(double x) const noexcept { return lambda_ * (1.0 - 2.0 * x); }

    friend bool operator==(const LogisticMap&, const LogisticMap&) = default;

private:
    double lambda_;
};

struct Orbit {
    LogisticMap map;
    double x0;
    std::size_t transient_len;
    std::vector<double> samples;
};

inline double step(const LogisticMap& map, double x) {
    detail::require_unit(x, "state");
    return map(x);
}

/// Advances x by n steps without recording.
inline double advance(const LogisticMap& map, double x, std::size_t n) noexcept {
    for (std::size_t i = 0; i < n; ++i) x = map(x);
    return x;
}

inline Orbit iterate(const LogisticMap& map, double x0, std::size_t transient_len,
                     std::size_t sample_len) {
    detail::require_unit(x0, "initial state");
    Orbit orbit{map, x0, transient_len, {}};
    orbit.samples.reserve(sample_len);
    double x = advance(map, x0, transient_len);
    for (std::size_t i = 0; i < sample_len; ++i) {
        x = map(x);
        orbit.samples.push_back(x);
    }
    return orbit;
}

/// Fixed points inside [0, 1], ascending.
inline std::vector<double> fixed_points(const LogisticMap& map) {
    if (map.lambda() <= 1.0) return {0.0};
    return {0.0, 1.0 - 1.0 / map.lambda()};
}

}  // namespace firmchaos
