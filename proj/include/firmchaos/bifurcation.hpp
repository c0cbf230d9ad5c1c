#pragma once

// Parameter sweeps of the logistic map: bifurcation diagrams, period
// detection, location of the period-doubling cascade and of attractor
// crises.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "firmchaos/error.hpp"
#include "firmchaos/logistic.hpp"
#include "firmchaos/parallel.hpp"

namespace firmchaos {

struct PeriodOptions {
    double tolerance = 1e-4;
    std::size_t max_period = 64;
    /// A periodic verdict counts as converged once the orbit repeats to this
    /// precision; until then the transient keeps doubling.
    double settle_tolerance = 1e-10;
    /// Transient cap while bisecting for doubling points.
    std::size_t max_transient = std::size_t{1000} << 13;
    /// Transient cap while classifying the coarse grid.
    std::size_t scan_max_transient = std::size_t{1000} << 8;
};

struct PeriodVerdict {
    enum class Kind { periodic, aperiodic };

    Kind kind = Kind::aperiodic;
    std::size_t period = 0;  // meaningful only when periodic
    double tolerance = 0.0;
    bool settled = true;

    bool periodic() const noexcept { return kind == Kind::periodic; }

    static PeriodVerdict make_periodic(std::size_t p, double tol) {
        return {Kind::periodic, p, tol, true};
    }
    static PeriodVerdict make_aperiodic(double tol) { return {Kind::aperiodic, 0, tol, true}; }

    friend bool operator==(const PeriodVerdict&, const PeriodVerdict&) = default;
};

struct SweepConfig {
    double lambda_min = 2.5;
    double lambda_max = 4.0;
    std::size_t grid_points = 2000;
    std::size_t transient_len = kDefaultTransient;
    std::size_t sample_len = kDefaultSamples;
    double x0 = kDefaultX0;
    PeriodOptions period{};
    std::size_t max_doublings = 4;
    double doubling_resolution = 1e-4;
    double jump_threshold = 1.5;
    std::size_t threads = 0;

    void validate() const {
        if (!(lambda_min >= 0.0 && lambda_min < lambda_max && lambda_max <= 4.0)) {
            throw ConfigError("sweep range must satisfy 0 <= lambda_min < lambda_max <= 4, got [" +
                              detail::fmt_real(lambda_min) + ", " + detail::fmt_real(lambda_max) + "]");
        }
        if (grid_points < 2) throw ConfigError("sweep needs at least 2 grid points");
        if (sample_len < 1) throw ConfigError("sweep needs at least 1 sample per row");
        if (!(x0 >= 0.0 && x0 <= 1.0)) throw ConfigError("x0 must lie in [0, 1]");
        if (!(period.tolerance > 0.0)) throw ConfigError("period tolerance must be positive");
        if (period.max_period < 1) throw ConfigError("max_period must be at least 1");
        if (!(doubling_resolution > 0.0)) throw ConfigError("doubling resolution must be positive");
        if (!(jump_threshold > 1.0)) throw ConfigError("crisis jump threshold must exceed 1");
    }

    double lambda_at(std::size_t i) const noexcept {
        if (i + 1 == grid_points) return lambda_max;
        return lambda_min + (lambda_max - lambda_min) * static_cast<double>(i) /
                                static_cast<double>(grid_points - 1);
    }
};

struct DiagramRow {
    double lambda = 0.0;
    std::vector<double> samples;
    PeriodVerdict verdict;
    std::size_t clusters = 0;
    double width = 0.0;
};

struct Crisis {
    double lambda = 0.0;
    double width_before = 0.0;
    double width_after = 0.0;
};

struct BifurcationDiagram {
    std::vector<DiagramRow> rows;
    std::vector<double> doubling_points;
    std::optional<double> accumulation_estimate;
    std::vector<Crisis> crises;
};

/// Largest |samples[i] - samples[i + p]| over the valid range.
inline double periodic_deviation(std::span<const double> samples, std::size_t p) {
    double worst = 0.0;
    for (std::size_t i = 0; i + p < samples.size(); ++i) {
        worst = std::max(worst, std::abs(samples[i] - samples[i + p]));
    }
    return worst;
}

/// Smallest p <= max_period with |s[i] - s[i+p]| < tolerance for every valid i.
inline PeriodVerdict detect_period(std::span<const double> samples, double tolerance,
                                   std::size_t max_period) {
    if (samples.empty()) throw DomainError("period detection needs at least one sample");
    if (!(tolerance > 0.0)) throw DomainError("period tolerance must be positive");
    for (std::size_t p = 1; p <= max_period; ++p) {
        bool repeats = true;
        for (std::size_t i = 0; i + p < samples.size(); ++i) {
            if (!(std::abs(samples[i] - samples[i + p]) < tolerance)) {
                repeats = false;
                break;
            }
        }
        if (repeats) return PeriodVerdict::make_periodic(p, tolerance);
    }
    return PeriodVerdict::make_aperiodic(tolerance);
}

/// Period of the long-run orbit. Whenever the verdict is inconclusive
/// (aperiodic, or periodic but still relaxing) the orbit is run for as many
/// extra iterates again as it has already discarded, up to max_transient.
/// A verdict reached at the cap is returned with settled = false.
inline PeriodVerdict settled_period(const LogisticMap& map, double x0, std::size_t transient,
                                    std::size_t sample_len, const PeriodOptions& opts,
                                    std::size_t max_transient) {
    detail::require_unit(x0, "initial state");
    std::vector<double> samples(std::max<std::size_t>(sample_len, 2));
    double x = advance(map, x0, transient);
    std::size_t burned = transient;
    for (;;) {
        for (double& s : samples) s = x = map(x);
        PeriodVerdict verdict = detect_period(samples, opts.tolerance, opts.max_period);
        if (verdict.periodic() &&
            periodic_deviation(samples, verdict.period) <= opts.settle_tolerance) {
            return verdict;
        }
        if (burned >= max_transient) {
            verdict.settled = false;
            return verdict;
        }
        const std::size_t extra = std::max({burned, samples.size(), std::size_t{1}});
        x = advance(map, x, extra);
        burned += extra;
    }
}

/// Number of groups left after splitting the sorted samples at every gap of
/// at least `tolerance`.
inline std::size_t cluster_count(std::span<const double> samples, double tolerance) {
    if (samples.empty()) return 0;
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    std::size_t clusters = 1;
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i] - sorted[i - 1] >= tolerance) ++clusters;
    }
    return clusters;
}

inline constexpr double kWidthCell = 0.01;

/// Extent of [0, 1] visited by the samples: the number of distinct cells of
/// size `cell` that contain a sample, times the cell size.
inline double attractor_width(std::span<const double> samples, double cell = kWidthCell) {
    const auto cells = static_cast<long>(std::ceil(1.0 / cell));
    std::vector<long> hit;
    hit.reserve(samples.size());
    for (double s : samples) hit.push_back(std::clamp(static_cast<long>(std::floor(s / cell)), 0L, cells - 1));
    std::sort(hit.begin(), hit.end());
    const auto distinct = std::unique(hit.begin(), hit.end()) - hit.begin();
    return static_cast<double>(distinct) * cell;
}

/// Flags rows where the chaotic attractor expands abruptly. Only aperiodic
/// rows beyond `chaos_onset` take part. Each row's width is compared with the
/// widest chaotic attractor seen so far in the sweep; a ratio above
/// jump_threshold is a crisis.
inline std::vector<Crisis> detect_crises(std::span<const DiagramRow> rows, double jump_threshold,
                                         double chaos_onset = kAccumulationPoint) {
    if (!(jump_threshold > 1.0)) throw DomainError("crisis jump threshold must exceed 1");
    std::vector<Crisis> crises;
    std::optional<double> envelope;
    for (const DiagramRow& row : rows) {
        if (!(row.lambda > chaos_onset) || row.verdict.periodic()) continue;
        if (envelope && row.width > jump_threshold * *envelope) {
            crises.push_back({row.lambda, *envelope, row.width});
        }
        envelope = std::max(envelope.value_or(row.width), row.width);
    }
    return crises;
}

namespace detail {

inline bool is_power_of_two(std::size_t p) noexcept { return p != 0 && (p & (p - 1)) == 0; }

/// True once the orbit has left the period-`period` regime.
inline bool exceeds(const PeriodVerdict& v, std::size_t period) noexcept {
    return !(v.periodic() && v.period <= period);
}

/// Walks the grid from lambda_min and bisects every transition of the
/// period-doubling cascade it meets. Stops at the first row that is neither
/// a continuation of the cascade nor periodic with a power-of-two period.
inline std::vector<double> locate_doublings(const SweepConfig& cfg, std::size_t max_doublings) {
    const PeriodOptions& opts = cfg.period;
    auto classify = [&](double lambda, std::size_t cap) {
        return settled_period(LogisticMap(lambda), cfg.x0, cfg.transient_len, cfg.sample_len, opts, cap);
    };

    std::vector<double> points;
    PeriodVerdict here = classify(cfg.lambda_at(0), opts.scan_max_transient);
    if (!here.periodic() || !is_power_of_two(here.period)) return points;
    std::size_t current = here.period;

    for (std::size_t i = 0; i + 1 < cfg.grid_points && points.size() < max_doublings; ++i) {
        const PeriodVerdict next = classify(cfg.lambda_at(i + 1), opts.scan_max_transient);
        if (!exceeds(next, current)) continue;

        double lo = cfg.lambda_at(i);
        const double hi = cfg.lambda_at(i + 1);
        while (points.size() < max_doublings && exceeds(next, current) &&
               2 * current <= opts.max_period) {
            double upper = hi;
            while (upper - lo > cfg.doubling_resolution) {
                const double mid = 0.5 * (lo + upper);
                if (exceeds(classify(mid, opts.max_transient), current)) {
                    upper = mid;
                } else {
                    lo = mid;
                }
            }
            const double located = 0.5 * (lo + upper);
            if (!points.empty() && !(located > points.back())) return points;
            points.push_back(located);
            current *= 2;
            if (upper < hi && exceeds(classify(upper, opts.max_transient), current)) return points;
            lo = upper;
        }
        if (!next.periodic() || next.period != current) break;
    }
    return points;
}

}  // namespace detail

/// Located period-doubling points 1->2, 2->4, ... in increasing order.
/// Throws BracketError when fewer than max_doublings transitions lie in the
/// configured range.
inline std::vector<double> find_doubling_points(const SweepConfig& cfg, std::size_t max_doublings) {
    cfg.validate();
    std::vector<double> points = detail::locate_doublings(cfg, max_doublings);
    if (points.size() < max_doublings) {
        throw BracketError("only " + std::to_string(points.size()) + " of " +
                           std::to_string(max_doublings) +
                           " period-doubling transitions are bracketed by [" +
                           detail::fmt_real(cfg.lambda_min) + ", " + detail::fmt_real(cfg.lambda_max) + "]");
    }
    return points;
}

/// Ratios (l[k+1] - l[k]) / (l[k+2] - l[k+1]) of successive doubling intervals.
inline std::vector<double> doubling_interval_ratios(std::span<const double> points) {
    std::vector<double> ratios;
    for (std::size_t k = 0; k + 2 < points.size(); ++k) {
        ratios.push_back((points[k + 1] - points[k]) / (points[k + 2] - points[k + 1]));
    }
    return ratios;
}

/// Geometric extrapolation of the cascade to its accumulation point, using
/// the contraction ratio of the last three doubling points.
inline double estimate_accumulation(std::span<const double> points) {
    if (points.size() < 3) {
        throw InsufficientDataError("accumulation estimate needs at least 3 doubling points, got " +
                                    std::to_string(points.size()));
    }
    const std::size_t n = points.size();
    const double last_gap = points[n - 1] - points[n - 2];
    const double ratio = (points[n - 2] - points[n - 3]) / last_gap;
    if (!(ratio > 1.0) || !std::isfinite(ratio)) {
        throw DomainError("doubling points do not contract geometrically");
    }
    return points[n - 1] + last_gap / (ratio - 1.0);
}

inline BifurcationDiagram sweep(const SweepConfig& cfg) {
    cfg.validate();
    BifurcationDiagram diagram;
    diagram.rows.resize(cfg.grid_points);
    parallel_for(cfg.grid_points, cfg.threads, [&](std::size_t i) {
        DiagramRow& row = diagram.rows[i];
        row.lambda = cfg.lambda_at(i);
        row.samples = iterate(LogisticMap(row.lambda), cfg.x0, cfg.transient_len, cfg.sample_len).samples;
        row.verdict = detect_period(row.samples, cfg.period.tolerance, cfg.period.max_period);
        row.clusters = cluster_count(row.samples, cfg.period.tolerance);
        row.width = attractor_width(row.samples);
    });

    diagram.doubling_points = detail::locate_doublings(cfg, cfg.max_doublings);
    if (diagram.doubling_points.size() >= 3) {
        diagram.accumulation_estimate = estimate_accumulation(diagram.doubling_points);
    }
    diagram.crises = detect_crises(diagram.rows, cfg.jump_threshold,
                                   diagram.accumulation_estimate.value_or(kAccumulationPoint));
    return diagram;
}

}  // namespace firmchaos
