#pragma once

// Per-theory firm metric series read from `date,theory,value` CSV files, and
// their reduction to a calibrated theory channel.

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "firmchaos/error.hpp"
#include "firmchaos/forcing.hpp"
#include "firmchaos/logistic.hpp"
#include "firmchaos/stability.hpp"
#include "firmchaos/theory.hpp"

namespace firmchaos {

using Date = std::chrono::sys_days;

struct MetricSeries {
    Theory theory;
    std::vector<Date> timestamps;
    std::vector<double> values;

    friend bool operator==(const MetricSeries&, const MetricSeries&) = default;
};

inline constexpr std::string_view kMetricsHeader = "date,theory,value";

/// Parses YYYY-MM-DD; nullopt when malformed or not a calendar date.
inline std::optional<Date> parse_date(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    auto number = [&](std::size_t pos, std::size_t len, int& out) {
        const char* first = text.data() + pos;
        const char* last = first + len;
        auto [ptr, ec] = std::from_chars(first, last, out);
        return ec == std::errc{} && ptr == last;
    };
    int y = 0, m = 0, d = 0;
    if (!number(0, 4, y) || !number(5, 2, m) || !number(8, 2, d)) return std::nullopt;
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                                          std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return std::nullopt;
    return Date{ymd};
}

inline std::string format_date(Date date) {
    const std::chrono::year_month_day ymd{date};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline bool parse_real(std::string_view text, double& out) {
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size() && std::isfinite(out);
}

}  // namespace detail

/// Reads a metrics CSV and groups its rows into one series per theory, in
/// theory enumeration order.
inline std::vector<MetricSeries> parse_series(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (!have_header && std::getline(in, line)) {
        ++line_no;
        const std::string_view text = detail::trim(line);
        if (text.empty()) continue;
        if (text != kMetricsHeader) {
            throw ParseError(line_no, "expected header '" + std::string(kMetricsHeader) + "'");
        }
        have_header = true;
    }
    if (!have_header) throw ParseError(line_no + 1, "empty metrics file, expected header '" +
                                                        std::string(kMetricsHeader) + "'");

    std::array<std::optional<MetricSeries>, kTheoryCount> groups;
    std::array<std::size_t, kTheoryCount> first_line{};
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view text = detail::trim(line);
        if (text.empty()) continue;

        const auto c1 = text.find(',');
        const auto c2 = c1 == std::string_view::npos ? c1 : text.find(',', c1 + 1);
        if (c2 == std::string_view::npos || text.find(',', c2 + 1) != std::string_view::npos) {
            throw ParseError(line_no, "expected 3 comma-separated fields");
        }
        const auto date_text = detail::trim(text.substr(0, c1));
        const auto theory_text = detail::trim(text.substr(c1 + 1, c2 - c1 - 1));
        const auto value_text = detail::trim(text.substr(c2 + 1));

        const auto date = parse_date(date_text);
        if (!date) throw ParseError(line_no, "invalid date '" + std::string(date_text) + "'");
        const auto theory = parse_theory(theory_text);
        if (!theory) throw UnknownTheoryError(line_no, "unknown theory '" + std::string(theory_text) + "'");
        double value = 0.0;
        if (!detail::parse_real(value_text, value)) {
            throw ParseError(line_no, "invalid value '" + std::string(value_text) + "'");
        }

        auto& group = groups[index_of(*theory)];
        if (!group) {
            group = MetricSeries{*theory, {}, {}};
            first_line[index_of(*theory)] = line_no;
        }
        if (!group->timestamps.empty() && !(*date > group->timestamps.back())) {
            throw NonMonotonicDateError(line_no, "dates for theory '" + std::string(theory_text) +
                                                     "' must be strictly increasing");
        }
        group->timestamps.push_back(*date);
        group->values.push_back(value);
    }

    std::vector<MetricSeries> series;
    for (std::size_t i = 0; i < kTheoryCount; ++i) {
        if (!groups[i]) continue;
        if (groups[i]->values.size() < 2) {
            throw ParseError(first_line[i], "theory '" + std::string(kTheoryLabels[i]) +
                                                "' needs at least 2 observations");
        }
        series.push_back(std::move(*groups[i]));
    }
    if (series.empty()) throw ParseError(line_no, "metrics file has no data rows");
    return series;
}

inline std::vector<MetricSeries> load_series(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open metrics file '" + path + "'");
    return parse_series(in);
}

inline void write_series(std::ostream& out, std::span<const MetricSeries> series) {
    out << kMetricsHeader << '\n';
    for (const MetricSeries& s : series) {
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            out << format_date(s.timestamps[i]) << ',' << to_string(s.theory) << ','
                << detail::fmt_real(s.values[i]) << '\n';
        }
    }
}

/// Half the peak-to-peak range of the series after removing its
/// least-squares linear trend in time.
inline double detrended_amplitude(const MetricSeries& series) {
    const std::size_t n = series.values.size();
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = static_cast<double>((series.timestamps[i] - series.timestamps.front()).count());
    }
    double t_mean = 0.0, v_mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        t_mean += t[i];
        v_mean += series.values[i];
    }
    t_mean /= static_cast<double>(n);
    v_mean /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (t[i] - t_mean) * (series.values[i] - v_mean);
        sxx += (t[i] - t_mean) * (t[i] - t_mean);
    }
    const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
    double lo = 0.0, hi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = series.values[i] - v_mean - slope * (t[i] - t_mean);
        if (i == 0 || r < lo) lo = r;
        if (i == 0 || r > hi) hi = r;
    }
    return 0.5 * (hi - lo);
}

inline constexpr double kX0BandLow = 0.05;
inline constexpr double kX0BandHigh = 0.95;

inline TheoryChannel normalize_to_calibration(const MetricSeries& series, const Calibration& cal) {
    if (series.values.size() < 2 || series.values.size() != series.timestamps.size()) {
        throw DegenerateSeriesError("series for '" + std::string(to_string(series.theory)) +
                                    "' needs at least 2 dated values");
    }
    const auto [lo, hi] = std::minmax_element(series.values.begin(), series.values.end());
    if (!(*hi > *lo)) {
        throw DegenerateSeriesError("series for '" + std::string(to_string(series.theory)) + "' is constant");
    }
    const double amplitude = detrended_amplitude(series);
    const double last = series.values.back();
    const double x0 =
        std::clamp(kX0BandLow + (kX0BandHigh - kX0BandLow) * (last - *lo) / (*hi - *lo), kX0BandLow, kX0BandHigh);
    return TheoryChannel{series.theory, LogisticMap(map_to_lambda(amplitude, cal)), x0, std::nullopt};
}

}  // namespace firmchaos
