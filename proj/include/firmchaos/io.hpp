#pragma once

// CSV and JSON writers for diagrams, exponent tables, forcing traces and
// stability reports. CSV reals carry 17 significant digits.

#include <ostream>
#include <span>
#include <string>

#include <json.hpp>

#include "firmchaos/bifurcation.hpp"
#include "firmchaos/forcing.hpp"
#include "firmchaos/lyapunov.hpp"
#include "firmchaos/stability.hpp"

namespace firmchaos {

using Json = nlohmann::ordered_json;

inline std::string format_real(double v) { return detail::fmt_real(v); }

inline void write_diagram_csv(std::ostream& out, const BifurcationDiagram& diagram) {
    out << "lambda,x\n";
    for (const DiagramRow& row : diagram.rows) {
        const std::string lambda = format_real(row.lambda);
        for (double x : row.samples) out << lambda << ',' << format_real(x) << '\n';
    }
}

inline Json diagram_summary_json(const BifurcationDiagram& diagram) {
    Json summary;
    summary["doubling_points"] = diagram.doubling_points;
    summary["accumulation_estimate"] =
        diagram.accumulation_estimate ? Json(*diagram.accumulation_estimate) : Json(nullptr);
    summary["doubling_interval_ratios"] = doubling_interval_ratios(diagram.doubling_points);
    Json crises = Json::array();
    for (const Crisis& c : diagram.crises) {
        crises.push_back({{"lambda", c.lambda}, {"width_before", c.width_before}, {"width_after", c.width_after}});
    }
    summary["crises"] = std::move(crises);
    Json rows = Json::array();
    for (const DiagramRow& row : diagram.rows) {
        rows.push_back({{"lambda", row.lambda},
                        {"period", row.verdict.periodic() ? Json(row.verdict.period) : Json(nullptr)},
                        {"clusters", row.clusters},
                        {"width", row.width}});
    }
    summary["rows"] = std::move(rows);
    return summary;
}

struct ExponentRow {
    double lambda;
    LyapunovEstimate estimate;
    StabilityClass classification;
};

inline void write_exponent_csv(std::ostream& out, std::span<const ExponentRow> rows) {
    out << "lambda,exponent,method,classification\n";
    for (const ExponentRow& r : rows) {
        out << format_real(r.lambda) << ',' << format_real(r.estimate.exponent) << ',' << to_string(r.estimate.method)
            << ',' << to_string(r.classification) << '\n';
    }
}

inline void write_forcing_csv(std::ostream& out, std::span<const DrivePoint> trace) {
    out << "t,amplitude,lambda\n";
    for (const DrivePoint& p : trace) {
        out << format_real(p.t) << ',' << format_real(p.amplitude) << ',' << format_real(p.lambda) << '\n';
    }
}

inline Json report_json(const FirmStabilityReport& report, double zero_band = kDefaultZeroBand) {
    Json channels = Json::array();
    for (std::size_t i = 0; i < report.channels.size(); ++i) {
        const TheoryChannel& ch = report.channels[i];
        Json entry{{"theory", to_string(ch.theory)}, {"lambda", ch.map.lambda()}, {"x0", ch.x0}};
        if (ch.exponent) {
            entry["exponent"] = ch.exponent->exponent;
            entry["method"] = to_string(ch.exponent->method);
            entry["iterations"] = ch.exponent->iterations;
            entry["saturated_low"] = ch.exponent->saturated_low;
            entry["classification"] = to_string(classify(*ch.exponent, zero_band));
        }
        entry["trajectories_close"] = report.channel_close[i];
        channels.push_back(std::move(entry));
    }

    Json magnitudes = Json::object();
    for (Theory t : kTheories) magnitudes[std::string(to_string(t))] = report.magnitude(t);

    Json pairwise = Json::array();
    for (const PairVerdict& p : report.pairwise) {
        pairwise.push_back({{"a", to_string(p.a)},
                            {"b", to_string(p.b)},
                            {"stable", p.stable},
                            {"horizon_stable", p.horizon_stable},
                            {"demoted", p.demoted}});
    }

    return Json{{"channels", std::move(channels)},
                {"magnitudes", std::move(magnitudes)},
                {"pairwise", std::move(pairwise)},
                {"firm_stable", report.firm_stable},
                {"total_stability", report.total_stability},
                {"horizon", to_string(report.horizon)},
                {"horizon_steps", report.horizon_steps}};
}

}  // namespace firmchaos
