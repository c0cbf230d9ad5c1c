#pragma once

// The firmchaos command line: bifurcate, lyapunov, forcing, stability and
// reproduce. Exit codes: 0 success, 1 runtime failure, 2 usage or input error.

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "firmchaos/bifurcation.hpp"
#include "firmchaos/config.hpp"
#include "firmchaos/error.hpp"
#include "firmchaos/forcing.hpp"
#include "firmchaos/ingest.hpp"
#include "firmchaos/io.hpp"
#include "firmchaos/lyapunov.hpp"
#include "firmchaos/stability.hpp"

namespace firmchaos::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

namespace detail {

inline std::string dflt(double v) { return " (default " + firmchaos::detail::fmt_real(v) + ")"; }
inline std::string dflt(std::size_t v) { return " (default " + std::to_string(v) + ")"; }

template <class T>
void apply(const std::optional<T>& flag, T& target) {
    if (flag) target = *flag;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw Error("failed writing '" + path.string() + "'");
}

/// Sends text to `path`, or to `fallback` when no path was given.
inline void emit(const std::optional<std::string>& path, const std::string& content, std::ostream& fallback) {
    if (path) {
        write_file(*path, content);
    } else {
        fallback << content;
    }
}

/// Expands "2.5x8" (also "2.5*8" or "2.5×8") into eight copies of 2.5.
inline std::vector<double> expand_lambdas(const std::vector<std::string>& tokens) {
    std::vector<double> values;
    for (std::string token : tokens) {
        if (const auto times = token.find("\u00d7"); times != std::string::npos) token.replace(times, 2, "x");
        std::string value = token;
        std::size_t repeat = 1;
        const auto mark = token.find_first_of("x*");
        if (mark != std::string::npos) {
            value = token.substr(0, mark);
            const std::string count = token.substr(mark + 1);
            std::size_t parsed = 0;
            auto [ptr, ec] = std::from_chars(count.data(), count.data() + count.size(), parsed);
            if (ec != std::errc{} || ptr != count.data() + count.size() || parsed == 0) {
                throw InputError("invalid repeat count in '" + token + "'");
            }
            repeat = parsed;
        }
        double lambda = 0.0;
        if (!firmchaos::detail::parse_real(value, lambda)) throw InputError("invalid lambda '" + token + "'");
        values.insert(values.end(), repeat, lambda);
    }
    return values;
}

struct Context {
    std::ostream& out;
    std::ostream& err;
    std::optional<std::string> config_path;

    RunConfig config() const {
        if (config_path && !config_path->empty()) return load_config(*config_path);
        if (const char* env = std::getenv(kConfigEnvVar); env && *env) return load_config(env);
        return RunConfig{};
    }
};

struct BifurcateFlags {
    std::optional<double> lmin, lmax, x0, tol, jump;
    std::optional<std::size_t> grid, transient, samples, max_period, max_doublings, threads;
    std::string out;
};

inline void add_sweep_flags(CLI::App* cmd, BifurcateFlags& f, const SweepConfig& d) {
    cmd->add_option("--lmin", f.lmin, "lowest lambda" + dflt(d.lambda_min));
    cmd->add_option("--lmax", f.lmax, "highest lambda" + dflt(d.lambda_max));
    cmd->add_option("--grid", f.grid, "number of lambda grid points" + dflt(d.grid_points));
    cmd->add_option("--transient", f.transient, "discarded iterates per row" + dflt(d.transient_len));
    cmd->add_option("--samples", f.samples, "recorded iterates per row" + dflt(d.sample_len));
    cmd->add_option("--x0", f.x0, "initial state" + dflt(d.x0));
    cmd->add_option("--tol", f.tol, "period-detection tolerance" + dflt(d.period.tolerance));
    cmd->add_option("--max-period", f.max_period, "longest detectable period" + dflt(d.period.max_period));
    cmd->add_option("--max-doublings", f.max_doublings, "doubling points to locate" + dflt(d.max_doublings));
    cmd->add_option("--jump", f.jump, "crisis width-jump threshold" + dflt(d.jump_threshold));
    cmd->add_option("--threads", f.threads, "worker threads, 0 = all cores" + dflt(d.threads));
}

inline void apply_sweep_flags(const BifurcateFlags& f, SweepConfig& s) {
    apply(f.lmin, s.lambda_min);
    apply(f.lmax, s.lambda_max);
    apply(f.grid, s.grid_points);
    apply(f.transient, s.transient_len);
    apply(f.samples, s.sample_len);
    apply(f.x0, s.x0);
    apply(f.tol, s.period.tolerance);
    apply(f.max_period, s.period.max_period);
    apply(f.max_doublings, s.max_doublings);
    apply(f.jump, s.jump_threshold);
    apply(f.threads, s.threads);
}

inline void write_diagram(const std::filesystem::path& stem, const BifurcationDiagram& diagram, Json extra = {}) {
    std::ostringstream csv;
    write_diagram_csv(csv, diagram);
    write_file(stem.string() + ".csv", csv.str());
    Json summary = diagram_summary_json(diagram);
    if (!extra.is_null()) {
        for (auto it = extra.begin(); it != extra.end(); ++it) summary[it.key()] = it.value();
    }
    write_file(stem.string() + ".summary.json", summary.dump(2) + "\n");
}

inline int cmd_bifurcate(const Context& ctx, const BifurcateFlags& f) {
    RunConfig cfg = ctx.config();
    apply_sweep_flags(f, cfg.sweep);
    cfg.sweep.validate();
    const BifurcationDiagram diagram = sweep(cfg.sweep);
    write_diagram(f.out, diagram);
    ctx.out << "wrote " << f.out << ".csv and " << f.out << ".summary.json\n";
    return kExitOk;
}

struct LyapunovFlags {
    std::vector<double> lambdas;
    std::optional<double> lmin, lmax, x0, delta0, zero_band;
    std::optional<std::size_t> count, n, transient, renorm;
    std::string method = "derivative";
    std::optional<std::string> out;
};

inline int cmd_lyapunov(const Context& ctx, const LyapunovFlags& f) {
    RunConfig cfg = ctx.config();
    apply(f.x0, cfg.sweep.x0);
    apply(f.n, cfg.lyapunov.n);
    apply(f.transient, cfg.lyapunov.transient);
    apply(f.delta0, cfg.lyapunov.delta0);
    apply(f.renorm, cfg.lyapunov.renorm_interval);
    apply(f.zero_band, cfg.lyapunov.zero_band);
    cfg.validate();

    std::vector<double> lambdas = f.lambdas;
    if (f.lmin || f.lmax || f.count) {
        if (!(f.lmin && f.lmax && f.count)) throw InputError("a lambda range needs --lmin, --lmax and --count");
        if (*f.count < 1) throw InputError("--count must be >= 1");
        for (std::size_t i = 0; i < *f.count; ++i) {
            const double u = *f.count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(*f.count - 1);
            lambdas.push_back(*f.lmin + (*f.lmax - *f.lmin) * u);
        }
    }
    if (lambdas.empty()) throw InputError("give --lambda values or a --lmin/--lmax/--count range");

    const bool derivative = f.method == "derivative" || f.method == "both";
    const bool separation = f.method == "separation" || f.method == "both";
    std::vector<ExponentRow> rows;
    for (double lambda : lambdas) {
        const LogisticMap map(lambda);
        const auto& ly = cfg.lyapunov;
        if (derivative) {
            const auto e = lyapunov_derivative(map, cfg.sweep.x0, ly.transient, ly.n);
            rows.push_back({lambda, e, classify(e, ly.zero_band)});
        }
        if (separation) {
            const auto e = lyapunov_separation(map, cfg.sweep.x0, ly.delta0, ly.renorm_interval, ly.n, ly.transient);
            rows.push_back({lambda, e, classify(e, ly.zero_band)});
        }
    }
    std::ostringstream csv;
    write_exponent_csv(csv, rows);
    emit(f.out, csv.str(), ctx.out);
    return kExitOk;
}

struct ForcingFlags {
    std::string source = "cycles";
    std::optional<double> t0, t1, dt, amin, amax, lambda_min, lambda_max;
    std::optional<std::string> out;
};

inline void apply_calibration_flags(const ForcingFlags& f, RunConfig& cfg) {
    apply(f.t0, cfg.forcing.t_start);
    apply(f.t1, cfg.forcing.t_end);
    apply(f.dt, cfg.forcing.t_step);
    apply(f.amin, cfg.calibration.amplitude_min);
    apply(f.amax, cfg.calibration.amplitude_max);
    apply(f.lambda_min, cfg.calibration.lambda_min);
    apply(f.lambda_max, cfg.calibration.lambda_max);
}

inline std::vector<DrivePoint> forcing_trace(const RunConfig& cfg, const std::string& source) {
    const auto grid = time_grid(cfg.forcing.t_start, cfg.forcing.t_end, cfg.forcing.t_step);
    if (source == "cycles") return drive(std::span<const CycleSpec>(cfg.cycles), cfg.calibration, grid);
    if (source == "risk") return drive(cfg.risk, cfg.calibration, grid);
    if (source == "assets") return drive(std::span<const CycleSpec>(cfg.assets), cfg.calibration, grid);
    throw InputError("unknown forcing source '" + source + "'");
}

inline int cmd_forcing(const Context& ctx, const ForcingFlags& f) {
    RunConfig cfg = ctx.config();
    apply_calibration_flags(f, cfg);
    cfg.validate();
    std::ostringstream csv;
    write_forcing_csv(csv, forcing_trace(cfg, f.source));
    emit(f.out, csv.str(), ctx.out);
    return kExitOk;
}

struct StabilityFlags {
    std::optional<std::string> metrics;
    std::vector<std::string> lambdas;
    std::optional<double> x0, delta0, epsilon, amin, amax, lambda_min, lambda_max;
    std::optional<std::size_t> n, threads;
    std::optional<std::string> horizon, out;
};

inline int cmd_stability(const Context& ctx, const StabilityFlags& f) {
    RunConfig cfg = ctx.config();
    apply(f.n, cfg.stability.n);
    apply(f.delta0, cfg.stability.delta0);
    apply(f.epsilon, cfg.stability.epsilon);
    apply(f.threads, cfg.stability.threads);
    apply(f.amin, cfg.calibration.amplitude_min);
    apply(f.amax, cfg.calibration.amplitude_max);
    apply(f.lambda_min, cfg.calibration.lambda_min);
    apply(f.lambda_max, cfg.calibration.lambda_max);
    if (f.horizon) {
        const auto h = parse_horizon(*f.horizon);
        if (!h) throw InputError("--horizon must be short or long");
        cfg.stability.horizon = *h;
    }
    cfg.validate();

    std::vector<TheoryChannel> channels;
    if (f.metrics && !f.lambdas.empty()) throw InputError("give either --metrics or --lambdas, not both");
    if (f.metrics) {
        for (const MetricSeries& s : load_series(*f.metrics)) {
            channels.push_back(normalize_to_calibration(s, cfg.calibration));
        }
    } else if (!f.lambdas.empty()) {
        const std::vector<double> lambdas = expand_lambdas(f.lambdas);
        if (lambdas.size() != kTheoryCount) {
            throw TheorySetError("--lambdas needs one value per theory (" + std::to_string(kTheoryCount) +
                                 "), got " + std::to_string(lambdas.size()) + "; missing theory channels");
        }
        const double x0 = f.x0.value_or(cfg.sweep.x0);
        for (std::size_t i = 0; i < kTheoryCount; ++i) {
            channels.push_back({kTheories[i], LogisticMap(lambdas[i]), x0, std::nullopt});
        }
    } else {
        throw InputError("give --metrics FILE or --lambdas L1 ... L8");
    }

    const FirmStabilityReport report = evaluate_firm(channels, cfg.stability);
    emit(f.out, report_json(report, cfg.lyapunov.zero_band).dump(2) + "\n", ctx.out);
    return kExitOk;
}

struct ReproduceFlags {
    std::string out_dir = ".";
    BifurcateFlags sweep;
};

struct Figure {
    const char* stem;
    const char* source;
    const char* variable;
};

inline constexpr Figure kFigures[] = {
    {"fig2_orders", "cycles", "inventory orders under superposed business cycles"},
    {"fig5_capital", "risk", "allocated capital under total risk"},
    {"fig6_investments", "assets", "risky investments under superposed asset-class oscillations"},
};

inline int cmd_reproduce(const Context& ctx, const ReproduceFlags& f) {
    RunConfig cfg = ctx.config();
    apply_sweep_flags(f.sweep, cfg.sweep);
    cfg.validate();
    const std::filesystem::path dir(f.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error("cannot create output directory '" + dir.string() + "': " + ec.message());

    for (const Figure& fig : kFigures) {
        const std::vector<DrivePoint> trace = forcing_trace(cfg, fig.source);
        const auto [lo, hi] = std::minmax_element(trace.begin(), trace.end(),
                                                  [](const DrivePoint& a, const DrivePoint& b) { return a.lambda < b.lambda; });
        SweepConfig sc = cfg.sweep;
        sc.lambda_min = lo->lambda;
        sc.lambda_max = hi->lambda;
        if (!(sc.lambda_min < sc.lambda_max)) {
            sc.lambda_min = cfg.calibration.lambda_min;
            sc.lambda_max = cfg.calibration.lambda_max;
        }
        const BifurcationDiagram diagram = sweep(sc);

        std::ostringstream forcing_csv;
        write_forcing_csv(forcing_csv, trace);
        write_file(dir / (std::string(fig.stem) + ".forcing.csv"), forcing_csv.str());
        Json extra{{"figure", fig.stem},
                   {"variable", fig.variable},
                   {"forcing_source", fig.source},
                   {"lambda_range", {sc.lambda_min, sc.lambda_max}},
                   {"calibration",
                    {{"amplitude_min", cfg.calibration.amplitude_min},
                     {"amplitude_max", cfg.calibration.amplitude_max},
                     {"lambda_min", cfg.calibration.lambda_min},
                     {"lambda_max", cfg.calibration.lambda_max}}}};
        write_diagram(dir / fig.stem, diagram, std::move(extra));
        ctx.out << "wrote " << (dir / fig.stem).string() << ".{csv,summary.json,forcing.csv}\n";
    }
    return kExitOk;
}

}  // namespace detail

/// Entry point shared by the executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    using namespace detail;
    const RunConfig defaults{};

    CLI::App app{"firmchaos: logistic-map dynamics of firm variables and firm stability analysis", "firmchaos"};
    app.require_subcommand(1);
    std::optional<std::string> config_path;
    app.add_option("--config", config_path,
                   std::string("INI config file (default: $") + kConfigEnvVar + " when set)");

    BifurcateFlags bif;
    auto* bifurcate = app.add_subcommand("bifurcate", "sweep lambda and write <out>.csv and <out>.summary.json");
    add_sweep_flags(bifurcate, bif, defaults.sweep);
    bifurcate->add_option("--out", bif.out, "output path stem")->required();

    LyapunovFlags ly;
    auto* lyapunov = app.add_subcommand("lyapunov", "tabulate Lyapunov exponents as CSV");
    lyapunov->add_option("--lambda", ly.lambdas, "control parameter value(s)");
    lyapunov->add_option("--lmin", ly.lmin, "range start");
    lyapunov->add_option("--lmax", ly.lmax, "range end");
    lyapunov->add_option("--count", ly.count, "number of range points");
    lyapunov->add_option("--n", ly.n, "averaged iterates" + dflt(defaults.lyapunov.n));
    lyapunov->add_option("--transient", ly.transient, "discarded iterates" + dflt(defaults.lyapunov.transient));
    lyapunov->add_option("--x0", ly.x0, "initial state" + dflt(defaults.sweep.x0));
    lyapunov->add_option("--method", ly.method, "derivative, separation or both (default derivative)")
        ->check(CLI::IsMember({"derivative", "separation", "both"}));
    lyapunov->add_option("--delta0", ly.delta0, "separation-method offset" + dflt(defaults.lyapunov.delta0));
    lyapunov->add_option("--renorm", ly.renorm, "renormalisation interval" + dflt(defaults.lyapunov.renorm_interval));
    lyapunov->add_option("--zero-band", ly.zero_band, "marginal band half-width" + dflt(defaults.lyapunov.zero_band));
    lyapunov->add_option("--out", ly.out, "output CSV (default stdout)");

    ForcingFlags fo;
    auto* forcing = app.add_subcommand("forcing", "emit the t,amplitude,lambda forcing trace as CSV");
    forcing->add_option("--source", fo.source, "cycles, risk or assets (default cycles)")
        ->check(CLI::IsMember({"cycles", "risk", "assets"}));
    forcing->add_option("--t0", fo.t0, "start time, years" + dflt(defaults.forcing.t_start));
    forcing->add_option("--t1", fo.t1, "end time, years" + dflt(defaults.forcing.t_end));
    forcing->add_option("--dt", fo.dt, "time step, years" + dflt(defaults.forcing.t_step));
    forcing->add_option("--amin", fo.amin, "calibration amplitude_min" + dflt(defaults.calibration.amplitude_min));
    forcing->add_option("--amax", fo.amax, "calibration amplitude_max" + dflt(defaults.calibration.amplitude_max));
    forcing->add_option("--lambda-min", fo.lambda_min, "calibration lambda_min" + dflt(defaults.calibration.lambda_min));
    forcing->add_option("--lambda-max", fo.lambda_max, "calibration lambda_max" + dflt(defaults.calibration.lambda_max));
    forcing->add_option("--out", fo.out, "output CSV (default stdout)");

    StabilityFlags st;
    auto* stability = app.add_subcommand("stability", "evaluate firm stability over the eight theory channels");
    stability->add_option("--metrics", st.metrics, "date,theory,value CSV to calibrate channels from");
    stability->add_option("--lambdas", st.lambdas, "eight lambdas in theory order; '2.5x8' repeats a value");
    stability->add_option("--x0", st.x0, "initial state for --lambdas channels" + dflt(defaults.sweep.x0));
    stability->add_option("--horizon", st.horizon, "short (1 year) or long (3 years) (default short)");
    stability->add_option("--n", st.n, "Lyapunov iterates per channel" + dflt(defaults.stability.n));
    stability->add_option("--delta0", st.delta0, "initial trajectory offset" + dflt(defaults.stability.delta0));
    stability->add_option("--epsilon", st.epsilon, "closeness bound" + dflt(defaults.stability.epsilon));
    stability->add_option("--amin", st.amin, "calibration amplitude_min" + dflt(defaults.calibration.amplitude_min));
    stability->add_option("--amax", st.amax, "calibration amplitude_max" + dflt(defaults.calibration.amplitude_max));
    stability->add_option("--lambda-min", st.lambda_min, "calibration lambda_min" + dflt(defaults.calibration.lambda_min));
    stability->add_option("--lambda-max", st.lambda_max, "calibration lambda_max" + dflt(defaults.calibration.lambda_max));
    stability->add_option("--threads", st.threads, "worker threads, 0 = all cores" + dflt(defaults.stability.threads));
    stability->add_option("--out", st.out, "output JSON (default stdout)");

    ReproduceFlags rep;
    auto* reproduce = app.add_subcommand("reproduce", "run the orders, capital and investments sweeps end to end");
    reproduce->add_option("--out-dir", rep.out_dir, "output directory (default .)");
    add_sweep_flags(reproduce, rep.sweep, defaults.sweep);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    const Context ctx{out, err, config_path};
    try {
        if (*bifurcate) return cmd_bifurcate(ctx, bif);
        if (*lyapunov) return cmd_lyapunov(ctx, ly);
        if (*forcing) return cmd_forcing(ctx, fo);
        if (*stability) return cmd_stability(ctx, st);
        if (*reproduce) return cmd_reproduce(ctx, rep);
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitUsage;
}

}  // namespace firmchaos::cli
