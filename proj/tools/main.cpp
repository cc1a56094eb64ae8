#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "rsou/analyze.hpp"
#include "rsou/chain.hpp"
#include "rsou/config.hpp"
#include "rsou/errors.hpp"
#include "rsou/oracle.hpp"
#include "rsou/report.hpp"
#include "rsou/simulate.hpp"
#include "rsou/version.hpp"

namespace {

using namespace rsou;

struct CliOptions {
    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    bool seed_given = false;
    int workers = 0;
    std::vector<std::string> overrides;
};

int exit_code_for(const Error& e) {
    switch (e.category()) {
        case ErrorCategory::Config: return 1;
        case ErrorCategory::Precondition: return 2;
        case ErrorCategory::Numerical:
        case ErrorCategory::Io: return 3;
    }
    return 3;
}

IncrementPlan plan_from(const RunSettings& r) {
    IncrementPlan plan;
    plan.epsilon_trunc = r.epsilon_trunc;
    plan.small_jump_mode = r.small_jump_mode;
    plan.dt_max = r.dt_max;
    validate_plan(plan);
    return plan;
}

int regime_index(const RunConfig& cfg, int one_based, const char* key) {
    if (one_based < 1 || one_based > cfg.model.n)
        throw_config("StateOutOfRange",
                     std::string(key) + " must name a regime in [1, " +
                         std::to_string(cfg.model.n) + "]");
    return one_based - 1;
}

double effective_burn_in(const RunConfig& cfg, const RegimeModel& model) {
    if (cfg.run.burn_in) return *cfg.run.burn_in;
    const double drift = stationary_distribution(model.q).mu.dot(model.alpha);
    return drift == 0.0 ? 20.0 : 20.0 / std::fabs(drift);
}

std::string write_csv(const std::string& out_dir, const std::string& name,
                      const std::function<void(std::ostream&)>& writer) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw_io("IoFailure", "cannot create output directory '" + out_dir + "'");
    const std::string path = (std::filesystem::path(out_dir) / name).string();
    std::ofstream os(path, std::ios::binary);
    if (!os) throw_io("IoFailure", "cannot open '" + path + "' for writing");
    writer(os);
    if (!os) throw_io("IoFailure", "failed writing '" + path + "'");
    return path;
}

// single-regime (alpha, sigma) for the fixed-environment oracle
std::pair<double, double> oracle_regime(const RunConfig& cfg, const RegimeModel& model) {
    if (cfg.run.oracle_state) {
        const int i = regime_index(cfg, *cfg.run.oracle_state, "[run] oracle_state");
        return {model.alpha(i), model.sigma(i)};
    }
    const double a0 = model.alpha(0), s0 = model.sigma(0);
    for (int i = 1; i < model.n; ++i) {
        if (model.alpha(i) != a0 || model.sigma(i) != s0)
            throw_precondition("EqualRegimeRequired",
                               "regimes differ; set [run] oracle_state to pick one");
    }
    return {a0, s0};
}

std::vector<double> cdf_grid(const RunSettings& r) {
    if (r.cdf_points < 2 || !(r.cdf_x_max > r.cdf_x_min))
        throw_config("BadValue", "[run] cdf grid needs cdf_x_min < cdf_x_max, >= 2 points");
    std::vector<double> xs(r.cdf_points);
    const double h = (r.cdf_x_max - r.cdf_x_min) / (r.cdf_points - 1);
    for (int i = 0; i < r.cdf_points; ++i) xs[i] = r.cdf_x_min + i * h;
    return xs;
}

TailStats stats_for(const RunConfig& cfg, const StationarySample& sample) {
    std::vector<double> xs;
    xs.reserve(sample.draws.size());
    for (const auto& [x, s] : sample.draws) xs.push_back(x);
    return compute_tail_stats(xs, cfg.run.probe_lambda, cfg.run.p_list);
}

int run_command(const std::string& command, const CliOptions& opts) {
    const auto started = std::chrono::steady_clock::now();

    RunConfig cfg = load_config(opts.config_path, opts.overrides);
    std::uint64_t seed = 0;
    if (opts.seed_given) seed = opts.seed;
    else if (cfg.run.seed) seed = *cfg.run.seed;

    RunReport report;
    report.tool_version = kToolVersion;
    report.command = command;
    report.config_echo = config_to_json(cfg);
    report.seed = seed;
    report.workers = opts.workers > 0
                         ? opts.workers
                         : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

    const RegimeModel model = validate_model(cfg.model);
    int exit_code = 0;

    if (command == "validate") {
        std::cout << "model: valid (" << model.n << " regimes)\n";
    } else if (command == "classify") {
        report.verdict = classify(model);
        report.spectral = report.verdict->spectral;
        if (report.verdict->recurrence.kind != RecurrenceKind::PositiveRecurrent) {
            std::cerr << "precondition: tail classification requires positive recurrence ("
                      << report.verdict->recurrence.reason << ")\n";
            exit_code = 2;
        }
    } else if (command == "kappa") {
        report.spectral = spectral_report(model.q, model.alpha, cfg.run.p);
    } else if (command == "simulate") {
        const IncrementPlan plan = plan_from(cfg.run);
        RngStream rng(seed, 0);
        const PathSample path = simulate_path(model, cfg.run.x0,
                                              regime_index(cfg, cfg.run.i0, "[run] i0"),
                                              cfg.run.horizon, plan, rng);
        report.sample_files.push_back(write_csv(
            opts.out_dir, "path.csv", [&](std::ostream& os) { write_path_csv(path, os); }));
    } else if (command == "stationary") {
        const IncrementPlan plan = plan_from(cfg.run);
        RngStream rng(seed, 0);
        StationarySample sample = sample_stationary(
            model, effective_burn_in(cfg, model), cfg.run.n_draws, cfg.run.gap, plan, rng,
            cfg.run.allow_nonrecurrent, cfg.run.x0,
            regime_index(cfg, cfg.run.i0, "[run] i0"));
        sample.master_seed = seed;
        report.verdict = classify(model);
        report.spectral = report.verdict->spectral;
        report.tail_stats = stats_for(cfg, sample);
        report.sample_files.push_back(
            write_csv(opts.out_dir, "stationary.csv",
                      [&](std::ostream& os) { write_stationary_csv(sample, os); }));
    } else if (command == "oracle") {
        const auto [alpha, sigma] = oracle_regime(cfg, model);
        StationaryCf cf(alpha, sigma, model.triplet);
        const std::vector<double> xs = cdf_grid(cfg.run);
        const std::vector<double> F =
            invert_to_cdf([&](double z) { return cf(z); }, xs);
        report.sample_files.push_back(write_csv(
            opts.out_dir, "cdf.csv", [&](std::ostream& os) { write_cdf_csv(xs, F, os); }));
    } else if (command == "oracle-compare") {
        const auto [alpha, sigma] = oracle_regime(cfg, model);
        for (int i = 0; i < model.n; ++i) {
            if (model.alpha(i) != alpha || model.sigma(i) != sigma)
                throw_precondition("EqualRegimeRequired",
                                   "oracle-compare needs all regimes equal");
        }
        const IncrementPlan plan = plan_from(cfg.run);
        RngStream rng(seed, 0);
        StationarySample sample = sample_stationary(
            model, effective_burn_in(cfg, model), cfg.run.n_draws, cfg.run.gap, plan, rng,
            cfg.run.allow_nonrecurrent, cfg.run.x0,
            regime_index(cfg, cfg.run.i0, "[run] i0"));
        sample.master_seed = seed;

        StationaryCf cf(alpha, sigma, model.triplet);
        const std::vector<double> xs = cdf_grid(cfg.run);
        const std::vector<double> F = invert_to_cdf([&](double z) { return cf(z); }, xs);

        std::vector<double> draws;
        draws.reserve(sample.draws.size());
        for (const auto& [x, s] : sample.draws) draws.push_back(x);
        auto interp = [&](double x) {
            if (x <= xs.front()) return F.front();
            if (x >= xs.back()) return F.back();
            const auto it = std::upper_bound(xs.begin(), xs.end(), x);
            const std::size_t hi = it - xs.begin(), lo = hi - 1;
            const double w = (x - xs[lo]) / (xs[hi] - xs[lo]);
            return F[lo] + w * (F[hi] - F[lo]);
        };
        TailStats stats = stats_for(cfg, sample);
        stats.ks_distance = ks_statistic(draws, interp);
        report.tail_stats = std::move(stats);
        report.sample_files.push_back(
            write_csv(opts.out_dir, "stationary.csv",
                      [&](std::ostream& os) { write_stationary_csv(sample, os); }));
        report.sample_files.push_back(write_csv(
            opts.out_dir, "cdf.csv", [&](std::ostream& os) { write_cdf_csv(xs, F, os); }));
    } else if (command == "lyapunov") {
        const double drift = stationary_distribution(model.q).mu.dot(model.alpha);
        std::string which = cfg.run.certificate;
        if (which == "auto") which = drift < 0.0 ? "log" : "reciprocal";
        if (which == "log" || which == "both") {
            const double eps = cfg.run.epsilon ? *cfg.run.epsilon : 0.5 * (-drift);
            report.certificates.push_back(verify_log_drift(model, eps));
        }
        if (which == "reciprocal" || which == "both") {
            const double eps =
                cfg.run.epsilon ? *cfg.run.epsilon : (drift > 0.0 ? 0.5 * drift : 0.5);
            report.certificates.push_back(verify_reciprocal_drift(model, cfg.run.delta, eps));
        }
    } else {
        throw_config("UnknownCommand", "unrecognized subcommand '" + command + "'");
    }

    report.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    const std::string report_path = emit_report(report, opts.out_dir);
    std::cout << "report: " << report_path << '\n';
    return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulation and analysis toolkit for regime-switching Levy-driven "
                 "Ornstein-Uhlenbeck processes"};
    app.require_subcommand(1);

    CliOptions opts;
    app.add_option("--config", opts.config_path, "model + run configuration file")
        ->required();
    auto* seed_opt = app.add_option("--seed", opts.seed, "master seed (default 0)");
    app.add_option("--out", opts.out_dir, "output directory (default 'out')");
    app.add_option("--workers", opts.workers,
                   "worker threads for batch simulation (default: hardware)");
    app.add_option("--override", opts.overrides,
                   "config override section.key=value (repeatable)");

    const char* names[] = {"validate",  "classify", "kappa",          "simulate",
                           "stationary", "oracle",   "oracle-compare", "lyapunov"};
    const char* descs[] = {
        "check the model and exit",
        "recurrence/tail verdict with the moment index",
        "spectral report only",
        "one trajectory to path.csv",
        "thinned stationary draws to stationary.csv plus tail statistics",
        "fixed-regime stationary CDF table to cdf.csv",
        "KS distance between stationary draws and the inverted CDF",
        "numerical drift certificates"};
    for (std::size_t i = 0; i < std::size(names); ++i)
        app.add_subcommand(names[i], descs[i]);

    CLI11_PARSE(app, argc, argv);
    opts.seed_given = seed_opt->count() > 0;

    try {
        return run_command(app.get_subcommands().front()->get_name(), opts);
    } catch (const rsou::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
