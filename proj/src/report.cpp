#include "rsou/report.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "rsou/errors.hpp"

namespace rsou {

namespace {

const char* recurrence_name(RecurrenceKind k) {
    switch (k) {
        case RecurrenceKind::PositiveRecurrent: return "PositiveRecurrent";
        case RecurrenceKind::Transient: return "Transient";
        case RecurrenceKind::Indeterminate: return "Indeterminate";
    }
    return "?";
}

RecurrenceKind recurrence_from(const std::string& s) {
    if (s == "PositiveRecurrent") return RecurrenceKind::PositiveRecurrent;
    if (s == "Transient") return RecurrenceKind::Transient;
    return RecurrenceKind::Indeterminate;
}

const char* tail_name(TailKind k) {
    switch (k) {
        case TailKind::HeavyJumpDriven: return "HeavyJumpDriven";
        case TailKind::HeavySwitchDriven: return "HeavySwitchDriven";
        case TailKind::Light: return "Light";
        case TailKind::Unknown: return "Unknown";
    }
    return "?";
}

TailKind tail_from(const std::string& s) {
    if (s == "HeavyJumpDriven") return TailKind::HeavyJumpDriven;
    if (s == "HeavySwitchDriven") return TailKind::HeavySwitchDriven;
    if (s == "Light") return TailKind::Light;
    return TailKind::Unknown;
}

ordered_json kappa_to_json(const KappaResult& k) {
    ordered_json j;
    switch (k.kind) {
        case KappaResult::Kind::Finite:
            j["kind"] = "finite";
            j["value"] = k.value;
            break;
        case KappaResult::Kind::Infinite:
            j["kind"] = "infinite";
            j["value"] = nullptr;
            break;
        case KappaResult::Kind::Degenerate:
            j["kind"] = "degenerate";
            j["value"] = nullptr;
            break;
    }
    return j;
}

KappaResult kappa_from_json(const ordered_json& j) {
    const std::string kind = j.at("kind");
    if (kind == "finite") return KappaResult::finite(j.at("value").get<double>());
    if (kind == "degenerate") return KappaResult::degenerate();
    return KappaResult::infinite();
}

ordered_json spectral_to_json(const SpectralReport& s) {
    ordered_json j;
    j["p"] = s.p;
    j["eta_p"] = s.eta_p;
    j["kappa"] = kappa_to_json(s.kappa);
    if (std::isfinite(s.kappa_upper_bound)) j["kappa_upper_bound"] = s.kappa_upper_bound;
    else j["kappa_upper_bound"] = nullptr;
    return j;
}

SpectralReport spectral_from_json(const ordered_json& j) {
    SpectralReport s;
    s.p = j.at("p").get<double>();
    s.eta_p = j.at("eta_p").get<double>();
    s.kappa = kappa_from_json(j.at("kappa"));
    s.kappa_upper_bound = j.at("kappa_upper_bound").is_null()
                              ? std::numeric_limits<double>::infinity()
                              : j.at("kappa_upper_bound").get<double>();
    return s;
}

ordered_json verdict_to_json(const VerdictReport& v) {
    ordered_json j;
    j["drift_index"] = v.recurrence.drift_index;
    j["recurrence"] = recurrence_name(v.recurrence.kind);
    j["recurrence_reason"] = v.recurrence.reason;
    j["tail"] = tail_name(v.tail.kind);
    j["tail_reason"] = v.tail.reason;
    if (v.tail.kind == TailKind::HeavyJumpDriven) j["jump_state"] = v.tail.jump_state + 1;
    else j["jump_state"] = nullptr;
    if (v.tail.kind == TailKind::HeavySwitchDriven)
        j["moment_threshold"] = v.tail.moment_threshold;
    else j["moment_threshold"] = nullptr;
    j["kappa"] = kappa_to_json(v.spectral.kappa);
    ordered_json integ;
    integ["cond_13"] = v.integrability.cond_13;
    integ["cond_a1"] = v.integrability.cond_a1;
    integ["cond_a15"] = v.integrability.cond_a15;
    integ["cond_a2_per_state"] = v.integrability.cond_a2_per_state;
    if (v.integrability.cond_a4_lambda0) integ["cond_a4_lambda0"] = *v.integrability.cond_a4_lambda0;
    else integ["cond_a4_lambda0"] = nullptr;
    j["integrability"] = integ;
    ordered_json used = ordered_json::array();
    for (const auto& c : v.conditions_used) {
        ordered_json e;
        e["id"] = c.id;
        e["value"] = c.value;
        used.push_back(e);
    }
    j["conditions_used"] = used;
    return j;
}

VerdictReport verdict_from_json(const ordered_json& j) {
    VerdictReport v;
    v.recurrence.drift_index = j.at("drift_index").get<double>();
    v.recurrence.kind = recurrence_from(j.at("recurrence").get<std::string>());
    v.recurrence.reason = j.at("recurrence_reason").get<std::string>();
    v.tail.kind = tail_from(j.at("tail").get<std::string>());
    v.tail.reason = j.at("tail_reason").get<std::string>();
    if (!j.at("jump_state").is_null()) v.tail.jump_state = j.at("jump_state").get<int>() - 1;
    if (!j.at("moment_threshold").is_null())
        v.tail.moment_threshold = j.at("moment_threshold").get<double>();
    v.spectral.kappa = kappa_from_json(j.at("kappa"));
    const auto& integ = j.at("integrability");
    v.integrability.cond_13 = integ.at("cond_13").get<bool>();
    v.integrability.cond_a1 = integ.at("cond_a1").get<bool>();
    v.integrability.cond_a15 = integ.at("cond_a15").get<bool>();
    v.integrability.cond_a2_per_state = integ.at("cond_a2_per_state").get<std::vector<bool>>();
    if (!integ.at("cond_a4_lambda0").is_null())
        v.integrability.cond_a4_lambda0 = integ.at("cond_a4_lambda0").get<double>();
    for (const auto& e : j.at("conditions_used"))
        v.conditions_used.push_back({e.at("id").get<std::string>(), e.at("value").get<bool>()});
    return v;
}

ordered_json tail_stats_to_json(const TailStats& t) {
    ordered_json j;
    ordered_json hill = ordered_json::array();
    for (const auto& h : t.hill) {
        ordered_json e;
        e["k"] = h.k;
        e["index"] = h.index;
        hill.push_back(e);
    }
    j["hill"] = hill;
    ordered_json curve = ordered_json::array();
    for (const auto& pt : t.moment_curve) {
        ordered_json e;
        e["p"] = pt.p;
        ordered_json means = ordered_json::array();
        for (const auto& [n, mean] : pt.prefix_means) {
            ordered_json m;
            m["n"] = n;
            m["mean"] = mean;
            means.push_back(m);
        }
        e["prefix_means"] = means;
        curve.push_back(e);
    }
    j["moment_curve"] = curve;
    j["probe_lambda"] = t.probe_lambda;
    ordered_json probe = ordered_json::array();
    for (const auto& [n, mean] : t.exp_probe) {
        ordered_json m;
        m["n"] = n;
        m["mean"] = mean;
        probe.push_back(m);
    }
    j["exp_probe"] = probe;
    if (t.ks_distance) j["ks_distance"] = *t.ks_distance;
    else j["ks_distance"] = nullptr;
    return j;
}

TailStats tail_stats_from_json(const ordered_json& j) {
    TailStats t;
    for (const auto& e : j.at("hill"))
        t.hill.push_back({e.at("k").get<std::size_t>(), e.at("index").get<double>()});
    for (const auto& e : j.at("moment_curve")) {
        MomentCurvePoint pt;
        pt.p = e.at("p").get<double>();
        for (const auto& m : e.at("prefix_means"))
            pt.prefix_means.emplace_back(m.at("n").get<std::size_t>(),
                                         m.at("mean").get<double>());
        t.moment_curve.push_back(std::move(pt));
    }
    t.probe_lambda = j.at("probe_lambda").get<double>();
    for (const auto& m : j.at("exp_probe"))
        t.exp_probe.emplace_back(m.at("n").get<std::size_t>(), m.at("mean").get<double>());
    if (!j.at("ks_distance").is_null()) t.ks_distance = j.at("ks_distance").get<double>();
    return t;
}

ordered_json certificate_to_json(const DriftCertificate& c) {
    ordered_json j;
    j["function"] =
        c.function_id == CertificateFunction::LogQuadratic ? "log_quadratic" : "reciprocal_quadratic";
    j["epsilon"] = c.epsilon;
    if (c.function_id == CertificateFunction::ReciprocalQuadratic) j["delta"] = c.delta;
    else j["delta"] = nullptr;
    if (c.r0) j["r0"] = *c.r0;
    else j["r0"] = nullptr;
    j["per_state_margins"] = c.per_state_margins;
    ordered_json grid;
    grid["lo"] = c.grid.lo;
    grid["hi"] = c.grid.hi;
    grid["points_per_decade"] = c.grid.points_per_decade;
    j["grid"] = grid;
    return j;
}

DriftCertificate certificate_from_json(const ordered_json& j) {
    DriftCertificate c;
    c.function_id = j.at("function").get<std::string>() == "log_quadratic"
                        ? CertificateFunction::LogQuadratic
                        : CertificateFunction::ReciprocalQuadratic;
    c.epsilon = j.at("epsilon").get<double>();
    if (!j.at("delta").is_null()) c.delta = j.at("delta").get<double>();
    if (!j.at("r0").is_null()) c.r0 = j.at("r0").get<double>();
    c.per_state_margins = j.at("per_state_margins").get<std::vector<double>>();
    c.grid.lo = j.at("grid").at("lo").get<double>();
    c.grid.hi = j.at("grid").at("hi").get<double>();
    c.grid.points_per_decade = j.at("grid").at("points_per_decade").get<int>();
    return c;
}

}  // namespace

ordered_json config_to_json(const RunConfig& cfg) {
    ordered_json j;
    j["schema"] = cfg.schema;
    ordered_json chain;
    chain["n"] = cfg.model.n;
    chain["q"] = cfg.model.q;
    j["chain"] = chain;
    j["drift"] = ordered_json{{"alpha", cfg.model.alpha}};
    j["noise"] = ordered_json{{"sigma", cfg.model.sigma}};

    ordered_json levy;
    levy["b"] = cfg.model.triplet.b;
    levy["a"] = cfg.model.triplet.a;
    if (std::holds_alternative<ZeroMeasure>(cfg.model.triplet.measure)) {
        levy["measure"] = "zero";
    } else if (const auto* cp = std::get_if<CompoundPoisson>(&cfg.model.triplet.measure)) {
        levy["measure"] = "compound_poisson";
        levy["rate"] = cp->rate;
        if (const auto* g = std::get_if<GaussianJump>(&cp->jump)) {
            levy["jump"] = "gaussian";
            levy["jump_mean"] = g->mean;
            levy["jump_sd"] = g->sd;
        } else if (const auto* t = std::get_if<TwoSidedExponentialJump>(&cp->jump)) {
            levy["jump"] = "two_sided_exponential";
            levy["rate_pos"] = t->rate_pos;
            levy["rate_neg"] = t->rate_neg;
            levy["weight_pos"] = t->weight_pos;
        } else if (const auto* p = std::get_if<ParetoJump>(&cp->jump)) {
            levy["jump"] = "pareto";
            levy["beta"] = p->beta;
            levy["side"] = p->side == ParetoSide::Plus    ? "plus"
                           : p->side == ParetoSide::Minus ? "minus"
                                                          : "both";
            levy["scale"] = p->scale;
        } else if (const auto* pm = std::get_if<PointMassJump>(&cp->jump)) {
            levy["jump"] = "point_mass";
            levy["z0"] = pm->z0;
        }
    } else if (const auto* t = std::get_if<TemperedPowerLaw>(&cfg.model.triplet.measure)) {
        levy["measure"] = "tempered_power_law";
        levy["c_pos"] = t->c_pos;
        levy["c_neg"] = t->c_neg;
        levy["beta_pos"] = t->beta_pos;
        levy["beta_neg"] = t->beta_neg;
        levy["theta_pos"] = t->theta_pos;
        levy["theta_neg"] = t->theta_neg;
    }
    j["levy"] = levy;

    const RunSettings& r = cfg.run;
    ordered_json run;
    run["x0"] = r.x0;
    run["i0"] = r.i0;
    run["horizon"] = r.horizon;
    if (r.burn_in) run["burn_in"] = *r.burn_in;
    else run["burn_in"] = nullptr;
    run["n_draws"] = r.n_draws;
    run["gap"] = r.gap;
    run["dt_max"] = r.dt_max;
    run["epsilon_trunc"] = r.epsilon_trunc;
    run["small_jump_mode"] = r.small_jump_mode == SmallJumpMode::CompensateGaussian
                                 ? "compensate_gaussian"
                                 : "drop";
    if (r.epsilon) run["epsilon"] = *r.epsilon;
    else run["epsilon"] = nullptr;
    run["delta"] = r.delta;
    if (r.hill_k) run["hill_k"] = *r.hill_k;
    else run["hill_k"] = nullptr;
    run["p_list"] = r.p_list;
    run["p"] = r.p;
    run["probe_lambda"] = r.probe_lambda;
    run["allow_nonrecurrent"] = r.allow_nonrecurrent;
    run["certificate"] = r.certificate;
    if (r.oracle_state) run["oracle_state"] = *r.oracle_state;
    else run["oracle_state"] = nullptr;
    run["cdf_x_min"] = r.cdf_x_min;
    run["cdf_x_max"] = r.cdf_x_max;
    run["cdf_points"] = r.cdf_points;
    j["run"] = run;
    return j;
}

ordered_json report_to_json(const RunReport& report) {
    ordered_json j;
    j["tool_version"] = report.tool_version;
    j["command"] = report.command;
    j["config"] = report.config_echo;
    j["seed"] = report.seed;
    j["workers"] = report.workers;
    if (report.verdict) j["verdict"] = verdict_to_json(*report.verdict);
    else j["verdict"] = nullptr;
    if (report.spectral) j["spectral"] = spectral_to_json(*report.spectral);
    else j["spectral"] = nullptr;
    if (report.tail_stats) j["tail_stats"] = tail_stats_to_json(*report.tail_stats);
    else j["tail_stats"] = nullptr;
    if (report.certificates.empty()) {
        j["drift_certificates"] = nullptr;
    } else {
        ordered_json arr = ordered_json::array();
        for (const auto& c : report.certificates) arr.push_back(certificate_to_json(c));
        j["drift_certificates"] = arr;
    }
    j["wall_clock_seconds"] = report.wall_clock_seconds;
    j["sample_files"] = report.sample_files;
    return j;
}

RunReport report_from_json(const ordered_json& j) {
    RunReport r;
    r.tool_version = j.at("tool_version").get<std::string>();
    r.command = j.at("command").get<std::string>();
    r.config_echo = j.at("config");
    r.seed = j.at("seed").get<std::uint64_t>();
    r.workers = j.at("workers").get<int>();
    if (!j.at("verdict").is_null()) r.verdict = verdict_from_json(j.at("verdict"));
    if (!j.at("spectral").is_null()) r.spectral = spectral_from_json(j.at("spectral"));
    if (!j.at("tail_stats").is_null()) r.tail_stats = tail_stats_from_json(j.at("tail_stats"));
    if (!j.at("drift_certificates").is_null())
        for (const auto& e : j.at("drift_certificates"))
            r.certificates.push_back(certificate_from_json(e));
    r.wall_clock_seconds = j.at("wall_clock_seconds").get<double>();
    r.sample_files = j.at("sample_files").get<std::vector<std::string>>();
    return r;
}

std::string emit_report(const RunReport& report, const std::string& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw_io("IoFailure", "cannot create output directory '" + out_dir + "'");
    const std::string path = (std::filesystem::path(out_dir) / "report.json").string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw_io("IoFailure", "cannot open '" + path + "' for writing");
    out << report_to_json(report).dump(2) << '\n';
    if (!out) throw_io("IoFailure", "failed writing '" + path + "'");
    return path;
}

}  // namespace rsou
