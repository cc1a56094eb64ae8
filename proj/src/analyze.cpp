#include "rsou/analyze.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rsou/chain.hpp"
#include "rsou/errors.hpp"

namespace rsou {

namespace {
constexpr double kDriftTol = 1e-12;

std::vector<ConditionUse> condition_list(const IntegrabilityReport& rep, double drift,
                                         double max_alpha) {
    std::vector<ConditionUse> out;
    out.push_back({"cond_13", rep.cond_13});
    out.push_back({"cond_a1", rep.cond_a1});
    out.push_back({"cond_a15", rep.cond_a15});
    for (std::size_t i = 0; i < rep.cond_a2_per_state.size(); ++i)
        out.push_back({"cond_a2[" + std::to_string(i + 1) + "]", rep.cond_a2_per_state[i]});
    out.push_back({"cond_a4_witnessed", rep.cond_a4_lambda0.has_value()});
    out.push_back({"drift_index_negative", drift < -kDriftTol});
    out.push_back({"drift_index_positive", drift > kDriftTol});
    out.push_back({"max_alpha_negative", max_alpha < 0.0});
    out.push_back({"max_alpha_positive", max_alpha > 0.0});
    return out;
}
}  // namespace

RecurrenceVerdict classify_recurrence(const RegimeModel& model) {
    RecurrenceVerdict v;
    const StationaryLaw law = stationary_distribution(model.q);
    v.drift_index = law.mu.dot(model.alpha);
    const IntegrabilityReport rep =
        classify_integrability(model.triplet.measure, model.sigma);

    if (std::fabs(v.drift_index) <= kDriftTol) {
        v.kind = RecurrenceKind::Indeterminate;
        v.reason = "drift index zero — classification boundary";
    } else if (v.drift_index < 0.0) {
        if (rep.cond_a1) {
            v.kind = RecurrenceKind::PositiveRecurrent;
            v.reason = "log-moment condition holds and drift index < 0";
        } else {
            v.kind = RecurrenceKind::Indeterminate;
            v.reason = "log-moment condition (cond_a1) fails";
        }
    } else {
        if (rep.cond_a15) {
            v.kind = RecurrenceKind::Transient;
            v.reason = "abs-square-moment condition holds and drift index > 0";
        } else {
            v.kind = RecurrenceKind::Indeterminate;
            v.reason = "abs-square-moment condition (cond_a15) fails";
        }
    }
    return v;
}

TailVerdict classify_tail(const RegimeModel& model, const SpectralReport& spectral) {
    const RecurrenceVerdict rec = classify_recurrence(model);
    if (rec.kind != RecurrenceKind::PositiveRecurrent)
        throw_precondition("PreconditionNotRecurrent",
                           "tail classification needs a PositiveRecurrent verdict (" +
                               rec.reason + ")");

    TailVerdict t;
    const IntegrabilityReport rep =
        classify_integrability(model.triplet.measure, model.sigma);

    for (std::size_t i = 0; i < rep.cond_a2_per_state.size(); ++i) {
        if (rep.cond_a2_per_state[i]) {
            t.kind = TailKind::HeavyJumpDriven;
            t.jump_state = static_cast<int>(i);
            t.reason = "regime " + std::to_string(i + 1) +
                       " has all-lambda exponential divergence (cond_a2)";
            return t;
        }
    }

    if (rep.cond_a4_lambda0.has_value()) {
        const double max_alpha = model.alpha.maxCoeff();
        if (max_alpha < 0.0) {
            t.kind = TailKind::Light;
            t.reason = "uniform exponential-moment witness and max alpha < 0";
        } else if (max_alpha > 0.0) {
            t.kind = TailKind::HeavySwitchDriven;
            const double kap =
                spectral.kappa.kind == KappaResult::Kind::Finite ? spectral.kappa.value : 0.0;
            t.moment_threshold = std::max(2.0, kap);
            t.reason = "uniform exponential-moment witness and max alpha > 0";
        } else {
            t.kind = TailKind::Unknown;
            t.reason = "max alpha zero — classification boundary";
        }
        return t;
    }

    t.kind = TailKind::Unknown;
    t.reason = "no uniform exponential-moment witness on the dyadic grid and no "
               "per-regime divergence";
    return t;
}

VerdictReport classify(const RegimeModel& model) {
    VerdictReport rep;
    rep.recurrence = classify_recurrence(model);
    rep.integrability = classify_integrability(model.triplet.measure, model.sigma);
    rep.spectral = spectral_report(model.q, model.alpha);
    if (rep.recurrence.kind == RecurrenceKind::PositiveRecurrent) {
        rep.tail = classify_tail(model, rep.spectral);
    } else {
        rep.tail.kind = TailKind::Unknown;
        rep.tail.reason = "requires positive recurrence (" + rep.recurrence.reason + ")";
    }
    rep.conditions_used =
        condition_list(rep.integrability, rep.recurrence.drift_index, model.alpha.maxCoeff());
    return rep;
}

double generator_apply(const std::function<double(double)>& f,
                       const std::function<double(double)>& fp,
                       const std::function<double(double)>& fpp, double x, int i,
                       const RegimeModel& model,
                       const std::vector<double>* switching_values) {
    if (i < 0 || i >= model.n) throw_config("StateOutOfRange", "regime index");
    const double alpha = model.alpha(i);
    const double sig = model.sigma(i);
    const double a = model.triplet.a;
    const double b = model.triplet.b;

    const double fx = f(x);
    double value = (alpha * x + b * sig) * fp(x) + 0.5 * a * sig * sig * fpp(x);

    if (sig != 0.0 && !is_structurally_zero(model.triplet.measure)) {
        const double fpx = fp(x);
        auto g = [&](double z) {
            double w = f(x + sig * z) - fx;
            if (std::fabs(z) < 1.0) w -= sig * z * fpx;
            return w;
        };
        value += nu_integral(model.triplet.measure, g, 1e-9 * (1.0 + std::fabs(fx)));
    }

    if (switching_values) {
        if (static_cast<int>(switching_values->size()) != model.n)
            throw_config("DimensionMismatch", "switching values must have one entry per regime");
        for (int j = 0; j < model.n; ++j) {
            if (j == i) continue;
            value += model.q(i, j) * ((*switching_values)[j] - (*switching_values)[i]);
        }
    }
    return value;
}

namespace {

std::vector<double> grid_levels(const GridSpec& grid) {
    if (!(grid.lo > 0.0) || !(grid.hi > grid.lo) || grid.points_per_decade < 1)
        throw_config("InvalidGrid", "grid needs 0 < lo < hi and points_per_decade >= 1");
    std::vector<double> levels;
    const double step = std::pow(10.0, 1.0 / grid.points_per_decade);
    for (double v = grid.lo; v <= grid.hi * (1.0 + 1e-12); v *= step) levels.push_back(v);
    if (levels.back() < grid.hi) levels.push_back(grid.hi);
    return levels;
}

// shared grid search: margin(i, x) >= 0 must hold for all regimes and both
// signs at every level >= r0
DriftCertificate run_grid(const RegimeModel& model, const GridSpec& grid,
                          const std::function<double(int, double)>& margin,
                          CertificateFunction fn, double epsilon, double delta) {
    DriftCertificate cert;
    cert.function_id = fn;
    cert.epsilon = epsilon;
    cert.delta = delta;
    cert.grid = grid;

    const std::vector<double> levels = grid_levels(grid);
    const int n_levels = static_cast<int>(levels.size());
    std::vector<std::vector<double>> worst(model.n, std::vector<double>(n_levels));
    for (int li = 0; li < n_levels; ++li) {
        for (int i = 0; i < model.n; ++i) {
            worst[i][li] = std::min(margin(i, levels[li]), margin(i, -levels[li]));
        }
    }

    int first_ok = n_levels;  // smallest index from which every level passes
    for (int li = n_levels - 1; li >= 0; --li) {
        bool ok = true;
        for (int i = 0; i < model.n && ok; ++i) ok = worst[i][li] >= 0.0;
        if (!ok) break;
        first_ok = li;
    }
    if (first_ok < n_levels) {
        cert.r0 = levels[first_ok];
        cert.per_state_margins.assign(model.n, std::numeric_limits<double>::infinity());
        for (int i = 0; i < model.n; ++i)
            for (int li = first_ok; li < n_levels; ++li)
                cert.per_state_margins[i] = std::min(cert.per_state_margins[i], worst[i][li]);
    } else {
        cert.per_state_margins.assign(model.n, -std::numeric_limits<double>::infinity());
        for (int i = 0; i < model.n; ++i) cert.per_state_margins[i] = worst[i][n_levels - 1];
    }
    return cert;
}

}  // namespace

DriftCertificate verify_log_drift(const RegimeModel& model, double epsilon,
                                  const GridSpec& grid) {
    const RecurrenceVerdict rec = classify_recurrence(model);
    if (!(epsilon > 0.0 && epsilon < -rec.drift_index))
        throw_precondition("PreconditionEpsilon",
                           "epsilon must lie in (0, -drift_index); drift_index = " +
                               std::to_string(rec.drift_index));
    if (!has_log_moment(model.triplet.measure))
        throw_precondition("PreconditionIntegrability",
                           "log-drift certificate needs the log-moment condition");

    auto h = [](double x) { return std::log1p(x * x); };
    auto hp = [](double x) { return 2.0 * x / (1.0 + x * x); };
    auto hpp = [](double x) {
        const double d = 1.0 + x * x;
        return 2.0 * (1.0 - x * x) / (d * d);
    };
    auto g = [](double x) { return 2.0 * x * x / (1.0 + x * x); };

    auto margin = [&](int i, double x) {
        const double lhs = generator_apply(h, hp, hpp, x, i, model);
        return (model.alpha(i) + epsilon) * g(x) - lhs;
    };
    return run_grid(model, grid, margin, CertificateFunction::LogQuadratic, epsilon, 0.0);
}

DriftCertificate verify_reciprocal_drift(const RegimeModel& model, double delta,
                                         double epsilon, const GridSpec& grid) {
    if (!(delta > 0.0 && delta < 1.0))
        throw_precondition("PreconditionDelta", "delta must lie in (0, 1)");
    const RecurrenceVerdict rec = classify_recurrence(model);
    if (!(epsilon > 0.0) ||
        (rec.drift_index > 0.0 && !(epsilon < rec.drift_index)))
        throw_precondition("PreconditionEpsilon",
                           "epsilon must be positive (and below the drift index when "
                           "that is positive)");
    if (!has_abs_square_moment(model.triplet.measure))
        throw_precondition("PreconditionIntegrability",
                           "reciprocal certificate needs the abs-square-moment condition");

    auto v = [delta](double x) { return 1.0 / (delta + x * x); };
    auto vp = [delta](double x) {
        const double d = delta + x * x;
        return -2.0 * x / (d * d);
    };
    auto vpp = [delta](double x) {
        const double d = delta + x * x;
        return (6.0 * x * x - 2.0 * delta) / (d * d * d);
    };

    auto margin = [&](int i, double x) {
        const double lhs = generator_apply(v, vp, vpp, x, i, model);
        return (-2.0 * model.alpha(i) + epsilon) * v(x) - lhs;
    };
    return run_grid(model, grid, margin, CertificateFunction::ReciprocalQuadratic, epsilon,
                    delta);
}

double hill_tail_index(const std::vector<double>& sorted_desc, std::size_t k) {
    const std::size_t n = sorted_desc.size();
    if (k < 1 || k + 1 > n)
        throw_precondition("InvalidOrderCount", "need 1 <= k < sample count");
    const double pivot = sorted_desc[k];
    if (!(pivot > 0.0) || !(sorted_desc[k - 1] > 0.0))
        throw_precondition("NonPositiveSample", "top-k order statistics must be positive");
    double h = 0.0;
    for (std::size_t j = 0; j < k; ++j) h += std::log(sorted_desc[j] / pivot);
    h /= static_cast<double>(k);
    if (h == 0.0) throw_numerical("DegenerateSample", "all top-k log-spacings are zero");
    return 1.0 / h;
}

std::vector<HillSweepPoint> hill_sweep(const std::vector<double>& samples_abs,
                                       int n_points) {
    std::vector<double> sorted = samples_abs;
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    const double n = static_cast<double>(sorted.size());
    std::vector<HillSweepPoint> out;
    for (int j = 0; j < n_points; ++j) {
        const double expo = 0.40 + 0.025 * j;
        auto k = static_cast<std::size_t>(std::llround(std::pow(n, expo)));
        k = std::max<std::size_t>(5, std::min(k, sorted.size() - 2));
        if (!out.empty() && out.back().k == k) continue;
        out.push_back({k, hill_tail_index(sorted, k)});
    }
    return out;
}

namespace {
std::vector<std::size_t> prefix_sizes(std::size_t n) {
    std::vector<std::size_t> sizes;
    for (std::size_t s = 1000; s < n; s *= 10) sizes.push_back(s);
    sizes.push_back(n);
    return sizes;
}
}  // namespace

std::vector<MomentCurvePoint> empirical_moment_curve(const std::vector<double>& samples,
                                                     const std::vector<double>& p_list) {
    if (samples.empty()) throw_precondition("EmptySample", "need at least one sample");
    const auto sizes = prefix_sizes(samples.size());
    std::vector<MomentCurvePoint> out;
    for (double p : p_list) {
        MomentCurvePoint pt;
        pt.p = p;
        double sum = 0.0;
        std::size_t done = 0;
        for (std::size_t target : sizes) {
            for (; done < target; ++done) sum += std::pow(std::fabs(samples[done]), p);
            pt.prefix_means.emplace_back(target, sum / static_cast<double>(target));
        }
        out.push_back(std::move(pt));
    }
    return out;
}

std::vector<std::pair<std::size_t, double>> exp_moment_probe(
    const std::vector<double>& samples, double lambda) {
    if (samples.empty()) throw_precondition("EmptySample", "need at least one sample");
    const auto sizes = prefix_sizes(samples.size());
    std::vector<std::pair<std::size_t, double>> out;
    double sum = 0.0;
    std::size_t done = 0;
    for (std::size_t target : sizes) {
        for (; done < target; ++done) sum += std::exp(lambda * std::fabs(samples[done]));
        out.emplace_back(target, sum / static_cast<double>(target));
    }
    return out;
}

double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf) {
    if (samples.empty()) throw_precondition("EmptySample", "need at least one sample");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double fi = cdf(samples[i]);
        d = std::max(d, fi - static_cast<double>(i) / n);
        d = std::max(d, static_cast<double>(i + 1) / n - fi);
    }
    return d;
}

TailStats compute_tail_stats(const std::vector<double>& xs, double probe_lambda,
                             const std::vector<double>& p_list) {
    TailStats stats;
    stats.probe_lambda = probe_lambda;
    std::vector<double> abs_xs(xs.size());
    std::transform(xs.begin(), xs.end(), abs_xs.begin(),
                   [](double v) { return std::fabs(v); });
    if (xs.size() >= 16) stats.hill = hill_sweep(abs_xs);
    stats.moment_curve = empirical_moment_curve(xs, p_list);
    stats.exp_probe = exp_moment_probe(xs, probe_lambda);
    return stats;
}

}  // namespace rsou
