#include "rsou/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <thread>

#include "rsou/analyze.hpp"
#include "rsou/errors.hpp"
#include "rsou/special.hpp"

namespace rsou {

void validate_plan(const IncrementPlan& plan) {
    if (!(plan.epsilon_trunc > 0.0 && plan.epsilon_trunc <= 1.0))
        throw_config("InvalidPlan", "epsilon_trunc must lie in (0, 1]");
    if (!(plan.dt_max > 0.0))
        throw_config("InvalidPlan", "dt_max must be positive");
}

// ---- JumpSampler -------------------------------------------------------------

JumpSampler::JumpSampler(const LevyMeasureSpec& measure, double epsilon)
    : measure_(measure), eps_(epsilon) {
    intensity_ = mass_above(measure_, eps_);
    comp_mean_ = mean_between(measure_, eps_, 1.0);
    small_var_ = variance_below(measure_, eps_);

    if (const auto* cp = std::get_if<CompoundPoisson>(&measure_)) {
        if (const auto* g = std::get_if<GaussianJump>(&cp->jump)) {
            g_plo_ = norm_cdf((-eps_ - g->mean) / g->sd);
            const double p_up = 1.0 - norm_cdf((eps_ - g->mean) / g->sd);
            g_q_ = g_plo_ + p_up;
        } else if (const auto* e = std::get_if<TwoSidedExponentialJump>(&cp->jump)) {
            const double pos = e->weight_pos * std::exp(-e->rate_pos * eps_);
            const double neg = (1.0 - e->weight_pos) * std::exp(-e->rate_neg * eps_);
            e_ppos_ = pos + neg > 0.0 ? pos / (pos + neg) : 0.0;
        }
    } else if (const auto* t = std::get_if<TemperedPowerLaw>(&measure_)) {
        TemperedPowerLaw pos_only = *t;
        pos_only.c_neg = 0.0;
        const double lam_pos = mass_above(LevyMeasureSpec{pos_only}, eps_);
        t_ppos_ = intensity_ > 0.0 ? lam_pos / intensity_ : 0.0;
    }
}

double JumpSampler::sample(RngStream& rng) const {
    if (const auto* cp = std::get_if<CompoundPoisson>(&measure_)) {
        if (const auto* g = std::get_if<GaussianJump>(&cp->jump)) {
            double u;
            do {
                u = rng.uniform01() * g_q_;
            } while (!(u > 0.0 && u < g_q_));
            if (u < g_plo_) return g->mean + g->sd * norm_quantile(u);
            return g->mean + g->sd * norm_quantile(1.0 - (g_q_ - u));
        }
        if (const auto* e = std::get_if<TwoSidedExponentialJump>(&cp->jump)) {
            if (rng.uniform01() < e_ppos_) return eps_ + rng.exponential(e->rate_pos);
            return -(eps_ + rng.exponential(e->rate_neg));
        }
        if (const auto* p = std::get_if<ParetoJump>(&cp->jump)) {
            double sgn = 1.0;
            if (p->side == ParetoSide::Minus) sgn = -1.0;
            else if (p->side == ParetoSide::Both) sgn = rng.uniform01() < 0.5 ? 1.0 : -1.0;
            const double lo = std::max(p->scale, eps_);
            return sgn * lo * std::pow(rng.uniform_pos(), -1.0 / p->beta);
        }
        const auto& pm = std::get<PointMassJump>(cp->jump);
        return pm.z0;
    }
    if (const auto* t = std::get_if<TemperedPowerLaw>(&measure_)) {
        const bool plus = rng.uniform01() < t_ppos_;
        const double beta = plus ? t->beta_pos : t->beta_neg;
        const double theta = plus ? t->theta_pos : t->theta_neg;
        double mag = 0.0;
        for (long tries = 0;; ++tries) {
            if (tries > 1000000)
                throw_numerical("SamplerRejectionBudget",
                                "tempered tail rejection sampler stalled");
            mag = eps_ * std::pow(rng.uniform_pos(), -1.0 / beta);
            if (theta == 0.0 || rng.uniform01() <= std::exp(-theta * (mag - eps_))) break;
        }
        return plus ? mag : -mag;
    }
    return 0.0;  // zero measure: intensity 0, never reached
}

// ---- shared dynamics ----------------------------------------------------------

namespace {

struct Dynamics {
    const RegimeModel& model;
    IncrementPlan plan;
    JumpSampler sampler;
    double b_eff;  // triplet drift minus the [eps, 1) compensator
    double a_eff;  // Gaussian coefficient plus the small-jump replacement

    Dynamics(const RegimeModel& m, const IncrementPlan& p)
        : model(m), plan(p), sampler(m.triplet.measure, p.epsilon_trunc) {
        b_eff = m.triplet.b - sampler.compensator_mean();
        a_eff = m.triplet.a;
        if (p.small_jump_mode == SmallJumpMode::CompensateGaussian)
            a_eff += sampler.small_variance();
    }

    static void check_finite(double x, double t) {
        if (!std::isfinite(x) || std::fabs(x) > 1e300)
            throw_numerical("NonFiniteState",
                            "state left the finite range at t = " + std::to_string(t));
    }

    // exact update over a jump-free stretch of length g in regime i
    double gauss_step(double x, double g, int i, RngStream& rng) const {
        if (!(g > 0.0)) return x;
        const double alpha = model.alpha(i);
        const double sig = model.sigma(i);
        double decay, mean, var;
        if (alpha == 0.0) {
            decay = 1.0;
            mean = b_eff * sig * g;
            var = a_eff * sig * sig * g;
        } else {
            decay = std::exp(alpha * g);
            mean = b_eff * sig * std::expm1(alpha * g) / alpha;
            var = a_eff * sig * sig * std::expm1(2.0 * alpha * g) / (2.0 * alpha);
        }
        return decay * x + mean + std::sqrt(var) * rng.gaussian();
    }

    // one substep [t0, t1] in regime i, with marked large jumps inside
    double substep(double x, double t0, double t1, int i, RngStream& rng,
                   PathSample* out) const {
        const double s = t1 - t0;
        const double sig = model.sigma(i);
        std::vector<std::pair<double, double>> jumps;
        const std::uint64_t k = rng.poisson(sampler.intensity() * s);
        jumps.reserve(k);
        for (std::uint64_t j = 0; j < k; ++j)
            jumps.emplace_back(rng.uniform01() * s, sampler.sample(rng));
        std::sort(jumps.begin(), jumps.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        double pos = 0.0;
        for (const auto& [off, z] : jumps) {
            x = gauss_step(x, off - pos, i, rng);
            pos = off;
            if (out) {
                out->times.push_back(t0 + off);
                out->x.push_back(x);
                out->lambda.push_back(i);
            }
            const double applied = sig * z;
            x += applied;
            check_finite(x, t0 + off);
            if (out) {
                out->large_jump_log.push_back({t0 + off, i, applied});
                out->times.push_back(t0 + off);
                out->x.push_back(x);
                out->lambda.push_back(i);
            }
        }
        x = gauss_step(x, s - pos, i, rng);
        check_finite(x, t1);
        if (out) {
            out->times.push_back(t1);
            out->x.push_back(x);
            out->lambda.push_back(i);
        }
        return x;
    }

    // advance across [t, seg_end] in regime i with substeps capped at dt_max
    double segment(double x, double& t, double seg_end, int i, RngStream& rng,
                   PathSample* out) const {
        while (t < seg_end) {
            const double rem = seg_end - t;
            const double s = std::min(plan.dt_max, rem);
            const bool last = s >= rem;
            const double t1 = last ? seg_end : t + s;
            x = substep(x, t, t1, i, rng, out);
            t = t1;
        }
        return x;
    }
};

}  // namespace

// ---- operations ---------------------------------------------------------------

LevyIncrement sample_levy_increment(const LevyTriplet& triplet, double dt,
                                    const IncrementPlan& plan, RngStream& rng) {
    validate_plan(plan);
    if (!(dt > 0.0 && dt <= plan.dt_max))
        throw_precondition("StepOutOfRange", "dt must lie in (0, dt_max]");
    JumpSampler sampler(triplet.measure, plan.epsilon_trunc);

    LevyIncrement inc;
    const std::uint64_t k = rng.poisson(sampler.intensity() * dt);
    inc.large_jumps.reserve(k);
    for (std::uint64_t j = 0; j < k; ++j)
        inc.large_jumps.emplace_back(rng.uniform01() * dt, sampler.sample(rng));
    std::sort(inc.large_jumps.begin(), inc.large_jumps.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    const double b_eff = triplet.b - sampler.compensator_mean();
    inc.continuous = b_eff * dt + std::sqrt(triplet.a * dt) * rng.gaussian();
    if (plan.small_jump_mode == SmallJumpMode::CompensateGaussian) {
        const double v = sampler.small_variance() * dt;
        if (v > 0.0) inc.continuous += std::sqrt(v) * rng.gaussian();
    }
    return inc;
}

PathSample simulate_path(const RegimeModel& model, double x0, int i0, double horizon,
                         const IncrementPlan& plan, RngStream& rng) {
    validate_plan(plan);
    if (i0 < 0 || i0 >= model.n) throw_config("StateOutOfRange", "initial regime index");
    if (!(horizon >= 0.0)) throw_config("InvalidHorizon", "horizon must be >= 0");
    if (!std::isfinite(x0)) throw_config("InvalidStart", "x0 must be finite");

    ChainPath chain = sample_chain_path(model.q, i0, horizon, rng);
    Dynamics dyn(model, plan);

    PathSample out;
    out.times.push_back(0.0);
    out.x.push_back(x0);
    out.lambda.push_back(i0);

    double x = x0;
    double t = 0.0;
    const std::size_t n_seg = chain.states.size();
    for (std::size_t k = 0; k < n_seg; ++k) {
        const int state = chain.states[k];
        const double seg_end = (k + 1 < n_seg) ? chain.switch_times[k] : horizon;
        x = dyn.segment(x, t, seg_end, state, rng, &out);
        if (k + 1 < n_seg) {  // boundary row carrying the new regime
            out.times.push_back(seg_end);
            out.x.push_back(x);
            out.lambda.push_back(chain.states[k + 1]);
        }
    }
    return out;
}

StationarySample sample_stationary(const RegimeModel& model, double burn_in,
                                   std::size_t n_draws, double gap,
                                   const IncrementPlan& plan, RngStream& rng,
                                   bool allow_nonrecurrent, double x0, int i0) {
    validate_plan(plan);
    if (!(burn_in >= 0.0)) throw_config("InvalidBurnIn", "burn_in must be >= 0");
    if (n_draws > 1 && !(gap > 0.0))
        throw_config("InvalidGap", "gap must be positive when retaining several draws");
    if (i0 < 0 || i0 >= model.n) throw_config("StateOutOfRange", "initial regime index");

    if (!allow_nonrecurrent) {
        const auto verdict = classify_recurrence(model);
        if (verdict.kind != RecurrenceKind::PositiveRecurrent)
            throw_precondition("PreconditionNotRecurrent",
                               "stationary sampling requires a PositiveRecurrent verdict "
                               "(got " + verdict.reason + "); set the override to force");
    }

    StationarySample out;
    out.burn_in = burn_in;
    out.gap = gap;
    out.draws.reserve(n_draws);
    if (n_draws == 0) return out;

    Dynamics dyn(model, plan);
    double x = x0;
    int state = i0;
    double t = 0.0;
    double next_switch = rng.exponential(-model.q(state, state));

    for (std::size_t k = 0; k < n_draws; ++k) {
        const double t_collect = burn_in + static_cast<double>(k) * gap;
        while (t < t_collect) {
            const bool is_switch = next_switch < t_collect;
            const double seg_end = is_switch ? next_switch : t_collect;
            x = dyn.segment(x, t, seg_end, state, rng, nullptr);
            if (is_switch) {
                double u = rng.uniform01() * (-model.q(state, state));
                int next = state;
                for (int j = 0; j < model.n; ++j) {
                    if (j == state) continue;
                    u -= model.q(state, j);
                    if (u < 0.0) {
                        next = j;
                        break;
                    }
                }
                if (next == state) {
                    for (int j = model.n - 1; j >= 0; --j)
                        if (j != state && model.q(state, j) > 0.0) {
                            next = j;
                            break;
                        }
                }
                state = next;
                next_switch = t + rng.exponential(-model.q(state, state));
            }
        }
        out.draws.emplace_back(x, state);
    }
    return out;
}

std::vector<TerminalResult> simulate_terminal_batch(const RegimeModel& model, double x0,
                                                    int i0, double horizon,
                                                    const IncrementPlan& plan,
                                                    std::uint64_t master_seed,
                                                    std::size_t n_paths, int workers) {
    validate_plan(plan);
    std::vector<TerminalResult> results(n_paths);
    if (n_paths == 0) return results;
    workers = std::max(1, std::min<int>(workers, static_cast<int>(n_paths)));

    auto run_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            RngStream rng(master_seed, k);
            try {
                PathSample p = simulate_path(model, x0, i0, horizon, plan, rng);
                results[k] = {p.x.back(), false};
            } catch (const Error& e) {
                if (e.code() != "NonFiniteState") throw;
                results[k] = {std::numeric_limits<double>::infinity(), true};
            }
        }
    };

    if (workers == 1) {
        run_range(0, n_paths);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (n_paths + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const std::size_t begin = static_cast<std::size_t>(w) * chunk;
            const std::size_t end = std::min(n_paths, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(run_range, begin, end);
        }
        for (auto& th : pool) th.join();
    }
    return results;
}

// ---- CSV ------------------------------------------------------------------------

namespace {
void put_double(std::ostream& os, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
}
}  // namespace

void write_path_csv(const PathSample& path, std::ostream& os) {
    os << "time,x,state\n";
    for (std::size_t k = 0; k < path.times.size(); ++k) {
        put_double(os, path.times[k]);
        os << ',';
        put_double(os, path.x[k]);
        os << ',' << (path.lambda[k] + 1) << '\n';
    }
}

void write_stationary_csv(const StationarySample& sample, std::ostream& os) {
    os << "x,state\n";
    for (const auto& [x, state] : sample.draws) {
        put_double(os, x);
        os << ',' << (state + 1) << '\n';
    }
}

}  // namespace rsou
