#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rsou/model.hpp"
#include "rsou/spectral.hpp"

namespace rsou {

enum class RecurrenceKind { PositiveRecurrent, Transient, Indeterminate };

struct RecurrenceVerdict {
    RecurrenceKind kind = RecurrenceKind::Indeterminate;
    double drift_index = 0.0;  // sum_i mu_i alpha_i
    std::string reason;        // names the deciding or failing hypothesis
};

enum class TailKind { HeavyJumpDriven, HeavySwitchDriven, Light, Unknown };

struct TailVerdict {
    TailKind kind = TailKind::Unknown;
    std::string reason;
    int jump_state = -1;            // 0-based regime witnessing the divergence
    double moment_threshold = 0.0;  // kappa v 2 for the switch-driven branch
};

struct ConditionUse {
    std::string id;
    bool value = false;
};

struct VerdictReport {
    RecurrenceVerdict recurrence;
    TailVerdict tail;
    SpectralReport spectral;
    IntegrabilityReport integrability;
    std::vector<ConditionUse> conditions_used;
};

// Drift-index sign gated by the integrability conditions; Indeterminate names
// the failing hypothesis (|drift| <= 1e-12, or a condition is false).
RecurrenceVerdict classify_recurrence(const RegimeModel& model);

// Requires a PositiveRecurrent verdict (throws Precondition otherwise).
TailVerdict classify_tail(const RegimeModel& model, const SpectralReport& spectral);

// Full pipeline; when not positive recurrent the tail slot carries Unknown
// with the reason instead of throwing.
VerdictReport classify(const RegimeModel& model);

// Per-regime generator L^{(i)} f = drift/diffusion part + jump part, the
// latter by adaptive quadrature against the measure (absolute tolerance
// 1e-9 (1+|f(x)|)). switching_values, when given, supplies f(x, j) for all j
// so the regime-coupling term sum_j q_ij (f_j - f_i) can be added.
double generator_apply(const std::function<double(double)>& f,
                       const std::function<double(double)>& fp,
                       const std::function<double(double)>& fpp, double x, int i,
                       const RegimeModel& model,
                       const std::vector<double>* switching_values = nullptr);

struct GridSpec {
    double lo = 1.0;
    double hi = 1e6;
    int points_per_decade = 12;
};

enum class CertificateFunction { LogQuadratic, ReciprocalQuadratic };

struct DriftCertificate {
    CertificateFunction function_id = CertificateFunction::LogQuadratic;
    double epsilon = 0.0;
    double delta = 0.0;        // reciprocal family only
    std::optional<double> r0;  // smallest grid radius past which the bound holds
    std::vector<double> per_state_margins;  // worst slack per regime on |x| >= r0
    GridSpec grid;
};

// Checks L^{(i)} h(x) <= (alpha_i + eps) g(x) with h = log(1+x^2),
// g = 2x^2/(1+x^2) on the grid (both signs). Needs 0 < eps < -drift_index and
// the log-moment condition.
DriftCertificate verify_log_drift(const RegimeModel& model, double epsilon,
                                  const GridSpec& grid = {});

// Checks L^{(i)} V(x) <= (-2 alpha_i + eps) V(x) with V = 1/(delta + x^2),
// 0 < delta < 1; when drift_index > 0 additionally requires eps < drift_index.
// Needs the abs-square-moment condition.
DriftCertificate verify_reciprocal_drift(const RegimeModel& model, double delta,
                                         double epsilon, const GridSpec& grid = {});

// Hill estimator on descending-sorted positive samples: inverse of the mean
// log-spacing over the top k order statistics.
double hill_tail_index(const std::vector<double>& sorted_desc, std::size_t k);

struct HillSweepPoint {
    std::size_t k = 0;
    double index = 0.0;
};

// 10 log-spaced k values; samples are |x| values in any order.
std::vector<HillSweepPoint> hill_sweep(const std::vector<double>& samples_abs,
                                       int n_points = 10);

struct MomentCurvePoint {
    double p = 0.0;
    std::vector<std::pair<std::size_t, double>> prefix_means;  // (n, mean |x|^p)
};

std::vector<MomentCurvePoint> empirical_moment_curve(const std::vector<double>& samples,
                                                     const std::vector<double>& p_list);

// running means of e^{lambda |x|} at nested prefixes (divergence probe)
std::vector<std::pair<std::size_t, double>> exp_moment_probe(
    const std::vector<double>& samples, double lambda);

// sup distance between the empirical CDF and a monotone cdf callable
double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf);

struct TailStats {
    std::vector<HillSweepPoint> hill;
    std::vector<MomentCurvePoint> moment_curve;
    double probe_lambda = 0.5;
    std::vector<std::pair<std::size_t, double>> exp_probe;
    std::optional<double> ks_distance;
};

TailStats compute_tail_stats(const std::vector<double>& xs, double probe_lambda,
                             const std::vector<double>& p_list);

}  // namespace rsou
