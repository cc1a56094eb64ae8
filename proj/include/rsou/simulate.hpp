#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "rsou/chain.hpp"
#include "rsou/model.hpp"
#include "rsou/rng.hpp"

namespace rsou {

enum class SmallJumpMode { CompensateGaussian, Drop };

struct IncrementPlan {
    double epsilon_trunc = 0.01;  // small-jump cutoff, in (0, 1]
    SmallJumpMode small_jump_mode = SmallJumpMode::CompensateGaussian;
    double dt_max = 0.05;  // maximal integration substep
};

void validate_plan(const IncrementPlan& plan);

// Truncated jump machinery for one (measure, epsilon) pair. Jumps with
// |z| >= epsilon arrive as a marked Poisson process; everything below is
// summarized by its compensator mean on [eps, 1) and its variance below eps.
class JumpSampler {
public:
    JumpSampler(const LevyMeasureSpec& measure, double epsilon);

    double intensity() const { return intensity_; }          // nu({|z| >= eps})
    double compensator_mean() const { return comp_mean_; }   // ∫_{eps<=|z|<1} z nu
    double small_variance() const { return small_var_; }     // ∫_{|z|<eps} z^2 nu

    // one jump size conditioned on |z| >= eps
    double sample(RngStream& rng) const;

private:
    LevyMeasureSpec measure_;
    double eps_;
    double intensity_ = 0.0, comp_mean_ = 0.0, small_var_ = 0.0;
    double g_plo_ = 0.0, g_q_ = 0.0;  // Gaussian tail masses
    double e_ppos_ = 0.0;             // two-sided exponential: conditional + side
    double t_ppos_ = 0.0;             // tempered power law: conditional + side
};

struct LevyIncrement {
    double continuous = 0.0;  // drift + Brownian + small-jump replacement
    std::vector<std::pair<double, double>> large_jumps;  // (offset, size), by offset
};

LevyIncrement sample_levy_increment(const LevyTriplet& triplet, double dt,
                                    const IncrementPlan& plan, RngStream& rng);

struct PathSample {
    std::vector<double> times;  // nondecreasing, duplicated across jump points
    std::vector<double> x;
    std::vector<int> lambda;  // regime per record, 0-based
    struct JumpRecord {
        double time;
        int state;
        double applied;  // sigma_Lambda * z
    };
    std::vector<JumpRecord> large_jump_log;
};

// Chain path first, then exact linear updates between sub-events: over a
// jump-free stretch of length s in regime i,
//   X <- e^{a_i s} X + N(mean_i(s), var_i(s))
// with the integrated drift/diffusion moments in closed form; large jumps add
// sigma_i z at their sampled offsets. Throws Numerical/NonFiniteState when
// |X| overflows 1e300 (expected under transience, not an internal error).
PathSample simulate_path(const RegimeModel& model, double x0, int i0, double horizon,
                         const IncrementPlan& plan, RngStream& rng);

struct StationarySample {
    std::vector<std::pair<double, int>> draws;  // (x, regime)
    double burn_in = 0.0;
    double gap = 0.0;
    std::uint64_t master_seed = 0, stream_index = 0;  // filled by the caller
};

// One long trajectory, thinned at burn_in + k*gap. Requires the recurrence
// classifier to say PositiveRecurrent unless allow_nonrecurrent is set.
StationarySample sample_stationary(const RegimeModel& model, double burn_in,
                                   std::size_t n_draws, double gap,
                                   const IncrementPlan& plan, RngStream& rng,
                                   bool allow_nonrecurrent = false, double x0 = 0.0,
                                   int i0 = 0);

struct TerminalResult {
    double x = 0.0;
    bool escaped = false;  // hit the NonFiniteState guard before the horizon
};

// Batch of independent paths; path k consumes RngStream(master_seed, k), so
// the result is reproducible for any worker count.
std::vector<TerminalResult> simulate_terminal_batch(const RegimeModel& model, double x0,
                                                    int i0, double horizon,
                                                    const IncrementPlan& plan,
                                                    std::uint64_t master_seed,
                                                    std::size_t n_paths, int workers);

// CSV export: header row, UTF-8, LF line endings; states are 1-based.
void write_path_csv(const PathSample& path, std::ostream& os);
void write_stationary_csv(const StationarySample& sample, std::ostream& os);

}  // namespace rsou
