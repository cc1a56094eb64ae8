#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rsou/model.hpp"
#include "rsou/simulate.hpp"

namespace rsou {

struct RunSettings {
    double x0 = 0.0;
    int i0 = 1;  // 1-based regime index, as in the config file
    double horizon = 10.0;
    std::optional<double> burn_in;  // default 20/|drift index| at point of use
    std::uint64_t n_draws = 100000;
    double gap = 1.0;
    double dt_max = 0.05;
    double epsilon_trunc = 0.01;
    SmallJumpMode small_jump_mode = SmallJumpMode::CompensateGaussian;
    std::optional<double> epsilon;  // certificate slack; defaulted per drift sign
    double delta = 0.5;
    std::optional<std::uint64_t> hill_k;
    std::vector<double> p_list{1.0, 2.0, 3.0};
    double p = 2.0;  // moment order for the eta report
    double probe_lambda = 0.5;
    bool allow_nonrecurrent = false;
    std::string certificate = "auto";  // auto | log | reciprocal | both
    std::optional<int> oracle_state;   // 1-based; defaults to the common regime
    double cdf_x_min = -8.0, cdf_x_max = 8.0;
    int cdf_points = 321;
    std::optional<std::uint64_t> seed;
};

struct RunConfig {
    int schema = 1;
    ModelDescription model;
    RunSettings run;
};

// Strict key-value format: a top-level `schema = 1` line, then sections
// [chain], [drift], [noise], [levy], [run]. Unknown or duplicate keys are
// rejected with the offending section.key named. Overrides are
// "section.key=value" strings applied before validation.
RunConfig parse_config_text(const std::string& text,
                            const std::vector<std::string>& overrides = {});

RunConfig load_config(const std::string& path,
                      const std::vector<std::string>& overrides = {});

}  // namespace rsou
