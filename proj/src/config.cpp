#include "rsou/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "rsou/errors.hpp"

namespace rsou {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// section -> key -> value, with consumption tracking for the strict schema
class Entries {
public:
    void put(const std::string& section, const std::string& key, const std::string& value,
             bool allow_replace) {
        auto& slot = data_[section][key];
        if (!slot.value.empty() && !allow_replace)
            throw_config("DuplicateKey", qualified(section, key) + " appears twice");
        slot.value = value;
        slot.consumed = false;
    }

    std::optional<std::string> take(const std::string& section, const std::string& key) {
        auto sec = data_.find(section);
        if (sec == data_.end()) return std::nullopt;
        auto it = sec->second.find(key);
        if (it == sec->second.end()) return std::nullopt;
        it->second.consumed = true;
        return it->second.value;
    }

    std::string require(const std::string& section, const std::string& key) {
        auto v = take(section, key);
        if (!v) throw_config("MissingKey", qualified(section, key) + " is required");
        return *v;
    }

    void reject_unconsumed() const {
        for (const auto& [section, keys] : data_)
            for (const auto& [key, slot] : keys)
                if (!slot.consumed)
                    throw_config("UnknownKey", "unknown key " + qualified(section, key));
    }

    static std::string qualified(const std::string& section, const std::string& key) {
        return section.empty() ? key : "[" + section + "] " + key;
    }

private:
    struct Slot {
        std::string value;
        bool consumed = true;  // flipped to false on put
    };
    std::map<std::string, std::map<std::string, Slot>> data_;
};

double to_double(const std::string& raw, const std::string& what) {
    char* end = nullptr;
    const double v = std::strtod(raw.c_str(), &end);
    if (end == raw.c_str() || *end != '\0')
        throw_config("BadValue", what + ": cannot parse '" + raw + "' as a number");
    return v;
}

std::uint64_t to_u64(const std::string& raw, const std::string& what) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(raw.c_str(), &end, 10);
    if (end == raw.c_str() || *end != '\0')
        throw_config("BadValue", what + ": cannot parse '" + raw + "' as an unsigned integer");
    return v;
}

int to_int(const std::string& raw, const std::string& what) {
    char* end = nullptr;
    const long v = std::strtol(raw.c_str(), &end, 10);
    if (end == raw.c_str() || *end != '\0')
        throw_config("BadValue", what + ": cannot parse '" + raw + "' as an integer");
    return static_cast<int>(v);
}

bool to_bool(const std::string& raw, const std::string& what) {
    if (raw == "true" || raw == "1") return true;
    if (raw == "false" || raw == "0") return false;
    throw_config("BadValue", what + ": expected true/false");
}

std::vector<double> to_vector(const std::string& raw, const std::string& what) {
    std::istringstream in(raw);
    std::vector<double> out;
    std::string tok;
    while (in >> tok) out.push_back(to_double(tok, what));
    if (out.empty()) throw_config("BadValue", what + ": expected numbers");
    return out;
}

JumpDist parse_jump(Entries& e) {
    const std::string kind = e.require("levy", "jump");
    if (kind == "gaussian") {
        GaussianJump g;
        if (auto v = e.take("levy", "jump_mean")) g.mean = to_double(*v, "[levy] jump_mean");
        g.sd = to_double(e.require("levy", "jump_sd"), "[levy] jump_sd");
        return g;
    }
    if (kind == "two_sided_exponential") {
        TwoSidedExponentialJump t;
        t.rate_pos = to_double(e.require("levy", "rate_pos"), "[levy] rate_pos");
        t.rate_neg = to_double(e.require("levy", "rate_neg"), "[levy] rate_neg");
        t.weight_pos = to_double(e.require("levy", "weight_pos"), "[levy] weight_pos");
        return t;
    }
    if (kind == "pareto") {
        ParetoJump p;
        p.beta = to_double(e.require("levy", "beta"), "[levy] beta");
        const std::string side = e.require("levy", "side");
        if (side == "plus") p.side = ParetoSide::Plus;
        else if (side == "minus") p.side = ParetoSide::Minus;
        else if (side == "both") p.side = ParetoSide::Both;
        else throw_config("BadValue", "[levy] side: expected plus/minus/both");
        if (auto v = e.take("levy", "scale")) p.scale = to_double(*v, "[levy] scale");
        return p;
    }
    if (kind == "point_mass") {
        PointMassJump pm;
        pm.z0 = to_double(e.require("levy", "z0"), "[levy] z0");
        return pm;
    }
    throw_config("BadValue",
                 "[levy] jump: expected gaussian/two_sided_exponential/pareto/point_mass");
}

LevyMeasureSpec parse_measure(Entries& e) {
    const std::string kind = e.require("levy", "measure");
    if (kind == "zero") return ZeroMeasure{};
    if (kind == "compound_poisson") {
        CompoundPoisson cp;
        cp.rate = to_double(e.require("levy", "rate"), "[levy] rate");
        cp.jump = parse_jump(e);
        return cp;
    }
    if (kind == "tempered_power_law") {
        TemperedPowerLaw t;
        t.c_pos = to_double(e.require("levy", "c_pos"), "[levy] c_pos");
        t.c_neg = to_double(e.require("levy", "c_neg"), "[levy] c_neg");
        if (t.c_pos > 0.0) {
            t.beta_pos = to_double(e.require("levy", "beta_pos"), "[levy] beta_pos");
            if (auto v = e.take("levy", "theta_pos"))
                t.theta_pos = to_double(*v, "[levy] theta_pos");
        }
        if (t.c_neg > 0.0) {
            t.beta_neg = to_double(e.require("levy", "beta_neg"), "[levy] beta_neg");
            if (auto v = e.take("levy", "theta_neg"))
                t.theta_neg = to_double(*v, "[levy] theta_neg");
        }
        return t;
    }
    throw_config("BadValue",
                 "[levy] measure: expected zero/compound_poisson/tempered_power_law");
}

}  // namespace

RunConfig parse_config_text(const std::string& text,
                            const std::vector<std::string>& overrides) {
    Entries e;
    std::istringstream in(text);
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw_config("BadSection", "line " + std::to_string(line_no) +
                                               ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw_config("BadLine",
                         "line " + std::to_string(line_no) + ": expected key = value");
        e.put(section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), false);
    }

    for (const std::string& ov : overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos)
            throw_config("BadOverride", "override '" + ov + "' must be key=value");
        std::string key = trim(ov.substr(0, eq));
        std::string sec;
        if (auto dot = key.find('.'); dot != std::string::npos) {
            sec = key.substr(0, dot);
            key = key.substr(dot + 1);
        }
        e.put(sec, key, trim(ov.substr(eq + 1)), true);
    }

    RunConfig cfg;
    cfg.schema = to_int(e.require("", "schema"), "schema");
    if (cfg.schema != 1) throw_config("BadValue", "schema: only version 1 is supported");

    cfg.model.n = to_int(e.require("chain", "n"), "[chain] n");
    if (cfg.model.n < 1 || cfg.model.n > 64)
        throw_config("BadValue", "[chain] n must lie in [2, 64]");
    for (int i = 0; i < cfg.model.n; ++i) {
        const std::string key = "q" + std::to_string(i);
        cfg.model.q.push_back(to_vector(e.require("chain", key), "[chain] " + key));
    }
    cfg.model.alpha = to_vector(e.require("drift", "alpha"), "[drift] alpha");
    cfg.model.sigma = to_vector(e.require("noise", "sigma"), "[noise] sigma");

    if (auto v = e.take("levy", "b")) cfg.model.triplet.b = to_double(*v, "[levy] b");
    if (auto v = e.take("levy", "a")) cfg.model.triplet.a = to_double(*v, "[levy] a");
    cfg.model.triplet.measure = parse_measure(e);

    RunSettings& r = cfg.run;
    if (auto v = e.take("run", "x0")) r.x0 = to_double(*v, "[run] x0");
    if (auto v = e.take("run", "i0")) r.i0 = to_int(*v, "[run] i0");
    if (auto v = e.take("run", "horizon")) r.horizon = to_double(*v, "[run] horizon");
    if (auto v = e.take("run", "burn_in")) r.burn_in = to_double(*v, "[run] burn_in");
    if (auto v = e.take("run", "n_draws")) r.n_draws = to_u64(*v, "[run] n_draws");
    if (auto v = e.take("run", "gap")) r.gap = to_double(*v, "[run] gap");
    if (auto v = e.take("run", "dt_max")) r.dt_max = to_double(*v, "[run] dt_max");
    if (auto v = e.take("run", "epsilon_trunc"))
        r.epsilon_trunc = to_double(*v, "[run] epsilon_trunc");
    if (auto v = e.take("run", "small_jump_mode")) {
        if (*v == "compensate_gaussian") r.small_jump_mode = SmallJumpMode::CompensateGaussian;
        else if (*v == "drop") r.small_jump_mode = SmallJumpMode::Drop;
        else throw_config("BadValue", "[run] small_jump_mode: expected compensate_gaussian/drop");
    }
    if (auto v = e.take("run", "epsilon")) r.epsilon = to_double(*v, "[run] epsilon");
    if (auto v = e.take("run", "delta")) r.delta = to_double(*v, "[run] delta");
    if (auto v = e.take("run", "hill_k")) r.hill_k = to_u64(*v, "[run] hill_k");
    if (auto v = e.take("run", "p_list")) r.p_list = to_vector(*v, "[run] p_list");
    if (auto v = e.take("run", "p")) r.p = to_double(*v, "[run] p");
    if (auto v = e.take("run", "probe_lambda"))
        r.probe_lambda = to_double(*v, "[run] probe_lambda");
    if (auto v = e.take("run", "allow_nonrecurrent"))
        r.allow_nonrecurrent = to_bool(*v, "[run] allow_nonrecurrent");
    if (auto v = e.take("run", "certificate")) {
        if (*v != "auto" && *v != "log" && *v != "reciprocal" && *v != "both")
            throw_config("BadValue", "[run] certificate: expected auto/log/reciprocal/both");
        r.certificate = *v;
    }
    if (auto v = e.take("run", "oracle_state")) r.oracle_state = to_int(*v, "[run] oracle_state");
    if (auto v = e.take("run", "cdf_x_min")) r.cdf_x_min = to_double(*v, "[run] cdf_x_min");
    if (auto v = e.take("run", "cdf_x_max")) r.cdf_x_max = to_double(*v, "[run] cdf_x_max");
    if (auto v = e.take("run", "cdf_points")) r.cdf_points = to_int(*v, "[run] cdf_points");
    if (auto v = e.take("run", "seed")) r.seed = to_u64(*v, "[run] seed");

    e.reject_unconsumed();
    return cfg;
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_io("ConfigUnreadable", "cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), overrides);
}

}  // namespace rsou
