#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rsou/report.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kCli = RSOU_CLI_PATH;
const std::string kConfigs = RSOU_CONFIG_DIR;

struct RunResult {
    int exit_code = -1;
    std::string stderr_text;
};

RunResult run_cli(const std::string& args, const std::string& out_dir) {
    fs::create_directories(out_dir);
    const std::string err_file = out_dir + "/stderr.txt";
    const std::string cmd = kCli + " " + args + " 2> " + err_file;
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(err_file);
    std::ostringstream buf;
    buf << in.rdbuf();
    r.stderr_text = buf.str();
    return r;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

nlohmann::ordered_json report_at(const std::string& out_dir) {
    return nlohmann::ordered_json::parse(slurp(out_dir + "/report.json"));
}

}  // namespace

TEST_CASE("classify on the bundled switching model") {
    const std::string out = "cli_out/classify";
    const auto r = run_cli("classify --config " + kConfigs + "/switch_heavy.ini --out " + out, out);
    CHECK(r.exit_code == 0);
    const auto j = report_at(out);
    CHECK(j.at("verdict").at("drift_index").get<double>() == doctest::Approx(-1.0));
    CHECK(j.at("verdict").at("recurrence") == "PositiveRecurrent");
    CHECK(j.at("verdict").at("tail") == "HeavySwitchDriven");
    CHECK(j.at("verdict").at("moment_threshold").get<double>() == doctest::Approx(2.0));
    CHECK(j.at("spectral").at("kappa").at("kind") == "finite");
    CHECK(j.at("spectral").at("kappa").at("value").get<double>() ==
          doctest::Approx(1.5).epsilon(1e-6));
}

TEST_CASE("strict schema: a misspelled key names itself and exits 1") {
    const std::string out = "cli_out/badkey";
    const auto r = run_cli("classify --config " + kConfigs + "/switch_heavy.ini --out " + out +
                               " --override drift.alpa=1",
                           out);
    CHECK(r.exit_code == 1);
    CHECK(r.stderr_text.find("alpa") != std::string::npos);
}

TEST_CASE("classify on a transient model reports and exits 2") {
    const std::string out = "cli_out/transient";
    const auto r = run_cli("classify --config " + kConfigs + "/transient.ini --out " + out, out);
    CHECK(r.exit_code == 2);
    const auto j = report_at(out);
    CHECK(j.at("verdict").at("recurrence") == "Transient");
    CHECK(j.at("verdict").at("tail") == "Unknown");  // reason preserved verbatim
    CHECK(j.at("verdict").at("tail_reason").get<std::string>().find("positive recurrence") !=
          std::string::npos);
}

TEST_CASE("same config and seed give byte-identical sample files") {
    const std::string out1 = "cli_out/det1", out2 = "cli_out/det2";
    const std::string common = "stationary --config " + kConfigs +
                               "/equal_gauss.ini --seed 77 --override run.n_draws=2000 --out ";
    CHECK(run_cli(common + out1, out1).exit_code == 0);
    CHECK(run_cli(common + out2, out2).exit_code == 0);
    const std::string a = slurp(out1 + "/stationary.csv");
    const std::string b = slurp(out2 + "/stationary.csv");
    CHECK(!a.empty());
    CHECK(a == b);
    CHECK(a.rfind("x,state\n", 0) == 0);
}

TEST_CASE("report.json round-trips through the schema") {
    const std::string out = "cli_out/roundtrip";
    CHECK(run_cli("stationary --config " + kConfigs +
                      "/equal_gauss.ini --seed 3 --override run.n_draws=2000 --out " + out,
                  out).exit_code == 0);
    const auto j = report_at(out);
    const rsou::RunReport parsed = rsou::report_from_json(j);
    const auto j2 = rsou::report_to_json(parsed);
    CHECK(j == j2);
    CHECK(j.at("tail_stats").is_object());
    CHECK(j.at("sample_files").size() == 1);
}

TEST_CASE("oracle subcommand writes a monotone CDF table") {
    const std::string out = "cli_out/oracle";
    const auto r = run_cli("oracle --config " + kConfigs + "/equal_gauss.ini --out " + out, out);
    CHECK(r.exit_code == 0);
    std::ifstream in(out + "/cdf.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "x,F");
    double prev = -1.0;
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) {
        const auto comma = line.find(',');
        REQUIRE(comma != std::string::npos);
        const double f = std::stod(line.substr(comma + 1));
        CHECK(f >= prev);
        CHECK(f >= 0.0);
        CHECK(f <= 1.0);
        prev = f;
        ++rows;
    }
    CHECK(rows > 100);
}

TEST_CASE("oracle-compare demands an equal-regime model") {
    const std::string out = "cli_out/compare_bad";
    const auto r = run_cli("oracle-compare --config " + kConfigs + "/switch_heavy.ini --out " + out,
                           out);
    CHECK(r.exit_code == 2);
    CHECK(r.stderr_text.find("EqualRegimeRequired") != std::string::npos);
}

TEST_CASE("lyapunov subcommand certifies the bundled models") {
    const std::string out1 = "cli_out/lyap_rec";
    const auto r1 = run_cli("lyapunov --config " + kConfigs +
                                "/switch_heavy.ini --override run.epsilon=0.5 --out " + out1,
                            out1);
    CHECK(r1.exit_code == 0);
    auto j1 = report_at(out1);
    REQUIRE(j1.at("drift_certificates").size() == 1);
    CHECK(j1.at("drift_certificates")[0].at("function") == "log_quadratic");
    CHECK(!j1.at("drift_certificates")[0].at("r0").is_null());

    const std::string out2 = "cli_out/lyap_tr";
    const auto r2 = run_cli("lyapunov --config " + kConfigs + "/transient.ini --out " + out2, out2);
    CHECK(r2.exit_code == 0);
    auto j2 = report_at(out2);
    REQUIRE(j2.at("drift_certificates").size() == 1);
    CHECK(j2.at("drift_certificates")[0].at("function") == "reciprocal_quadratic");
    CHECK(!j2.at("drift_certificates")[0].at("r0").is_null());
}

TEST_CASE("validate subcommand checks the model only") {
    const std::string out = "cli_out/validate";
    CHECK(run_cli("validate --config " + kConfigs + "/pareto_heavy.ini --out " + out, out)
              .exit_code == 0);
    const auto r = run_cli("validate --config " + kConfigs + "/pareto_heavy.ini --out " + out +
                               " --override chain.q0=\"-1 0.5\"",
                           out);
    CHECK(r.exit_code == 1);
    CHECK(r.stderr_text.find("RowSumViolation") != std::string::npos);
}
