// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "../src/cli/commands.hpp"
#include "../src/cli/config.hpp"
#include "../src/cli/csv.hpp"

using namespace crr;
using namespace crr::cli;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

const char* kBaseConfig = R"(# test config
[system]
m_tx = 8
n_rx_sense = 12
n_rx_comm = 6
cpi_len = 128
power = 800.0
noise_comm = 1.0
noise_sense = 1.0
reflect_re = 1e-3
target_angle = -0.880588420801219
rician_k = 100.0
seed = 7

[sweep]
scenario = all
points = 10

[output]
plot = true
)";

RunConfig base_config(const std::string& out_dir) {
    RunConfig cfg = parse_config_text(kBaseConfig);
    cfg.out_dir = out_dir;
    return cfg;
}

}  // namespace

TEST_CASE("config parsing accepts the documented keys") {
    const RunConfig cfg = parse_config_text(kBaseConfig);
    CHECK(cfg.system.m_tx == 8);
    CHECK(cfg.system.power == 800.0);
    CHECK(cfg.scenario == 0);
    CHECK(cfg.sweep_points == 10);
    CHECK(cfg.plot);
}

TEST_CASE("config parsing rejects unknown keys with a line number") {
    try {
        parse_config_text("[system]\nm_tx = 4\nn_rx_comm = 4\ncpi_len = 9\nbogus = 1\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.line == 5);
        CHECK(std::string(e.what()).find("bogus") != std::string::npos);
    }

    CHECK_THROWS_AS(parse_config_text("[nope]\nx = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[system]\nm_tx = four\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("m_tx = 4\n"), ConfigError);          // no section
    CHECK_THROWS_AS(parse_config_text("[system]\nm_tx = 1\n"), ConfigError); // invariant
}

TEST_CASE("double formatting") {
    CHECK(fmt_double(kInf) == "inf");
    CHECK(fmt_double(-kInf) == "-inf");
    CHECK(fmt_double(0.5) == "0.5");
    // 17 significant digits round-trip
    const double v = 0.1234567890123456789;
    CHECK(std::stod(fmt_double(v)) == v);
}

TEST_CASE("corner command writes closed forms and reruns byte-identically") {
    const std::string dir = (std::filesystem::temp_directory_path() / "crr_cli_corner").string();
    std::filesystem::remove_all(dir);
    RunConfig cfg = base_config(dir);
    REQUIRE(cmd_corner(cfg) == 0);

    const std::string first = slurp(std::filesystem::path(dir) / "corners.csv");
    // closed forms for the sensing corner of the trace scenario
    const double expect = 12.0 * 64.0 / (800.0 * 128.0);
    CHECK(first.find("2,crb_min," + fmt_double(expect)) != std::string::npos);
    // rank-deficient channel at M=8, N_c=6: capacity corner bound is inf
    CHECK(first.find("2,rate_max,inf") != std::string::npos);
    CHECK(first.find("# cpi_len: 128") != std::string::npos);

    REQUIRE(cmd_corner(cfg) == 0);
    CHECK(slurp(std::filesystem::path(dir) / "corners.csv") == first);
}

TEST_CASE("boundary command emits sweep, benchmarks, and plot script") {
    const std::string dir =
        (std::filesystem::temp_directory_path() / "crr_cli_boundary").string();
    std::filesystem::remove_all(dir);
    RunConfig cfg = base_config(dir);
    cfg.scenario = 2;
    cfg.sweep_points = 6;
    cfg.knob_points = 11;
    // M = 8 with a 6-antenna receiver: time switching not applicable, logged
    REQUIRE(cmd_boundary(cfg) == 0);

    const std::string csv = slurp(std::filesystem::path(dir) / "boundary_2.csv");
    CHECK(csv.find("gamma,rate,crb_achieved,active,scheme") != std::string::npos);
    CHECK(csv.find(",optimal") != std::string::npos);
    CHECK(csv.find(",split_ep") != std::string::npos);
    CHECK(csv.find(",split_sem") != std::string::npos);
    CHECK(csv.find(",time_switch") == std::string::npos);
    CHECK(std::filesystem::exists(std::filesystem::path(dir) / "plot_boundary.gp"));

    // rerun determinism
    const std::string again = (cmd_boundary(cfg), slurp(std::filesystem::path(dir) / "boundary_2.csv"));
    CHECK(again == csv);
}

TEST_CASE("rate-vs-snr command statuses") {
    const std::string dir = (std::filesystem::temp_directory_path() / "crr_cli_snr").string();
    std::filesystem::remove_all(dir);
    RunConfig cfg = base_config(dir);
    cfg.scenario = 2;
    cfg.gamma2 = 0.1;
    cfg.snr_lo_db = 0;
    cfg.snr_hi_db = 30;
    cfg.snr_points = 7;
    cfg.knob_points = 21;
    REQUIRE(cmd_rate_vs_snr(cfg) == 0);
    const std::string csv = slurp(std::filesystem::path(dir) / "rate_vs_snr.csv");
    CHECK(csv.find("snr_db,scheme,rate,status") != std::string::npos);
    CHECK(csv.find(",optimal,") != std::string::npos);
    CHECK(csv.find(",rate_max,") != std::string::npos);
    CHECK(csv.find(",crb_min,") != std::string::npos);
    CHECK(csv.find("infeasible") != std::string::npos);
    CHECK(csv.find(",ok") != std::string::npos);
}

TEST_CASE("power-alloc command honors the ordering") {
    const std::string dir = (std::filesystem::temp_directory_path() / "crr_cli_pa").string();
    std::filesystem::remove_all(dir);
    RunConfig cfg = base_config(dir);
    REQUIRE(cmd_power_alloc(cfg) == 0);
    const std::string csv = slurp(std::filesystem::path(dir) / "power_alloc.csv");

    // parse scenario 2 rows and check the non-increasing allocation
    std::istringstream in(csv);
    std::string line;
    std::vector<double> p_opt;
    while (std::getline(in, line)) {
        if (line.rfind("2,", 0) != 0) continue;
        std::istringstream row(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(row, field, ',')) fields.push_back(field);
        REQUIRE(fields.size() == 6);
        p_opt.push_back(std::stod(fields[3]));
    }
    REQUIRE(p_opt.size() == 8);
    for (size_t k = 1; k < p_opt.size(); ++k) CHECK(p_opt[k] <= p_opt[k - 1] + 1e-6 * 800);
    // dedicated sensing modes carry equal power
    CHECK(p_opt[6] == doctest::Approx(p_opt[7]).epsilon(1e-8));
}

TEST_CASE("solve outcome serializes the covariance row-major interleaved") {
    crr::SolveOutcome out;
    out.q.resize(2, 2);
    out.q << crr::cplx(1, 2), crr::cplx(3, 4), crr::cplx(3, -4), crr::cplx(5, 0);
    const std::vector<double> want = {1, 2, 3, 4, 3, -4, 5, 0};
    CHECK(out.q_interleaved() == want);
}

TEST_CASE("oracle-check command enforces the size precondition") {
    RunConfig cfg = base_config(
        (std::filesystem::temp_directory_path() / "crr_cli_oc").string());
    CHECK_THROWS_AS(cmd_oracle_check(cfg), ConfigError);  // m_tx = 8 too large
}
