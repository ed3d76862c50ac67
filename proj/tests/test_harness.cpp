#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tptweak/config.hpp"
#include "tptweak/harness.hpp"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace tptweak;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& leaf) {
    const fs::path dir = fs::temp_directory_path() / "tptweak_harness_tests" / leaf;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

ExperimentConfig fast_config() {
    ExperimentConfig cfg;
    cfg.name = "fast";
    cfg.controls.time_samples = 1024;
    cfg.delta_x = 2.0;  // keeps the arrival-protocol shifts above the coarse grid spacing
    return cfg;
}

std::string write_config(const fs::path& dir, const ExperimentConfig& cfg,
                         const std::string& file = "config.json") {
    const fs::path path = dir / file;
    std::ofstream out(path);
    out << config_to_json(cfg).dump(2) << "\n";
    return path.string();
}

int cli(std::vector<std::string> args) {
    std::vector<const char*> argv;
    argv.push_back("tptweak");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(static_cast<bool>(in));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int count_data_rows(const std::string& csv, const std::string& column_line) {
    const auto at = csv.find(column_line + "\n");
    REQUIRE(at != std::string::npos);
    int rows = 0;
    for (std::size_t i = at + column_line.size() + 1; i < csv.size(); ++i)
        if (csv[i] == '\n') ++rows;
    return rows;
}

}  // namespace

TEST_CASE("configuration serialization round-trips exactly") {
    ExperimentConfig cfg = fast_config();
    cfg.state.gamma = 0.0005;
    cfg.detection.x = 120.0;
    cfg.output_dir = "somewhere";
    cfg.sweep_gammas = {0.001, 0.0005, 0.00025};

    const nlohmann::json j = config_to_json(cfg);
    const ExperimentConfig back = config_from_json(j);
    CHECK(config_to_json(back) == j);
    CHECK(config_hash(back) == config_hash(cfg));
}

TEST_CASE("unknown keys are rejected by name") {
    nlohmann::json j = config_to_json(ExperimentConfig{});
    j["gama"] = 0.001;
    CHECK_THROWS_WITH_AS(config_from_json(j), doctest::Contains("unknown key 'gama'"),
                         ConfigError);
}

TEST_CASE("type errors and range violations are aggregated into one message") {
    nlohmann::json j = config_to_json(ExperimentConfig{});
    j["gamma"] = -1.0;
    j["window_sigmas"] = 2.0;
    j["time_samples"] = 1;
    try {
        config_from_json(j);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("invalid configuration:") != std::string::npos);
        CHECK(msg.find("gamma must be positive") != std::string::npos);
        CHECK(msg.find("window_sigmas must be at least 6") != std::string::npos);
        CHECK(msg.find("time_samples must be at least 2") != std::string::npos);
    }
}

TEST_CASE("loading configs from disk maps failures to the right exceptions") {
    const fs::path dir = fresh_dir("load");
    CHECK_THROWS_AS(load_config((dir / "missing.json").string()), IoError);

    std::ofstream bad(dir / "bad.json");
    bad << "this is { not json";
    bad.close();
    CHECK_THROWS_AS(load_config((dir / "bad.json").string()), ConfigError);
}

TEST_CASE("config hash is stable and sensitive") {
    const ExperimentConfig a = fast_config();
    ExperimentConfig b = a;
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 16);
    b.state.gamma = 0.0011;
    CHECK(config_hash(b) != config_hash(a));
}

TEST_CASE("fig1 writes a self-describing CSV and is deterministic across runs and threads") {
    const fs::path dir_a = fresh_dir("fig1_a");
    const fs::path dir_b = fresh_dir("fig1_b");
    const std::string cfg_path = write_config(dir_a, fast_config());

    CHECK(cli({"fig1", "--config", cfg_path, "--out", dir_a.string()}) == 0);
    CHECK(cli({"fig1", "--config", cfg_path, "--out", dir_b.string(), "--threads", "3"}) == 0);

    const std::string a = slurp(dir_a / "fast_fig1.csv");
    const std::string b = slurp(dir_b / "fast_fig1.csv");

    // The worker-thread count is echoed in the config header (it is part of
    // the run configuration), so mask those lines before comparing. Every
    // computed number must be bitwise identical for any thread count.
    const auto strip_config_lines = [](const std::string& text) {
        std::istringstream in(text);
        std::string line, kept;
        while (std::getline(in, line))
            if (line.rfind("# config", 0) != 0) kept += line + "\n";
        return kept;
    };
    const bool identical = (strip_config_lines(a) == strip_config_lines(b));
    CHECK(identical);

    CHECK(a.rfind("# tptweak fig1\n", 0) == 0);
    CHECK(a.find("# name fast\n") != std::string::npos);
    CHECK(a.find("# config_hash ") != std::string::npos);
    CHECK(a.find("# config {") != std::string::npos);
    CHECK(a.find("# t_max ") != std::string::npos);
    CHECK(a.find("# norm ") != std::string::npos);
    CHECK(a.find("# tail_mass ") != std::string::npos);
    CHECK(count_data_rows(a, "t,P_exact,P_SD") == 1024);

    // The header echoes the config verbatim, so a run can be reproduced from
    // its own artifact.
    const auto at = a.find("# config ");
    const auto end = a.find('\n', at);
    const nlohmann::json echoed = nlohmann::json::parse(a.substr(at + 9, end - at - 9));
    CHECK(config_from_json(echoed).controls.time_samples == 1024);
}

TEST_CASE("fig2 writes the weak-momentum overlay columns") {
    const fs::path dir = fresh_dir("fig2");
    const std::string cfg_path = write_config(dir, fast_config());
    CHECK(cli({"fig2", "--config", cfg_path, "--out", dir.string()}) == 0);
    const std::string csv = slurp(dir / "fast_fig2.csv");
    CHECK(csv.rfind("# tptweak fig2\n", 0) == 0);
    CHECK(csv.find("# mean_p ") != std::string::npos);
    CHECK(count_data_rows(csv, "t,re_dp_weak_exact,re_dp_weak_sd,im_p_weak_exact,im_p_weak_sd") ==
          1024);
}

TEST_CASE("exit codes distinguish usage, config, convergence, and i/o failures") {
    const fs::path dir = fresh_dir("codes");

    CHECK(cli({}) == 2);                           // missing subcommand
    CHECK(cli({"fig1", "--bogus"}) == 2);          // unknown flag
    CHECK(cli({"fig1", "--threads", "0"}) == 2);   // rejected by the option validator
    CHECK(cli({"frobnicate"}) == 2);               // unknown subcommand

    CHECK(cli({"fig1", "--config", (dir / "missing.json").string()}) == 4);

    ExperimentConfig invalid = fast_config();
    invalid.state.gamma = -1.0;
    const std::string invalid_path = write_config(dir, invalid, "invalid.json");
    CHECK(cli({"fig1", "--config", invalid_path, "--out", dir.string()}) == 2);

    ExperimentConfig stuck = fast_config();
    stuck.controls.eps_tail = 1e-13;
    stuck.controls.max_extensions = 0;
    const std::string stuck_path = write_config(dir, stuck, "stuck.json");
    CHECK(cli({"fig1", "--config", stuck_path, "--out", dir.string()}) == 3);
}

TEST_CASE("output directory precedence: --out beats TPTWEAK_OUT_DIR beats config") {
    const fs::path env_dir = fresh_dir("outdir_env");
    const fs::path flag_dir = fresh_dir("outdir_flag");
    const std::string cfg_path = write_config(env_dir, fast_config());

    setenv("TPTWEAK_OUT_DIR", env_dir.c_str(), 1);
    CHECK(cli({"fig1", "--config", cfg_path}) == 0);
    CHECK(fs::exists(env_dir / "fast_fig1.csv"));

    CHECK(cli({"fig2", "--config", cfg_path, "--out", flag_dir.string()}) == 0);
    CHECK(fs::exists(flag_dir / "fast_fig2.csv"));
    CHECK(!fs::exists(env_dir / "fast_fig2.csv"));
    unsetenv("TPTWEAK_OUT_DIR");
}

TEST_CASE("table artifact reports every scalar with a doubled-resolution delta") {
    const fs::path dir = fresh_dir("table");
    const std::string cfg_path = write_config(dir, fast_config());
    CHECK(cli({"table", "--config", cfg_path, "--out", dir.string(), "--threads", "2"}) == 0);

    nlohmann::json j;
    std::ifstream in(dir / "fast_table.json");
    REQUIRE(static_cast<bool>(in));
    in >> j;

    const std::vector<std::string> expected = {
        "mean_p", "stddev_p", "mean_H", "var_H", "mean_t", "var_t",
        "norm", "commutator_im", "product_second_moment", "product_stddev",
        "bound_rhs", "arrival_momentum"};
    REQUIRE(j.contains("scalars"));
    for (const auto& key : expected) {
        CAPTURE(key);
        REQUIRE(j["scalars"].contains(key));
        CHECK(j["scalars"][key].contains("value"));
        CHECK(j["scalars"][key].contains("doubled_resolution_delta"));
    }
    CHECK(j["scalars"].size() == expected.size());

    CHECK(j["scalars"]["mean_p"]["value"].get<double>() == doctest::Approx(0.2522).epsilon(5e-3));
    CHECK(j["scalars"]["arrival_momentum"]["value"].get<double>() ==
          doctest::Approx(0.2502).epsilon(5e-3));
    CHECK(j["norm"].get<double>() > 0.0);
    CHECK(j.contains("sd"));
    CHECK(j["sd"].contains("uncertainty_product"));
    CHECK(j.contains("warnings"));
    CHECK(j.contains("wall_seconds"));
}

TEST_CASE("sweep emits one table per width parameter plus an aggregate") {
    const fs::path dir = fresh_dir("sweep");
    ExperimentConfig cfg = fast_config();
    cfg.delta_x = 4.0;  // the quarter-width point has a coarser time grid
    cfg.sweep_gammas = {0.001, 0.00025};
    const std::string cfg_path = write_config(dir, cfg);

    CHECK(cli({"sweep", "--config", cfg_path, "--out", dir.string(), "--threads", "2"}) == 0);

    nlohmann::json all;
    std::ifstream in(dir / "fast_sweep.json");
    REQUIRE(static_cast<bool>(in));
    in >> all;
    REQUIRE(all.is_array());
    REQUIRE(all.size() == 2);

    const double wide = all[0]["scalars"]["stddev_p"]["value"].get<double>();
    const double narrow = all[1]["scalars"]["stddev_p"]["value"].get<double>();
    // Quartering the width parameter halves the momentum spread.
    CHECK(wide / narrow == doctest::Approx(2.0).epsilon(0.05));
    CHECK(all[0]["config"]["gamma"].get<double>() == doctest::Approx(0.001));
    CHECK(all[1]["config"]["gamma"].get<double>() == doctest::Approx(0.00025));
}

TEST_CASE("verify subcommand passes on a transparent-barrier configuration") {
    const fs::path dir = fresh_dir("verify");
    ExperimentConfig cfg = fast_config();
    cfg.name = "free";
    cfg.barrier.height = 0.0;
    const std::string cfg_path = write_config(dir, cfg);

    CHECK(cli({"verify", "--config", cfg_path, "--out", dir.string(), "--threads", "2"}) == 0);

    nlohmann::json j;
    std::ifstream in(dir / "free_verify.json");
    REQUIRE(static_cast<bool>(in));
    in >> j;
    CHECK(j["all_passed"].get<bool>());
    CHECK(j["checks"].size() >= 10);
}
