// Experiment orchestration: the five subcommands (fig1, fig2, table, verify,
// sweep), CSV/JSON artifact emission, and the CLI entry point with its
// exit-code contract.
#pragma once

#include "tptweak/config.hpp"
#include "tptweak/sdapprox.hpp"
#include "tptweak/weakvals.hpp"

#include <map>
#include <string>

namespace tptweak {

// A reported scalar together with its relative drift when the momentum grid
// density and the time-sample count are both doubled.
struct ScalarWithDelta {
    double value = 0.0;
    double doubled_resolution_delta = 0.0;
};

struct ResultRecord {
    ExperimentConfig config;
    std::string hash;
    MomentSummary summary;
    ArrivalEstimate arrival;
    double norm = 0.0;
    double t_max = 0.0;
    double tail_mass = 0.0;
    std::map<std::string, ScalarWithDelta> scalars;  // keyed reported values
    std::vector<std::string> warnings;
    double wall_seconds = 0.0;
};

nlohmann::json record_to_json(const ResultRecord& rec);

// One pass/fail line per internal consistency check (unitarity, free-particle
// oracle, normalization, weak-momentum identity, commutator, both uncertainty
// bounds, grid-doubling drift).
struct VerifyReport {
    struct Check {
        std::string name;
        bool passed = false;
        double measured = 0.0;
        double limit = 0.0;
    };
    std::vector<Check> checks;
    bool all_passed() const;
};

// Subcommand drivers. out_dir is the resolved output directory; each writes
// its artifact(s) there and returns the record/report it produced.
ResultRecord run_table(const ExperimentConfig& cfg, const std::string& out_dir);
std::vector<ResultRecord> run_sweep(const ExperimentConfig& cfg, const std::string& out_dir);
void run_fig1(const ExperimentConfig& cfg, const std::string& out_dir, bool resolution_check);
void run_fig2(const ExperimentConfig& cfg, const std::string& out_dir, bool resolution_check);
VerifyReport run_verify(const ExperimentConfig& cfg, const std::string& out_dir);

// Full CLI: parses argv, resolves the output directory (--out flag, then the
// TPTWEAK_OUT_DIR environment variable, then the config file, then the
// current directory), dispatches, and maps failures to the exit-code
// contract: 2 config, 3 convergence, 4 I/O, 1 failed verify checks.
int run_cli(int argc, const char* const* argv);

}  // namespace tptweak
