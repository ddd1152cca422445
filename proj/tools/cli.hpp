#pragma once

// Command-line front end. Every run is described by a RunConfig; the report
// embeds it, so a report can be reproduced from its own contents.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace heis::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int {
    kExitPass = 0,
    kExitFail = 1,
    kExitConfig = 2,
};

struct RunConfig {
    /// "norm eval", "check lemma2", "check intermediate", "check fundamental",
    /// "check infinity-harmonic", "check constants", "bgg compare",
    /// "measure sample", "verify ubound", "verify poincare", "verify lsi".
    std::string command;
    int n = 6;
    std::uint64_t seed = 0;
    std::size_t points = 0;  // 0: command default
    double tolerance = 1e-12;
    double rel_tol = 1e-8;

    // norm eval, check infinity-harmonic (empty x: witness point)
    std::vector<double> x;
    double t = 0.0;

    // check constants
    int n_min = 2;
    int n_max = 20;

    // check fundamental
    std::size_t identity_points = 1000;
    double N_min = 0.5;
    double N_max = 5.0;

    // measure sample, verify *
    std::string family = "power";
    double k = 4.0;
    double alpha = 1.0;
    double p = 4.0;
    double beta = 0.25;
    double q = 2.0;
    std::string algorithm = "rwm";
    std::size_t steps = 110000;  // burn-in included
    std::size_t burn = 10000;
    bool restrict_exterior = false;
    int seeds = 5;
    double z = 3.0;

    unsigned threads = 0;  // 0: all hardware threads
    std::optional<std::string> output_path;
    std::string format = "json";
    bool timestamp = true;

    Json to_json() const;
};

struct RunResult {
    int exit_code = kExitPass;
    Json report;
    /// Sample dump for "measure sample".
    std::string csv;
};

/// Executes the command. Invalid configuration yields kExitConfig with an
/// "error" field rather than an exception.
RunResult run(const RunConfig& cfg);

/// Parses argv-style arguments (without the program name), runs, and writes
/// the report to `out` or cfg.output_path. Diagnostics go to `err`.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace heis::cli
