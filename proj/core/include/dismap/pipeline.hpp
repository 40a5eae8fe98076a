#pragma once

#include "dismap/report.hpp"

#include <optional>
#include <string>

namespace dismap {

/// Exit codes shared by the CLI and the end-to-end tests.
enum ExitCode : int {
    kExitOk = 0,
    kExitConfigError = 1,
    kExitParseError = 2,
    kExitInfeasible = 3,
    kExitVerificationFailure = 4,
};

struct RunOptions {
    std::string config_path;

    // Circuit source: either a QASM file or a generated benchmark family.
    std::string circuit_path;
    std::string bench;
    int qubits = 0;

    std::uint64_t seed = 0;
    std::optional<double> sr;         // overrides config default_sr
    std::optional<int> max_links;
    std::optional<int> k;             // candidates per worker

    double w_epr = 3.0;
    int extended_size = 20;
    double extended_weight = 0.5;
    double decay = 0.001;
    double alpha = 1.0;
    double beta = 10.0;
    std::string select = "swaps";     // or "fidelity"
    int threads = 0;
    int restarts = 1;

    bool baseline = false;
    bool verify = false;              // run the equivalence oracle (<= 12 qubits)

    std::string report_path;
    std::string emit_partition_path;
    std::string emit_qasm_dir;
};

struct RunOutcome {
    int exit_code = kExitOk;
    std::string error;                // set when exit_code is 1..3
    std::optional<Report> report;
    std::string report_json;          // canonical dump, written to report_path
    std::string text;
};

/// load -> parse/generate -> lower -> optimize -> verify -> report.
/// Catches stage errors and maps them to exit codes; never throws for
/// expected failure modes.
RunOutcome run_pipeline(const RunOptions& options);

}  // namespace dismap
