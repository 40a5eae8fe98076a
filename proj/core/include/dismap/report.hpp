#pragma once

#include "dismap/optimizer.hpp"
#include "dismap/verifier.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>

namespace dismap {

struct StageTimings {
    double load_s = 0.0;
    double circuit_s = 0.0;
    double optimize_s = 0.0;
    double verify_s = 0.0;
    double total_s = 0.0;
};

/// Everything the CLI reports about one run. Totals always reconcile with the
/// plan's routing and fidelity estimate.
struct Report {
    std::string label = "dismap";  // or "baseline"
    std::string circuit_name;
    int n_qubits = 0;
    int gate_count = 0;
    int two_qubit_gates = 0;
    int lowered_gates = 0;
    std::uint64_t seed = 0;

    EprCandidate chosen;
    struct WorkerStats {
        int worker_id = 0;
        int qubits = 0;
        int swaps = 0;
        int epr_uses = 0;
        int gates = 0;
    };
    std::vector<WorkerStats> per_worker;
    int total_so = 0;
    int total_epr_uses = 0;
    FidelityEstimate fidelity;
    std::vector<Evaluation> evaluations;
    std::vector<Violation> violations;
    std::optional<bool> equivalence_verified;  // set when --verify ran
    StageTimings timings;
};

Report build_report(const Plan& plan, const SystemConfig& config, const std::string& label,
                    std::uint64_t seed, const Circuit& original);

/// JSON form; key order is canonical. Timing and timestamp keys live under
/// "timing"/"generated_at" so determinism checks can strip them.
nlohmann::json report_to_json(const Report& report);

std::string report_to_text(const Report& report);

/// Per-worker OpenQASM views of the routed plan plus a manifest describing
/// layouts, SWAP tags and EPR uses. Cross-worker operations cannot be
/// expressed in single-worker QASM and appear as comments.
struct EmittedArtifacts {
    std::vector<std::pair<std::string, std::string>> qasm_files;  // filename, contents
    nlohmann::json manifest;
};
EmittedArtifacts emit_worker_artifacts(const Plan& plan);

nlohmann::json partition_to_json(const Partition& partition, const InteractionGraph& ig,
                                 const VirtualSystemTopology& vst, const CutParams& params);

}  // namespace dismap
