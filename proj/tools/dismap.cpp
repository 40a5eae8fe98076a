// Command-line front end: load a hardware config, obtain a circuit (QASM file
// or generated benchmark), run the optimization pipeline and emit reports.

#include "dismap/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"dismap - hardware-aware circuit cutting and distributed qubit mapping"};

    dismap::RunOptions options;
    std::string seed_str;

    app.add_option("--config", options.config_path, "hardware config JSON")->required();
    auto* circuit_opt =
        app.add_option("--circuit", options.circuit_path, "input circuit (OpenQASM 2.0)");
    auto* bench_opt = app.add_option("--bench", options.bench,
                                     "benchmark family: bv, hwea, qaoa, adder");
    app.add_option("--qubits", options.qubits, "qubit count for --bench");
    bench_opt->excludes(circuit_opt);

    app.add_option("--seed", seed_str, "rng seed (falls back to DISMAP_SEED, then 0)");
    app.add_option("--sr", options.sr, "EPR success rate override (0, 1]");
    app.add_option("--max-links", options.max_links, "maximum EPR links per candidate");
    app.add_option("--k", options.k, "low-noise endpoint candidates per worker");
    app.add_option("--w-epr", options.w_epr, "router distance weight of EPR edges");
    app.add_option("--select", options.select, "plan selection key: swaps (default) or fidelity")
        ->check(CLI::IsMember({"swaps", "fidelity"}));
    app.add_option("--threads", options.threads, "candidate evaluation threads (0 = cores)");
    app.add_option("--restarts", options.restarts, "routing seeds tried per candidate");
    app.add_option("--alpha", options.alpha, "partition objective: cross-edge weight");
    app.add_option("--beta", options.beta, "partition objective: noise weight");
    app.add_option("--extended-size", options.extended_size, "router lookahead window");
    app.add_option("--extended-weight", options.extended_weight, "router lookahead weight");
    app.add_option("--decay", options.decay, "router swap decay step");

    app.add_flag("--baseline", options.baseline,
                 "fixed candidate + first-fit + identity layout (same router)");
    app.add_flag("--verify", options.verify, "run the statevector oracle (<= 12 qubits)");

    app.add_option("--report", options.report_path, "write the JSON report here");
    app.add_option("--emit-partition", options.emit_partition_path,
                   "write the partition dump here");
    app.add_option("--emit-qasm", options.emit_qasm_dir,
                   "write per-worker QASM files and the routing manifest here");

    CLI11_PARSE(app, argc, argv);

    if (options.circuit_path.empty() && options.bench.empty()) {
        std::cerr << "error: provide --circuit or --bench\n";
        return dismap::kExitParseError;
    }
    if (!options.bench.empty() && options.qubits <= 0) {
        std::cerr << "error: --bench requires --qubits\n";
        return dismap::kExitParseError;
    }

    if (seed_str.empty()) {
        if (const char* env = std::getenv("DISMAP_SEED")) seed_str = env;
    }
    if (!seed_str.empty()) {
        try {
            options.seed = std::stoull(seed_str);
        } catch (const std::exception&) {
            std::cerr << "error: invalid seed '" << seed_str << "'\n";
            return dismap::kExitParseError;
        }
    }

    const dismap::RunOutcome outcome = dismap::run_pipeline(options);
    if (!outcome.error.empty()) {
        std::cerr << "error: " << outcome.error << "\n";
    }
    if (!outcome.text.empty()) {
        std::cout << outcome.text;
    }
    return outcome.exit_code;
}
