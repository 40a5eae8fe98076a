#include "dismap/pipeline.hpp"

#include "dismap/generators.hpp"
#include "dismap/qasm.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>

namespace dismap {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw Error("cannot write file: " + path.string());
    out << contents;
}

}  // namespace

RunOutcome run_pipeline(const RunOptions& options) {
    RunOutcome outcome;
    const auto t_start = std::chrono::steady_clock::now();
    StageTimings timings;

    // Stage 1: configuration.
    SystemConfig config;
    try {
        auto t = std::chrono::steady_clock::now();
        config = load_system_config(options.config_path);
        if (options.sr) {
            if (!(*options.sr > 0.0 && *options.sr <= 1.0)) {
                throw ConfigError({"--sr must lie in (0, 1]"});
            }
            config.default_sr = *options.sr;
        }
        if (options.max_links) config.max_links = *options.max_links;
        if (options.k) config.candidates_per_worker = *options.k;
        if (config.max_links < 1 || config.candidates_per_worker < 1) {
            throw ConfigError({"--max-links and --k must be >= 1"});
        }
        timings.load_s = seconds_since(t);
    } catch (const Error& e) {
        outcome.exit_code = kExitConfigError;
        outcome.error = e.what();
        return outcome;
    }

    // Stage 2: circuit.
    Circuit original;
    try {
        auto t = std::chrono::steady_clock::now();
        if (!options.circuit_path.empty()) {
            original = parse_qasm_file(options.circuit_path);
        } else {
            BenchKind kind;
            if (!bench_from_name(options.bench, kind)) {
                throw Error("unknown benchmark family '" + options.bench + "'");
            }
            original = generate_benchmark(kind, options.qubits, options.seed);
        }
        timings.circuit_s = seconds_since(t);
    } catch (const Error& e) {
        outcome.exit_code = kExitParseError;
        outcome.error = e.what();
        return outcome;
    }

    // Stage 3: lower + optimize.
    Plan plan;
    Circuit lowered;
    OptimizerParams params;
    params.threads = options.threads;
    params.restarts = options.restarts;
    params.select = options.select == "fidelity" ? SelectionKey::Fidelity : SelectionKey::Swaps;
    params.router.w_epr = options.w_epr;
    params.router.extended_size = options.extended_size;
    params.router.extended_weight = options.extended_weight;
    params.router.decay_step = options.decay;
    params.cut.alpha = options.alpha;
    params.cut.beta = options.beta;
    try {
        auto t = std::chrono::steady_clock::now();
        lowered = lower(original);
        plan = options.baseline ? baseline_plan(lowered, config, options.seed, params)
                                : optimize(lowered, config, options.seed, params);
        timings.optimize_s = seconds_since(t);
    } catch (const InfeasibleError& e) {
        outcome.exit_code = kExitInfeasible;
        outcome.error = e.what();
        return outcome;
    } catch (const Error& e) {
        outcome.exit_code = kExitParseError;
        outcome.error = e.what();
        return outcome;
    }

    // Stage 4: verification + report.
    auto t_verify = std::chrono::steady_clock::now();
    Report report = build_report(plan, config, options.baseline ? "baseline" : "dismap",
                                 options.seed, original);
    plan.fidelity = report.fidelity.f;
    report.violations = check_constraints(plan);
    if (options.verify && original.n_qubits <= 12) {
        report.equivalence_verified = equivalence_oracle(original, plan);
    }
    timings.verify_s = seconds_since(t_verify);
    timings.total_s = seconds_since(t_start);
    report.timings = timings;

    outcome.report = report;
    outcome.report_json = report_to_json(report).dump(2) + "\n";
    outcome.text = report_to_text(report);

    if (!options.report_path.empty()) {
        write_file(options.report_path, outcome.report_json);
    }
    if (!options.emit_partition_path.empty()) {
        const InteractionGraph ig = interaction_graph(lowered);
        write_file(options.emit_partition_path,
                   partition_to_json(plan.partition, ig, plan.vst, params.cut).dump(2) + "\n");
    }
    if (!options.emit_qasm_dir.empty()) {
        const EmittedArtifacts artifacts = emit_worker_artifacts(plan);
        const std::filesystem::path dir(options.emit_qasm_dir);
        for (const auto& [name, contents] : artifacts.qasm_files) {
            write_file(dir / name, contents);
        }
        write_file(dir / "manifest.json", artifacts.manifest.dump(2) + "\n");
    }

    const bool failed = !report.violations.empty() ||
                        (report.equivalence_verified.has_value() && !*report.equivalence_verified);
    outcome.exit_code = failed ? kExitVerificationFailure : kExitOk;
    return outcome;
}

}  // namespace dismap
