#include "dismap/report.hpp"

#include "dismap/cutter.hpp"
#include "dismap/qasm.hpp"

#include <nlohmann/json.hpp>

#include <sstream>

namespace dismap {

using nlohmann::json;

Report build_report(const Plan& plan, const SystemConfig& config, const std::string& label,
                    std::uint64_t seed, const Circuit& original) {
    Report r;
    r.label = label;
    r.circuit_name = original.name;
    r.n_qubits = original.n_qubits;
    r.gate_count = static_cast<int>(original.gates.size());
    r.two_qubit_gates = original.two_qubit_gate_count();
    r.lowered_gates = static_cast<int>(plan.circuit.gates.size());
    r.seed = seed;
    r.chosen = plan.candidate;

    std::map<int, Report::WorkerStats> stats;
    for (const auto& sub : plan.partition.subcircuits) {
        auto& s = stats[sub.worker_id];
        s.worker_id = sub.worker_id;
        s.qubits = static_cast<int>(sub.qubits.size());
    }
    for (const auto& ms : plan.routing.mapped) {
        auto& s = stats[ms.worker_id];
        s.worker_id = ms.worker_id;
        s.swaps = ms.swap_count;
        s.epr_uses = ms.epr_uses;
        s.gates = static_cast<int>(ms.gates.size());
    }
    for (auto& [w, s] : stats) r.per_worker.push_back(s);

    r.total_so = plan.routing.total_so;
    r.total_epr_uses = plan.routing.total_epr_uses;
    r.fidelity = estimate_fidelity(plan, config);
    r.evaluations = plan.evaluations;
    return r;
}

json report_to_json(const Report& r) {
    json j;
    j["schema"] = 1;
    j["label"] = r.label;
    j["input"] = {
        {"name", r.circuit_name},
        {"qubits", r.n_qubits},
        {"gates", r.gate_count},
        {"two_qubit_gates", r.two_qubit_gates},
        {"lowered_gates", r.lowered_gates},
    };
    j["seed"] = r.seed;

    json links = json::array();
    for (const auto& l : r.chosen.links) {
        links.push_back({{"worker_a", l.worker_a},
                         {"qubit_a", l.qubit_a},
                         {"worker_b", l.worker_b},
                         {"qubit_b", l.qubit_b},
                         {"sr", l.sr}});
    }
    j["chosen"] = {{"candidate_index", r.chosen.candidate_index}, {"links", links}};

    json per_worker = json::array();
    for (const auto& s : r.per_worker) {
        per_worker.push_back({{"worker", s.worker_id},
                              {"qubits", s.qubits},
                              {"swaps", s.swaps},
                              {"epr_uses", s.epr_uses},
                              {"gates", s.gates}});
    }
    j["per_worker"] = per_worker;

    j["totals"] = {
        {"swap_overhead", r.total_so},
        {"epr_uses", r.total_epr_uses},
        {"fidelity", r.fidelity.f},
        {"fidelity_factors",
         {{"single_qubit", r.fidelity.single_qubit},
          {"two_qubit", r.fidelity.two_qubit},
          {"readout", r.fidelity.readout},
          {"epr", r.fidelity.epr}}},
    };

    json evals = json::array();
    for (const auto& e : r.evaluations) {
        evals.push_back({{"candidate", e.candidate_index},
                         {"feasible", e.feasible},
                         {"so", e.so},
                         {"fidelity", e.fidelity}});
    }
    j["evaluations"] = evals;

    json violations = json::array();
    for (const auto& v : r.violations) {
        violations.push_back({{"kind", std::string(violation_name(v.kind))},
                              {"detail", v.detail},
                              {"gate_index", v.gate_index}});
    }
    j["violations"] = violations;
    if (r.equivalence_verified.has_value()) {
        j["equivalence_verified"] = *r.equivalence_verified;
    } else {
        j["equivalence_verified"] = nullptr;
    }

    j["timing"] = {
        {"load_s", r.timings.load_s},
        {"circuit_s", r.timings.circuit_s},
        {"optimize_s", r.timings.optimize_s},
        {"verify_s", r.timings.verify_s},
        {"total_s", r.timings.total_s},
    };
    return j;
}

std::string report_to_text(const Report& r) {
    std::ostringstream out;
    out << "=== " << r.label << " report ===\n";
    out << "circuit: " << r.circuit_name << " (" << r.n_qubits << " qubits, " << r.gate_count
        << " gates, " << r.two_qubit_gates << " two-qubit)\n";
    out << "chosen candidate #" << r.chosen.candidate_index << ":";
    for (const auto& l : r.chosen.links) {
        out << "  w" << l.worker_a << ":q" << l.qubit_a << " <-> w" << l.worker_b << ":q"
            << l.qubit_b << " (sr " << l.sr << ")";
    }
    out << "\n";
    out << "per-worker:\n";
    for (const auto& s : r.per_worker) {
        out << "  worker " << s.worker_id << ": " << s.qubits << " qubits, " << s.swaps
            << " swaps, " << s.epr_uses << " epr uses, " << s.gates << " gates\n";
    }
    out << "totals: SO=" << r.total_so << "  epr_uses=" << r.total_epr_uses
        << "  fidelity=" << r.fidelity.f << "\n";
    out << "evaluated " << r.evaluations.size() << " candidate(s)\n";
    if (!r.violations.empty()) {
        out << "VIOLATIONS:\n";
        for (const auto& v : r.violations) {
            out << "  [" << violation_name(v.kind) << "] " << v.detail << "\n";
        }
    } else {
        out << "constraints: ok\n";
    }
    if (r.equivalence_verified.has_value()) {
        out << "equivalence oracle: " << (*r.equivalence_verified ? "pass" : "FAIL") << "\n";
    }
    out << "time: " << r.timings.total_s << "s (optimize " << r.timings.optimize_s << "s)\n";
    return out.str();
}

EmittedArtifacts emit_worker_artifacts(const Plan& plan) {
    EmittedArtifacts artifacts;
    json manifest;
    manifest["initial_layout"] = plan.routing.initial.phys_of;
    manifest["final_layout"] = plan.routing.final.phys_of;
    manifest["total_so"] = plan.routing.total_so;
    manifest["total_epr_uses"] = plan.routing.total_epr_uses;
    manifest["workers"] = json::array();

    for (const auto& ms : plan.routing.mapped) {
        const int worker = ms.worker_id;
        const int capacity = plan.vst.worker_capacity[worker];
        std::ostringstream qasm;
        qasm << "OPENQASM 2.0;\n";
        qasm << "include \"qelib1.inc\";\n";
        qasm << "// worker " << worker << " subcircuit\n";
        qasm << "qreg q[" << capacity << "];\n";
        bool has_measure = false;
        for (const auto& rg : ms.gates) {
            if (rg.gate.kind == GateKind::Measure) has_measure = true;
        }
        if (has_measure) qasm << "creg c[" << capacity << "];\n";

        json swap_tags = json::array();
        int position = 0;
        for (const auto& rg : ms.gates) {
            const Gate& g = rg.gate;
            if (rg.on_epr) {
                qasm << "// epr " << gate_name(g.kind);
                for (int node : g.qubits) {
                    qasm << " w" << plan.vst.worker_of[node] << ":q" << plan.vst.local_of[node];
                }
                qasm << "\n";
                ++position;
                continue;
            }
            if (g.kind == GateKind::Measure) {
                qasm << "measure q[" << plan.vst.local_of[g.qubits[0]] << "] -> c["
                     << plan.vst.local_of[g.qubits[0]] << "];\n";
                ++position;
                continue;
            }
            qasm << gate_name(g.kind);
            if (!g.params.empty()) {
                qasm << "(";
                for (std::size_t i = 0; i < g.params.size(); ++i) {
                    if (i) qasm << ",";
                    char buf[64];
                    std::snprintf(buf, sizeof(buf), "%.17g", g.params[i]);
                    qasm << buf;
                }
                qasm << ")";
            }
            qasm << " ";
            for (std::size_t i = 0; i < g.qubits.size(); ++i) {
                if (i) qasm << ",";
                qasm << "q[" << plan.vst.local_of[g.qubits[i]] << "]";
            }
            qasm << ";";
            if (rg.inserted_swap) {
                qasm << " // inserted swap";
                swap_tags.push_back(position);
            }
            qasm << "\n";
            ++position;
        }
        artifacts.qasm_files.emplace_back("worker" + std::to_string(worker) + ".qasm",
                                          qasm.str());
        manifest["workers"].push_back({{"worker", worker},
                                       {"swaps", ms.swap_count},
                                       {"epr_uses", ms.epr_uses},
                                       {"swap_positions", swap_tags},
                                       {"gates", static_cast<int>(ms.gates.size())}});
    }
    artifacts.manifest = std::move(manifest);
    return artifacts;
}

json partition_to_json(const Partition& partition, const InteractionGraph& ig,
                       const VirtualSystemTopology& vst, const CutParams& params) {
    json j;
    j["assignment"] = partition.assignment;
    j["cross_gates"] = partition.cross_gates;
    json subs = json::array();
    for (const auto& sub : partition.subcircuits) {
        subs.push_back({{"worker", sub.worker_id},
                        {"qubits", sub.qubits},
                        {"gates", static_cast<int>(sub.gate_indices.size())}});
    }
    j["subcircuits"] = subs;

    double cross = 0.0;
    for (const auto& [edge, w] : ig.edge_weights) {
        if (partition.assignment[edge.first] != partition.assignment[edge.second]) cross += w;
    }
    j["cost"] = {{"total", cut_cost(partition, ig, vst, params)},
                 {"cross_weight", cross},
                 {"alpha", params.alpha},
                 {"beta", params.beta}};
    return j;
}

}  // namespace dismap
