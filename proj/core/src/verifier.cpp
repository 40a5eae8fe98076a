#include "dismap/verifier.hpp"

#include "dismap/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

namespace dismap {

FidelityEstimate estimate_routing_fidelity(const RoutingResult& routing,
                                           const VirtualSystemTopology& vst) {
    FidelityEstimate est;
    for (const auto& rg : routing.routed) {
        const Gate& g = rg.gate;
        switch (g.kind) {
            case GateKind::Barrier:
                break;
            case GateKind::Measure:
                est.readout *= 1.0 - vst.node_err_readout[g.qubits[0]];
                break;
            case GateKind::Swap:
            case GateKind::Cx: {
                const VstEdge* e = vst.edge_between(g.qubits[0], g.qubits[1]);
                if (e == nullptr) {
                    throw Error("estimate_fidelity: routed gate acts on non-adjacent nodes");
                }
                const int uses = g.kind == GateKind::Swap ? 3 : 1;  // SWAP = 3 CX
                if (e->epr) {
                    for (int u = 0; u < uses; ++u) est.epr *= e->sr;
                } else {
                    for (int u = 0; u < uses; ++u) est.two_qubit *= 1.0 - e->err_2q;
                }
                break;
            }
            default:
                est.single_qubit *= 1.0 - vst.node_err_1q[g.qubits[0]];
                break;
        }
    }
    est.f = est.single_qubit * est.two_qubit * est.readout * est.epr;
    return est;
}

FidelityEstimate estimate_fidelity(const Plan& plan, const SystemConfig& config) {
    // Calibration coverage is a config invariant; re-validate here so a gate
    // on an uncalibrated edge surfaces as an error rather than silent 1.0.
    for (const auto& w : config.workers) {
        for (const auto& edge : w.coupling_edges) {
            if (!w.err_2q.count(edge)) {
                throw Error("estimate_fidelity: worker " + std::to_string(w.id) +
                            " edge lacks a calibration entry");
            }
        }
    }
    return estimate_routing_fidelity(plan.routing, plan.vst);
}

std::string_view violation_name(Violation::Kind kind) {
    switch (kind) {
        case Violation::Kind::NonAdjacentGate: return "NonAdjacentGate";
        case Violation::Kind::CapacityExceeded: return "CapacityExceeded";
        case Violation::Kind::LayoutNotBijective: return "LayoutNotBijective";
        case Violation::Kind::OverheadMismatch: return "OverheadMismatch";
        case Violation::Kind::EprUseMismatch: return "EprUseMismatch";
        case Violation::Kind::AssignmentIncomplete: return "AssignmentIncomplete";
        case Violation::Kind::CrossGateMismatch: return "CrossGateMismatch";
    }
    return "?";
}

std::vector<Violation> check_constraints(const Plan& plan) {
    std::vector<Violation> out;
    const auto& vst = plan.vst;

    // Every routed two-qubit gate must act on a VST edge.
    for (std::size_t i = 0; i < plan.routing.routed.size(); ++i) {
        const auto& rg = plan.routing.routed[i];
        if ((rg.gate.is_two_qubit() || rg.gate.kind == GateKind::Swap) &&
            !vst.adjacent(rg.gate.qubits[0], rg.gate.qubits[1])) {
            out.push_back({Violation::Kind::NonAdjacentGate,
                           "routed gate " + std::to_string(i) + " acts on non-adjacent nodes " +
                               std::to_string(rg.gate.qubits[0]) + "," +
                               std::to_string(rg.gate.qubits[1]),
                           static_cast<int>(i)});
        }
    }

    // Per-worker assignment counts within capacity.
    std::map<int, int> counts;
    for (int w : plan.partition.assignment) ++counts[w];
    for (const auto& [w, count] : counts) {
        if (w < 0 || w >= static_cast<int>(vst.worker_capacity.size())) {
            out.push_back({Violation::Kind::AssignmentIncomplete,
                           "assignment names unknown worker " + std::to_string(w), -1});
        } else if (count > vst.worker_capacity[w]) {
            out.push_back({Violation::Kind::CapacityExceeded,
                           "worker " + std::to_string(w) + " holds " + std::to_string(count) +
                               " logical qubits, capacity " +
                               std::to_string(vst.worker_capacity[w]),
                           -1});
        }
    }
    if (plan.partition.assignment.empty()) {
        out.push_back({Violation::Kind::AssignmentIncomplete, "assignment is empty", -1});
    }

    // Layouts must be injective; the initial layout must respect ownership.
    auto check_layout = [&](const Layout& layout, const char* which, bool check_worker) {
        std::set<int> seen;
        for (std::size_t q = 0; q < layout.phys_of.size(); ++q) {
            const int node = layout.phys_of[q];
            if (node < 0 || node >= vst.n_nodes || !seen.insert(node).second) {
                out.push_back({Violation::Kind::LayoutNotBijective,
                               std::string(which) + " layout maps logical " + std::to_string(q) +
                                   " to invalid or duplicate node " + std::to_string(node),
                               -1});
                continue;
            }
            if (check_worker && vst.worker_of[node] != plan.partition.assignment[q]) {
                out.push_back({Violation::Kind::LayoutNotBijective,
                               std::string(which) + " layout places logical " + std::to_string(q) +
                                   " outside its assigned worker",
                               -1});
            }
        }
    };
    check_layout(plan.routing.initial, "initial", true);
    check_layout(plan.routing.final, "final", false);

    // SWAP overhead bookkeeping must reconcile with a recount of the tags.
    int recount = 0;
    int epr_recount = 0;
    std::map<int, int> per_worker;
    for (const auto& rg : plan.routing.routed) {
        if (rg.inserted_swap) {
            ++recount;
            ++per_worker[rg.attributed_worker];
            if (rg.on_epr) epr_recount += 3;
        } else if (rg.on_epr) {
            epr_recount += 1;
        }
    }
    int table_total = 0;
    for (const auto& [w, c] : plan.routing.per_worker_swaps) table_total += c;
    if (recount != plan.routing.total_so || table_total != plan.routing.total_so ||
        plan.so != plan.routing.total_so) {
        out.push_back({Violation::Kind::OverheadMismatch,
                       "SWAP overhead " + std::to_string(plan.so) + " != recount " +
                           std::to_string(recount) + " (per-worker table " +
                           std::to_string(table_total) + ")",
                       -1});
    }
    for (const auto& [w, c] : per_worker) {
        auto it = plan.routing.per_worker_swaps.find(w);
        if (it == plan.routing.per_worker_swaps.end() || it->second != c) {
            out.push_back({Violation::Kind::OverheadMismatch,
                           "per-worker SWAP table disagrees for worker " + std::to_string(w), -1});
        }
    }
    if (epr_recount != plan.routing.total_epr_uses) {
        out.push_back({Violation::Kind::EprUseMismatch,
                       "EPR uses " + std::to_string(plan.routing.total_epr_uses) +
                           " != recount " + std::to_string(epr_recount),
                       -1});
    }

    // Cross gates must be exactly the CX gates spanning two workers.
    if (!plan.circuit.gates.empty()) {
        std::vector<int> expected_cross;
        for (std::size_t i = 0; i < plan.circuit.gates.size(); ++i) {
            const Gate& g = plan.circuit.gates[i];
            if (g.kind == GateKind::Cx &&
                plan.partition.assignment[g.qubits[0]] != plan.partition.assignment[g.qubits[1]]) {
                expected_cross.push_back(static_cast<int>(i));
            }
        }
        if (expected_cross != plan.partition.cross_gates) {
            out.push_back({Violation::Kind::CrossGateMismatch,
                           "cross gate list does not match the assignment", -1});
        }
    }

    return out;
}

namespace {

struct CompactSupport {
    std::vector<int> nodes;        // sorted VST nodes in the support
    std::map<int, int> wire_of;    // VST node -> compact wire
};

CompactSupport routed_support(const Plan& plan) {
    std::set<int> nodes;
    for (int node : plan.routing.initial.phys_of) nodes.insert(node);
    for (const auto& rg : plan.routing.routed) {
        for (int q : rg.gate.qubits) nodes.insert(q);
    }
    CompactSupport s;
    s.nodes.assign(nodes.begin(), nodes.end());
    for (std::size_t i = 0; i < s.nodes.size(); ++i) s.wire_of[s.nodes[i]] = static_cast<int>(i);
    return s;
}

}  // namespace

bool equivalence_oracle(const Circuit& original, const Plan& plan, double tol) {
    const int n = original.n_qubits;
    if (n > 14) {
        throw Error("equivalence_oracle: circuit too large for the dense statevector bound (14)");
    }
    const CompactSupport support = routed_support(plan);
    const int k = static_cast<int>(support.nodes.size());
    if (k > 22) {
        throw Error("equivalence_oracle: routed support spans too many physical qubits");
    }

    // Wire permutation that moves logical qubit q's final position to wire q
    // and parks the remaining (|0>) wires behind the logical block.
    std::vector<int> perm(k, -1);
    for (int q = 0; q < n; ++q) {
        perm[support.wire_of.at(plan.routing.final.phys_of[q])] = q;
    }
    int next = n;
    for (int w = 0; w < k; ++w) {
        if (perm[w] < 0) perm[w] = next++;
    }

    std::mt19937_64 rng(0x5eedf00dULL);
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);

    for (int trial = 0; trial < 3; ++trial) {
        // Product input: identity for trial 0, random RY/RZ per qubit after.
        std::vector<std::pair<double, double>> prep(n, {0.0, 0.0});
        if (trial > 0) {
            for (auto& p : prep) p = {angle(rng), angle(rng)};
        }

        Statevector expected(k);
        for (int q = 0; q < n; ++q) {
            expected.apply_1q(q, gate_matrix_1q(GateKind::Ry, {prep[q].first}));
            expected.apply_1q(q, gate_matrix_1q(GateKind::Rz, {prep[q].second}));
        }
        for (const auto& g : original.gates) expected.apply(g);

        Statevector actual(k);
        for (int q = 0; q < n; ++q) {
            const int wire = support.wire_of.at(plan.routing.initial.phys_of[q]);
            actual.apply_1q(wire, gate_matrix_1q(GateKind::Ry, {prep[q].first}));
            actual.apply_1q(wire, gate_matrix_1q(GateKind::Rz, {prep[q].second}));
        }
        for (const auto& rg : plan.routing.routed) {
            Gate g = rg.gate;
            for (auto& q : g.qubits) q = support.wire_of.at(q);
            actual.apply(g);
        }
        actual.permute_wires(perm);

        if (!Statevector::approx_equal_up_to_phase(expected, actual, tol)) return false;
    }
    return true;
}

MonteCarloResult monte_carlo_fidelity(const Plan& plan, const SystemConfig& config,
                                      std::uint64_t shots, std::uint64_t seed) {
    if (shots == 0) throw Error("monte_carlo_fidelity: shots must be positive");
    if (plan.partition.assignment.size() > 10) {
        throw Error("monte_carlo_fidelity: circuit too large (limit 10 qubits)");
    }
    (void)config;

    // Error events per routed gate, in execution order. A SWAP is three CX
    // executions and draws three times; an EPR use fails with 1-SR.
    std::vector<double> event_p;
    for (const auto& rg : plan.routing.routed) {
        const Gate& g = rg.gate;
        switch (g.kind) {
            case GateKind::Barrier:
                break;
            case GateKind::Measure:
                event_p.push_back(plan.vst.node_err_readout[g.qubits[0]]);
                break;
            case GateKind::Swap:
            case GateKind::Cx: {
                const VstEdge* e = plan.vst.edge_between(g.qubits[0], g.qubits[1]);
                if (e == nullptr) throw Error("monte_carlo_fidelity: non-adjacent routed gate");
                const double p = e->epr ? 1.0 - e->sr : e->err_2q;
                const int draws = g.kind == GateKind::Swap ? 3 : 1;
                for (int d = 0; d < draws; ++d) event_p.push_back(p);
                break;
            }
            default:
                event_p.push_back(plan.vst.node_err_1q[g.qubits[0]]);
                break;
        }
    }

    std::uint64_t survived = 0;
    for (std::uint64_t shot = 0; shot < shots; ++shot) {
        // Per-shot derived stream keeps shots independent and parallelizable.
        std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * (shot + 1)));
        std::uniform_real_distribution<double> u(0.0, 1.0);
        bool failed = false;
        for (double p : event_p) {
            if (u(rng) < p) {
                failed = true;
                break;
            }
        }
        if (!failed) ++survived;
    }
    MonteCarloResult result;
    result.shots = shots;
    result.fidelity = static_cast<double>(survived) / static_cast<double>(shots);
    result.std_err = std::sqrt(result.fidelity * (1.0 - result.fidelity) /
                               static_cast<double>(shots));
    return result;
}

}  // namespace dismap
