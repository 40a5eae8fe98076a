#include "dismap/circuit.hpp"

#include <algorithm>
#include <set>

namespace dismap {

int gate_arity(GateKind kind) {
    switch (kind) {
        case GateKind::Cx:
        case GateKind::Cz:
        case GateKind::Swap:
        case GateKind::Rzz:
            return 2;
        case GateKind::Ccx:
            return 3;
        case GateKind::Barrier:
            return -1;
        default:
            return 1;
    }
}

int gate_param_count(GateKind kind) {
    switch (kind) {
        case GateKind::Rx:
        case GateKind::Ry:
        case GateKind::Rz:
        case GateKind::Rzz:
            return 1;
        default:
            return 0;
    }
}

std::string_view gate_name(GateKind kind) {
    switch (kind) {
        case GateKind::H: return "h";
        case GateKind::X: return "x";
        case GateKind::Y: return "y";
        case GateKind::Z: return "z";
        case GateKind::S: return "s";
        case GateKind::Sdg: return "sdg";
        case GateKind::T: return "t";
        case GateKind::Tdg: return "tdg";
        case GateKind::Rx: return "rx";
        case GateKind::Ry: return "ry";
        case GateKind::Rz: return "rz";
        case GateKind::Cx: return "cx";
        case GateKind::Cz: return "cz";
        case GateKind::Swap: return "swap";
        case GateKind::Rzz: return "rzz";
        case GateKind::Ccx: return "ccx";
        case GateKind::Measure: return "measure";
        case GateKind::Barrier: return "barrier";
    }
    return "?";
}

bool gate_from_name(std::string_view name, GateKind& out) {
    static const std::map<std::string_view, GateKind> table = {
        {"h", GateKind::H},       {"x", GateKind::X},   {"y", GateKind::Y},
        {"z", GateKind::Z},       {"s", GateKind::S},   {"sdg", GateKind::Sdg},
        {"t", GateKind::T},       {"tdg", GateKind::Tdg}, {"rx", GateKind::Rx},
        {"ry", GateKind::Ry},     {"rz", GateKind::Rz}, {"cx", GateKind::Cx},
        {"cz", GateKind::Cz},     {"swap", GateKind::Swap}, {"rzz", GateKind::Rzz},
        {"ccx", GateKind::Ccx},   {"measure", GateKind::Measure},
        {"barrier", GateKind::Barrier},
    };
    auto it = table.find(name);
    if (it == table.end()) return false;
    out = it->second;
    return true;
}

int Circuit::two_qubit_gate_count() const {
    int count = 0;
    for (const auto& g : gates) {
        if (g.is_two_qubit()) ++count;
    }
    return count;
}

std::vector<int> Circuit::measured_qubits() const {
    std::set<int> seen;
    for (const auto& g : gates) {
        if (g.kind == GateKind::Measure) seen.insert(g.qubits.begin(), g.qubits.end());
    }
    return {seen.begin(), seen.end()};
}

void validate_circuit(const Circuit& circuit) {
    if (circuit.n_qubits <= 0) {
        throw Error("circuit must have at least one qubit");
    }
    // Tracks the position of the last non-measure gate per qubit so that
    // measurements can be checked to come last on their wire.
    std::vector<int> last_op(circuit.n_qubits, -1);
    std::vector<int> first_measure(circuit.n_qubits, -1);
    for (std::size_t i = 0; i < circuit.gates.size(); ++i) {
        const Gate& g = circuit.gates[i];
        const int arity = gate_arity(g.kind);
        if (arity >= 0 && static_cast<int>(g.qubits.size()) != arity) {
            throw Error("gate " + std::to_string(i) + " (" + std::string(gate_name(g.kind)) +
                        "): expected " + std::to_string(arity) + " qubit operand(s), got " +
                        std::to_string(g.qubits.size()));
        }
        if (g.qubits.empty()) {
            throw Error("gate " + std::to_string(i) + ": no qubit operands");
        }
        std::set<int> distinct;
        for (int q : g.qubits) {
            if (q < 0 || q >= circuit.n_qubits) {
                throw Error("gate " + std::to_string(i) + ": qubit index " + std::to_string(q) +
                            " out of range for " + std::to_string(circuit.n_qubits) + " qubits");
            }
            if (!distinct.insert(q).second) {
                throw Error("gate " + std::to_string(i) + ": duplicate qubit operand " +
                            std::to_string(q));
            }
        }
        const int want_params = gate_param_count(g.kind);
        if (static_cast<int>(g.params.size()) != want_params) {
            throw Error("gate " + std::to_string(i) + " (" + std::string(gate_name(g.kind)) +
                        "): expected " + std::to_string(want_params) + " parameter(s), got " +
                        std::to_string(g.params.size()));
        }
        for (int q : g.qubits) {
            if (g.kind == GateKind::Measure) {
                if (first_measure[q] < 0) first_measure[q] = static_cast<int>(i);
            } else if (g.kind != GateKind::Barrier) {
                if (first_measure[q] >= 0) {
                    throw Error("gate " + std::to_string(i) + ": qubit " + std::to_string(q) +
                                " used after its measurement (gate " +
                                std::to_string(first_measure[q]) + ")");
                }
                last_op[q] = static_cast<int>(i);
            }
        }
    }
}

bool is_lowered(const Circuit& circuit) {
    for (const auto& g : circuit.gates) {
        switch (g.kind) {
            case GateKind::Cz:
            case GateKind::Swap:
            case GateKind::Rzz:
            case GateKind::Ccx:
                return false;
            default:
                break;
        }
    }
    return true;
}

namespace {

void lower_gate(const Gate& g, std::vector<Gate>& out) {
    using K = GateKind;
    switch (g.kind) {
        case K::Cz: {
            const int c = g.qubits[0], t = g.qubits[1];
            out.emplace_back(K::H, std::vector<int>{t});
            out.emplace_back(K::Cx, std::vector<int>{c, t});
            out.emplace_back(K::H, std::vector<int>{t});
            break;
        }
        case K::Swap: {
            const int a = g.qubits[0], b = g.qubits[1];
            out.emplace_back(K::Cx, std::vector<int>{a, b});
            out.emplace_back(K::Cx, std::vector<int>{b, a});
            out.emplace_back(K::Cx, std::vector<int>{a, b});
            break;
        }
        case K::Rzz: {
            const int a = g.qubits[0], b = g.qubits[1];
            out.emplace_back(K::Cx, std::vector<int>{a, b});
            out.emplace_back(K::Rz, std::vector<int>{b}, g.params);
            out.emplace_back(K::Cx, std::vector<int>{a, b});
            break;
        }
        case K::Ccx: {
            // Standard 6-CX Toffoli in terms of H, T and T†.
            const int c1 = g.qubits[0], c2 = g.qubits[1], t = g.qubits[2];
            out.emplace_back(K::H, std::vector<int>{t});
            out.emplace_back(K::Cx, std::vector<int>{c2, t});
            out.emplace_back(K::Tdg, std::vector<int>{t});
            out.emplace_back(K::Cx, std::vector<int>{c1, t});
            out.emplace_back(K::T, std::vector<int>{t});
            out.emplace_back(K::Cx, std::vector<int>{c2, t});
            out.emplace_back(K::Tdg, std::vector<int>{t});
            out.emplace_back(K::Cx, std::vector<int>{c1, t});
            out.emplace_back(K::T, std::vector<int>{c2});
            out.emplace_back(K::T, std::vector<int>{t});
            out.emplace_back(K::H, std::vector<int>{t});
            out.emplace_back(K::Cx, std::vector<int>{c1, c2});
            out.emplace_back(K::T, std::vector<int>{c1});
            out.emplace_back(K::Tdg, std::vector<int>{c2});
            out.emplace_back(K::Cx, std::vector<int>{c1, c2});
            break;
        }
        default:
            out.push_back(g);
            break;
    }
}

}  // namespace

Circuit lower(const Circuit& circuit) {
    validate_circuit(circuit);
    Circuit out(circuit.n_qubits, circuit.name);
    out.gates.reserve(circuit.gates.size());
    for (const auto& g : circuit.gates) {
        lower_gate(g, out.gates);
    }
    return out;
}

long InteractionGraph::total_weight() const {
    long total = 0;
    for (const auto& [edge, w] : edge_weights) total += w;
    return total;
}

int InteractionGraph::weight(int a, int b) const {
    if (a > b) std::swap(a, b);
    auto it = edge_weights.find({a, b});
    return it == edge_weights.end() ? 0 : it->second;
}

long InteractionGraph::weighted_degree(int q) const {
    long total = 0;
    for (const auto& [edge, w] : edge_weights) {
        if (edge.first == q || edge.second == q) total += w;
    }
    return total;
}

InteractionGraph interaction_graph(const Circuit& lowered) {
    if (!is_lowered(lowered)) {
        throw Error("interaction_graph: circuit not lowered (contains CZ/SWAP/RZZ/CCX)");
    }
    InteractionGraph ig;
    ig.n_qubits = lowered.n_qubits;
    for (const auto& g : lowered.gates) {
        if (g.kind != GateKind::Cx) continue;
        int a = g.qubits[0], b = g.qubits[1];
        if (a > b) std::swap(a, b);
        ++ig.edge_weights[{a, b}];
    }
    return ig;
}

}  // namespace dismap
