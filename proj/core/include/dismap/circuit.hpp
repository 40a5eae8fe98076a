#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dismap {

/// Base class for all errors thrown by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class GateKind {
    H, X, Y, Z, S, Sdg, T, Tdg,
    Rx, Ry, Rz,
    Cx, Cz, Swap, Rzz,
    Ccx,
    Measure, Barrier,
};

/// Number of qubit operands for a gate kind; Barrier takes any number (-1).
int gate_arity(GateKind kind);

/// Number of angle parameters for a gate kind.
int gate_param_count(GateKind kind);

/// OpenQASM mnemonic ("h", "cx", ...).
std::string_view gate_name(GateKind kind);

/// Inverse of gate_name; returns false if the mnemonic is unknown.
bool gate_from_name(std::string_view name, GateKind& out);

struct Gate {
    GateKind kind;
    std::vector<int> qubits;
    std::vector<double> params;

    Gate() = default;
    Gate(GateKind k, std::vector<int> qs, std::vector<double> ps = {})
        : kind(k), qubits(std::move(qs)), params(std::move(ps)) {}

    [[nodiscard]] bool is_two_qubit() const {
        return qubits.size() == 2 && kind != GateKind::Measure && kind != GateKind::Barrier;
    }

    bool operator==(const Gate& other) const = default;
};

/// Gate-list intermediate representation of a quantum program.
struct Circuit {
    int n_qubits = 0;
    std::vector<Gate> gates;
    std::string name;

    Circuit() = default;
    explicit Circuit(int n, std::string nm = "") : n_qubits(n), name(std::move(nm)) {}

    Circuit& add(GateKind k, std::vector<int> qs, std::vector<double> ps = {}) {
        gates.emplace_back(k, std::move(qs), std::move(ps));
        return *this;
    }

    [[nodiscard]] int two_qubit_gate_count() const;
    [[nodiscard]] std::vector<int> measured_qubits() const;

    /// Structural equality; the name label is not part of the comparison.
    bool operator==(const Circuit& other) const {
        return n_qubits == other.n_qubits && gates == other.gates;
    }
};

/// Throws Error describing the first violated Gate/Circuit invariant.
void validate_circuit(const Circuit& circuit);

/// True when the circuit contains only single-qubit kinds, CX, Measure and Barrier.
bool is_lowered(const Circuit& circuit);

/// Rewrites CZ, SWAP, RZZ and CCX into {1q, CX}; other gates pass through in order.
Circuit lower(const Circuit& circuit);

/// Weighted graph over logical qubits counting two-qubit interactions.
struct InteractionGraph {
    int n_qubits = 0;
    std::map<std::pair<int, int>, int> edge_weights;  // keys normalized a < b

    [[nodiscard]] long total_weight() const;
    [[nodiscard]] int weight(int a, int b) const;
    [[nodiscard]] long weighted_degree(int q) const;
};

/// Builds the interaction graph of a lowered circuit (CX counts per unordered pair).
InteractionGraph interaction_graph(const Circuit& lowered);

}  // namespace dismap
