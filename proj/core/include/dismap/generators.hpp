#pragma once

#include "dismap/circuit.hpp"

#include <cstdint>
#include <vector>

namespace dismap {

enum class BenchKind { Bv, Hwea, Qaoa, Adder };

bool bench_from_name(std::string_view name, BenchKind& out);
std::string_view bench_name(BenchKind kind);

/// Bernstein-Vazirani on n qubits: n-1 data qubits, qubit n-1 is the |-> ancilla.
/// The hidden string has n-1 bits; data qubits are measured at the end.
Circuit bv_circuit(int n_qubits, const std::vector<bool>& hidden);

/// Hardware-efficient ansatz: per layer RY and RZ on every qubit, then a
/// nearest-neighbor CX chain.
Circuit hwea_circuit(int n_qubits, int layers, const std::vector<double>& angles);

struct EdgeList {
    int n_nodes = 0;
    std::vector<std::pair<int, int>> edges;  // normalized a < b, sorted
};

/// Seeded simple 3-regular graph (pairing model with rejection). For n < 4 the
/// complete graph is returned; for odd n one node has degree 2.
EdgeList three_regular_graph(int n_nodes, std::uint64_t seed);

/// Depth-1 QAOA for MaxCut on the seeded 3-regular graph: H layer, one RZZ per
/// edge, RX mixer layer.
Circuit qaoa_circuit(int n_qubits, std::uint64_t seed);

/// Cuccaro ripple-carry adder on (n-2)/2-bit operands; requires even n >= 4.
/// Operand values are drawn from the seed and loaded with an X layer.
Circuit adder_circuit(int n_qubits, std::uint64_t seed);

/// Dispatches to the family generators; deterministic in (kind, n_qubits, seed).
Circuit generate_benchmark(BenchKind kind, int n_qubits, std::uint64_t seed);

/// Random circuit over the supported gate set, used by fuzz suites.
Circuit random_circuit(int n_qubits, int n_gates, std::uint64_t seed,
                       bool two_qubit_only_cx = false);

}  // namespace dismap
