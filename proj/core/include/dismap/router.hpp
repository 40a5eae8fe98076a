#pragma once

#include "dismap/circuit.hpp"
#include "dismap/cutter.hpp"
#include "dismap/hardware.hpp"

#include <cstdint>

namespace dismap {

/// Logical-to-physical qubit assignment over VST node ids.
struct Layout {
    std::vector<int> phys_of;  // logical qubit -> VST node

    [[nodiscard]] std::map<int, int> logical_of() const {
        std::map<int, int> inv;
        for (std::size_t q = 0; q < phys_of.size(); ++q) inv[phys_of[q]] = static_cast<int>(q);
        return inv;
    }
    [[nodiscard]] bool is_injective() const {
        return logical_of().size() == phys_of.size();
    }
};

/// Noise- and interaction-aware placement. Each worker's qubits go onto a
/// connected low-noise region; qubits touching cross gates sit as close as
/// possible to the EPR endpoint leading to their partner worker. Chain-shaped
/// subcircuits are embedded as physical paths when one exists.
Layout initial_layout(const Partition& partition, const InteractionGraph& ig,
                      const VirtualSystemTopology& vst);

struct RoutedGate {
    Gate gate;                 // operands are VST node ids
    bool inserted_swap = false;
    bool on_epr = false;
    int attributed_worker = 0;
    int source_index = -1;     // index into the input circuit; -1 for inserted SWAPs
};

struct MappedSubcircuit {
    int worker_id = 0;
    std::vector<RoutedGate> gates;  // gates attributed to this worker, in execution order
    int swap_count = 0;
    int epr_uses = 0;
};

struct RoutingResult {
    std::vector<RoutedGate> routed;  // full execution order over the VST
    std::vector<MappedSubcircuit> mapped;
    Layout initial;
    Layout final;
    int total_so = 0;
    int total_epr_uses = 0;
    std::map<int, int> per_worker_swaps;
};

struct RouterParams {
    double w_epr = 3.0;          // heuristic distance weight of EPR edges
    int extended_size = 20;      // lookahead window of upcoming two-qubit gates
    double extended_weight = 0.5;
    double decay_step = 0.001;
    int decay_reset = 5;         // reset decay every this many SWAPs
};

/// SABRE-style routing of the full circuit DAG over the VST. Executable gates
/// are emitted; otherwise the SWAP minimizing the lookahead heuristic is
/// inserted. Deterministic given the seed (ties are broken by the seeded rng).
RoutingResult route(const Circuit& lowered, const Partition& partition, const Layout& layout,
                    const VirtualSystemTopology& vst, std::uint64_t seed,
                    const RouterParams& params = {});

/// Total SWAP overhead of a routing result (sum of per-worker SWAP counts).
int swap_overhead(const RoutingResult& result);

}  // namespace dismap
