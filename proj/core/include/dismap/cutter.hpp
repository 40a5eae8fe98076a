#pragma once

#include "dismap/circuit.hpp"
#include "dismap/hardware.hpp"

namespace dismap {

struct Subcircuit {
    int worker_id = 0;
    std::vector<int> qubits;        // logical qubits owned, ascending
    std::vector<int> gate_indices;  // gates of the parent circuit fully inside this worker
};

/// Assignment of logical qubits to workers plus the induced gate split.
struct Partition {
    std::vector<int> assignment;     // logical qubit -> worker id
    std::vector<Subcircuit> subcircuits;
    std::vector<int> cross_gates;    // indices of CX gates spanning two workers
    std::map<int, int> budget_used;  // worker id -> assigned qubit count

    [[nodiscard]] int worker_of(int logical) const { return assignment.at(logical); }
    [[nodiscard]] std::vector<int> used_workers() const;
};

struct CutParams {
    double alpha = 1.0;  // weight of cross-worker interaction edges
    double beta = 10.0;  // weight of the per-worker noise term
};

/// Partition objective: alpha * cut weight + beta * sum over used workers of
/// the mean quality of the worker's best |owned| qubits.
double cut_cost(const Partition& partition, const InteractionGraph& ig,
                const VirtualSystemTopology& vst, const CutParams& params = {});

/// Thrown when a circuit cannot fit the available (connected) capacity.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

/// TopoCutter: sweeps the total qubit budget, partitioning the circuit under
/// proportional per-worker caps with greedy seeding plus KL-style refinement,
/// and returns the minimum-cost partition. Deterministic.
Partition topo_cutter(const Circuit& lowered, const VirtualSystemTopology& vst,
                      const SystemConfig& config, const CutParams& params = {});

/// The sweep's best partition for every distinct set of used workers, ordered
/// by ascending cut cost. The first entry is what topo_cutter returns; the
/// optimizer routes the whole shortlist and keeps the lowest SWAP overhead,
/// so cutting can win even when the circuit fits a single worker.
std::vector<Partition> topo_cutter_shortlist(const Circuit& lowered,
                                             const VirtualSystemTopology& vst,
                                             const SystemConfig& config,
                                             const CutParams& params = {});

/// Builds the Partition bookkeeping (subcircuits, cross gates, budgets) for a
/// given assignment vector. Exposed for tests and the baseline policy.
Partition make_partition(const Circuit& lowered, std::vector<int> assignment);

}  // namespace dismap
