#pragma once

#include "dismap/cutter.hpp"
#include "dismap/hardware.hpp"
#include "dismap/router.hpp"

#include <cstdint>

namespace dismap {

struct Evaluation {
    int candidate_index = 0;
    bool feasible = false;
    int so = 0;                // SWAP overhead; meaningful when feasible
    double fidelity = 0.0;     // analytic estimate; meaningful when feasible
};

/// The outcome of the iterative optimization: the winning candidate with its
/// VST, partition, layout and routing, annotated with the evaluation log.
struct Plan {
    Circuit circuit;  // the lowered circuit the plan was built for
    EprCandidate candidate;
    VirtualSystemTopology vst;
    Partition partition;
    Layout layout;
    RoutingResult routing;
    int so = 0;
    double fidelity = 0.0;  // filled by the verifier
    std::vector<Evaluation> evaluations;
};

enum class SelectionKey { Swaps, Fidelity };

struct OptimizerParams {
    int threads = 0;  // 0 = hardware concurrency
    SelectionKey select = SelectionKey::Swaps;
    int restarts = 1;  // routing seeds tried per candidate; best SO kept
    RouterParams router;
    CutParams cut;
};

/// Evaluates every EPR candidate (ConVST -> TopoCutter -> SubMapper) and keeps
/// the plan with minimal SWAP overhead; strict improvement, so the first
/// achiever of the minimum wins. Bit-identical results for any thread count.
Plan optimize(const Circuit& lowered, const SystemConfig& config, std::uint64_t seed,
              const OptimizerParams& params = {});

/// Fixed-policy reference: first feasible candidate, first-fit assignment in
/// worker order, identity initial layout, then the same router. Mirrors a
/// hand-built virtually-connected-topology baseline.
Plan baseline_plan(const Circuit& lowered, const SystemConfig& config, std::uint64_t seed,
                   const OptimizerParams& params = {});

}  // namespace dismap
