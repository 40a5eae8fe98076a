#pragma once

#include "dismap/optimizer.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dismap {

/// Product-of-survival fidelity estimate with its per-channel breakdown.
struct FidelityEstimate {
    double f = 1.0;
    double single_qubit = 1.0;
    double two_qubit = 1.0;  // intra-worker two-qubit gates (SWAP = 3 CX)
    double readout = 1.0;
    double epr = 1.0;        // SR per EPR use
};

/// Core estimator over a routed result; noise data comes from the VST.
FidelityEstimate estimate_routing_fidelity(const RoutingResult& routing,
                                           const VirtualSystemTopology& vst);

/// Plan-level wrapper: validates calibration coverage against the config.
FidelityEstimate estimate_fidelity(const Plan& plan, const SystemConfig& config);

struct Violation {
    enum class Kind {
        NonAdjacentGate,
        CapacityExceeded,
        LayoutNotBijective,
        OverheadMismatch,
        EprUseMismatch,
        AssignmentIncomplete,
        CrossGateMismatch,
    };
    Kind kind;
    std::string detail;
    int gate_index = -1;
};

std::string_view violation_name(Violation::Kind kind);

/// Structural legality of a plan: adjacency of all routed two-qubit gates,
/// capacity limits, layout bijectivity and SWAP/EPR bookkeeping. Violations
/// are returned as data, never thrown.
std::vector<Violation> check_constraints(const Plan& plan);

/// Statevector check that the routed circuit, after undoing the net layout
/// permutation, implements the original circuit. Compares |0..0> plus two
/// random product inputs up to global phase.
bool equivalence_oracle(const Circuit& original, const Plan& plan, double tol = 1e-9);

struct MonteCarloResult {
    double fidelity = 0.0;
    double std_err = 0.0;
    std::uint64_t shots = 0;
};

/// Samples the no-failure probability of the routed circuit: per shot every
/// gate fails independently with its error rate (a depolarizing Pauli on its
/// operands) and every EPR use fails with 1-SR; the returned fidelity is the
/// surviving fraction, whose expectation equals the analytic estimate.
MonteCarloResult monte_carlo_fidelity(const Plan& plan, const SystemConfig& config,
                                      std::uint64_t shots, std::uint64_t seed);

}  // namespace dismap
