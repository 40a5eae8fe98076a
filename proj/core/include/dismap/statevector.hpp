#pragma once

#include "dismap/circuit.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

namespace dismap {

using Amplitude = std::complex<double>;
using Matrix2 = std::array<Amplitude, 4>;  // row-major 2x2

/// 2x2 unitary for a single-qubit gate kind.
Matrix2 gate_matrix_1q(GateKind kind, const std::vector<double>& params);

/// Dense statevector simulator for desk-scale oracles. Measure and Barrier
/// gates are treated as identity (equivalence is on non-measured semantics).
class Statevector {
public:
    static constexpr int kMaxQubits = 24;

    explicit Statevector(int n_qubits);

    [[nodiscard]] int n_qubits() const { return n_; }
    [[nodiscard]] const std::vector<Amplitude>& amplitudes() const { return amps_; }

    void apply(const Gate& gate);
    void apply_circuit(const Circuit& circuit);
    void apply_1q(int q, const Matrix2& m);

    /// Relabels wires: new_of_old[i] is the wire index that old wire i becomes.
    void permute_wires(const std::vector<int>& new_of_old);

    [[nodiscard]] Amplitude inner_product(const Statevector& other) const;
    [[nodiscard]] double norm() const;

    /// |<a|b>| / (|a||b|) >= 1 - tol, i.e. equality up to global phase.
    static bool approx_equal_up_to_phase(const Statevector& a, const Statevector& b, double tol);

private:
    void apply_cx(int control, int target);
    void apply_ccx(int c1, int c2, int target);
    void apply_cz(int a, int b);
    void apply_swap(int a, int b);
    void apply_rzz(int a, int b, double theta);

    int n_;
    std::vector<Amplitude> amps_;
};

}  // namespace dismap
