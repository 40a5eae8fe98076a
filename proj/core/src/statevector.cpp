#include "dismap/statevector.hpp"

#include <cmath>
#include <numbers>

namespace dismap {

namespace {
constexpr Amplitude kI{0.0, 1.0};
const double kSqrtHalf = 1.0 / std::sqrt(2.0);
}  // namespace

Matrix2 gate_matrix_1q(GateKind kind, const std::vector<double>& params) {
    using K = GateKind;
    switch (kind) {
        case K::H:
            return {kSqrtHalf, kSqrtHalf, kSqrtHalf, -kSqrtHalf};
        case K::X:
            return {0, 1, 1, 0};
        case K::Y:
            return {0, -kI, kI, 0};
        case K::Z:
            return {1, 0, 0, -1};
        case K::S:
            return {1, 0, 0, kI};
        case K::Sdg:
            return {1, 0, 0, -kI};
        case K::T:
            return {1, 0, 0, std::exp(kI * (std::numbers::pi / 4.0))};
        case K::Tdg:
            return {1, 0, 0, std::exp(-kI * (std::numbers::pi / 4.0))};
        case K::Rx: {
            const double h = params.at(0) / 2.0;
            return {std::cos(h), -kI * std::sin(h), -kI * std::sin(h), std::cos(h)};
        }
        case K::Ry: {
            const double h = params.at(0) / 2.0;
            return {std::cos(h), Amplitude{-std::sin(h), 0}, Amplitude{std::sin(h), 0},
                    std::cos(h)};
        }
        case K::Rz: {
            const double h = params.at(0) / 2.0;
            return {std::exp(-kI * h), 0, 0, std::exp(kI * h)};
        }
        default:
            throw Error("gate_matrix_1q: not a single-qubit unitary kind");
    }
}

Statevector::Statevector(int n_qubits) : n_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw Error("statevector: qubit count " + std::to_string(n_qubits) +
                    " outside supported range [1, " + std::to_string(kMaxQubits) + "]");
    }
    amps_.assign(std::size_t{1} << n_, Amplitude{0.0, 0.0});
    amps_[0] = 1.0;
}

void Statevector::apply_1q(int q, const Matrix2& m) {
    const std::size_t stride = std::size_t{1} << q;
    const std::size_t size = amps_.size();
    for (std::size_t base = 0; base < size; base += 2 * stride) {
        for (std::size_t low = 0; low < stride; ++low) {
            const std::size_t i0 = base + low;
            const std::size_t i1 = i0 + stride;
            const Amplitude a0 = amps_[i0];
            const Amplitude a1 = amps_[i1];
            amps_[i0] = m[0] * a0 + m[1] * a1;
            amps_[i1] = m[2] * a0 + m[3] * a1;
        }
    }
}

void Statevector::apply_cx(int control, int target) {
    const std::size_t cbit = std::size_t{1} << control;
    const std::size_t tbit = std::size_t{1} << target;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        if ((i & cbit) && !(i & tbit)) {
            std::swap(amps_[i], amps_[i | tbit]);
        }
    }
}

void Statevector::apply_ccx(int c1, int c2, int target) {
    const std::size_t b1 = std::size_t{1} << c1;
    const std::size_t b2 = std::size_t{1} << c2;
    const std::size_t tbit = std::size_t{1} << target;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        if ((i & b1) && (i & b2) && !(i & tbit)) {
            std::swap(amps_[i], amps_[i | tbit]);
        }
    }
}

void Statevector::apply_cz(int a, int b) {
    const std::size_t ba = std::size_t{1} << a;
    const std::size_t bb = std::size_t{1} << b;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        if ((i & ba) && (i & bb)) amps_[i] = -amps_[i];
    }
}

void Statevector::apply_swap(int a, int b) {
    const std::size_t ba = std::size_t{1} << a;
    const std::size_t bb = std::size_t{1} << b;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        const bool ia = i & ba;
        const bool ib = i & bb;
        if (ia && !ib) {
            std::swap(amps_[i], amps_[(i & ~ba) | bb]);
        }
    }
}

void Statevector::apply_rzz(int a, int b, double theta) {
    const std::size_t ba = std::size_t{1} << a;
    const std::size_t bb = std::size_t{1} << b;
    const Amplitude plus = std::exp(kI * (theta / 2.0));
    const Amplitude minus = std::exp(-kI * (theta / 2.0));
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        const bool parity = static_cast<bool>(i & ba) != static_cast<bool>(i & bb);
        amps_[i] *= parity ? plus : minus;
    }
}

void Statevector::apply(const Gate& gate) {
    using K = GateKind;
    switch (gate.kind) {
        case K::Measure:
        case K::Barrier:
            return;
        case K::Cx:
            apply_cx(gate.qubits[0], gate.qubits[1]);
            return;
        case K::Cz:
            apply_cz(gate.qubits[0], gate.qubits[1]);
            return;
        case K::Swap:
            apply_swap(gate.qubits[0], gate.qubits[1]);
            return;
        case K::Rzz:
            apply_rzz(gate.qubits[0], gate.qubits[1], gate.params.at(0));
            return;
        case K::Ccx:
            apply_ccx(gate.qubits[0], gate.qubits[1], gate.qubits[2]);
            return;
        default:
            apply_1q(gate.qubits[0], gate_matrix_1q(gate.kind, gate.params));
            return;
    }
}

void Statevector::apply_circuit(const Circuit& circuit) {
    if (circuit.n_qubits > n_) {
        throw Error("statevector: circuit has more qubits than the state");
    }
    for (const auto& g : circuit.gates) apply(g);
}

void Statevector::permute_wires(const std::vector<int>& new_of_old) {
    if (static_cast<int>(new_of_old.size()) != n_) {
        throw Error("permute_wires: permutation size mismatch");
    }
    std::vector<Amplitude> out(amps_.size());
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        std::size_t j = 0;
        for (int q = 0; q < n_; ++q) {
            if (i & (std::size_t{1} << q)) j |= std::size_t{1} << new_of_old[q];
        }
        out[j] = amps_[i];
    }
    amps_ = std::move(out);
}

Amplitude Statevector::inner_product(const Statevector& other) const {
    if (other.n_ != n_) throw Error("inner_product: dimension mismatch");
    Amplitude acc{0.0, 0.0};
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        acc += std::conj(amps_[i]) * other.amps_[i];
    }
    return acc;
}

double Statevector::norm() const {
    double acc = 0.0;
    for (const auto& a : amps_) acc += std::norm(a);
    return std::sqrt(acc);
}

bool Statevector::approx_equal_up_to_phase(const Statevector& a, const Statevector& b,
                                           double tol) {
    const double overlap = std::abs(a.inner_product(b));
    const double denom = a.norm() * b.norm();
    if (denom == 0.0) return false;
    return overlap / denom >= 1.0 - tol;
}

}  // namespace dismap
