#include "dismap/statevector.hpp"

#include <doctest.h>

#include <cmath>

using namespace dismap;

TEST_CASE("single-qubit gates act as their matrices") {
    Statevector sv(1);
    sv.apply(Gate(GateKind::H, {0}));
    CHECK(std::abs(sv.amplitudes()[0] - Amplitude{1 / std::sqrt(2.0), 0}) < 1e-12);
    CHECK(std::abs(sv.amplitudes()[1] - Amplitude{1 / std::sqrt(2.0), 0}) < 1e-12);

    sv.apply(Gate(GateKind::H, {0}));  // H^2 = I
    CHECK(std::abs(sv.amplitudes()[0] - Amplitude{1, 0}) < 1e-12);

    Statevector x(1);
    x.apply(Gate(GateKind::X, {0}));
    CHECK(std::abs(x.amplitudes()[1] - Amplitude{1, 0}) < 1e-12);
}

TEST_CASE("cx and swap act on basis states") {
    Statevector sv(2);
    sv.apply(Gate(GateKind::X, {0}));
    sv.apply(Gate(GateKind::Cx, {0, 1}));  // |11>
    CHECK(std::abs(sv.amplitudes()[3] - Amplitude{1, 0}) < 1e-12);

    Statevector sw(2);
    sw.apply(Gate(GateKind::X, {0}));
    sw.apply(Gate(GateKind::Swap, {0, 1}));  // |10> (qubit 1 set)
    CHECK(std::abs(sw.amplitudes()[2] - Amplitude{1, 0}) < 1e-12);
}

TEST_CASE("decomposition identities hold exactly") {
    // CZ = H(t) CX H(t)
    Statevector a(2), b(2);
    a.apply(Gate(GateKind::H, {0}));
    a.apply(Gate(GateKind::H, {1}));
    a.apply(Gate(GateKind::Cz, {0, 1}));
    b.apply(Gate(GateKind::H, {0}));
    b.apply(Gate(GateKind::H, {1}));
    b.apply(Gate(GateKind::H, {1}));
    b.apply(Gate(GateKind::Cx, {0, 1}));
    b.apply(Gate(GateKind::H, {1}));
    CHECK(Statevector::approx_equal_up_to_phase(a, b, 1e-12));

    // RZZ via CX-RZ-CX
    Statevector c(2), d(2);
    c.apply(Gate(GateKind::H, {0}));
    c.apply(Gate(GateKind::H, {1}));
    c.apply(Gate(GateKind::Rzz, {0, 1}, {0.9}));
    d.apply(Gate(GateKind::H, {0}));
    d.apply(Gate(GateKind::H, {1}));
    d.apply(Gate(GateKind::Cx, {0, 1}));
    d.apply(Gate(GateKind::Rz, {1}, {0.9}));
    d.apply(Gate(GateKind::Cx, {0, 1}));
    CHECK(Statevector::approx_equal_up_to_phase(c, d, 1e-12));
}

TEST_CASE("permute_wires relabels qubits") {
    Statevector sv(3);
    sv.apply(Gate(GateKind::X, {0}));  // |001>
    sv.permute_wires({2, 0, 1});       // wire 0 -> wire 2
    CHECK(std::abs(sv.amplitudes()[4] - Amplitude{1, 0}) < 1e-12);
}

TEST_CASE("approx_equal_up_to_phase ignores global phase only") {
    Statevector a(1), b(1);
    a.apply(Gate(GateKind::H, {0}));
    b.apply(Gate(GateKind::H, {0}));
    b.apply(Gate(GateKind::Rz, {0}, {1.3}));  // relative phase: different state
    CHECK_FALSE(Statevector::approx_equal_up_to_phase(a, b, 1e-9));

    Statevector c(1), d(1);
    c.apply(Gate(GateKind::T, {0}));
    d.apply(Gate(GateKind::Rz, {0}, {3.14159265358979323846 / 4}));  // T up to phase
    CHECK(Statevector::approx_equal_up_to_phase(c, d, 1e-9));
}

TEST_CASE("measure and barrier are simulation no-ops") {
    Statevector a(2), b(2);
    a.apply(Gate(GateKind::H, {0}));
    b.apply(Gate(GateKind::H, {0}));
    a.apply(Gate(GateKind::Barrier, {0, 1}));
    a.apply(Gate(GateKind::Measure, {0}));
    CHECK(Statevector::approx_equal_up_to_phase(a, b, 1e-12));
}
