#include "dismap/generators.hpp"

#include <algorithm>
#include <numbers>
#include <random>
#include <set>

namespace dismap {

bool bench_from_name(std::string_view name, BenchKind& out) {
    if (name == "bv") out = BenchKind::Bv;
    else if (name == "hwea") out = BenchKind::Hwea;
    else if (name == "qaoa") out = BenchKind::Qaoa;
    else if (name == "adder") out = BenchKind::Adder;
    else return false;
    return true;
}

std::string_view bench_name(BenchKind kind) {
    switch (kind) {
        case BenchKind::Bv: return "bv";
        case BenchKind::Hwea: return "hwea";
        case BenchKind::Qaoa: return "qaoa";
        case BenchKind::Adder: return "adder";
    }
    return "?";
}

Circuit bv_circuit(int n_qubits, const std::vector<bool>& hidden) {
    if (n_qubits < 2) throw Error("bv: need at least 2 qubits");
    if (static_cast<int>(hidden.size()) != n_qubits - 1) {
        throw Error("bv: hidden string must have n_qubits-1 bits");
    }
    Circuit c(n_qubits, "bv" + std::to_string(n_qubits));
    const int ancilla = n_qubits - 1;
    for (int q = 0; q < ancilla; ++q) c.add(GateKind::H, {q});
    c.add(GateKind::X, {ancilla});
    c.add(GateKind::H, {ancilla});
    for (int q = 0; q < ancilla; ++q) {
        if (hidden[q]) c.add(GateKind::Cx, {q, ancilla});
    }
    for (int q = 0; q < ancilla; ++q) c.add(GateKind::H, {q});
    for (int q = 0; q < ancilla; ++q) c.add(GateKind::Measure, {q});
    return c;
}

Circuit hwea_circuit(int n_qubits, int layers, const std::vector<double>& angles) {
    if (n_qubits < 2) throw Error("hwea: need at least 2 qubits");
    if (static_cast<int>(angles.size()) != 2 * n_qubits * layers) {
        throw Error("hwea: expected 2*n_qubits*layers angles");
    }
    Circuit c(n_qubits, "hwea" + std::to_string(n_qubits));
    std::size_t a = 0;
    for (int layer = 0; layer < layers; ++layer) {
        for (int q = 0; q < n_qubits; ++q) c.add(GateKind::Ry, {q}, {angles[a++]});
        for (int q = 0; q < n_qubits; ++q) c.add(GateKind::Rz, {q}, {angles[a++]});
        for (int q = 0; q + 1 < n_qubits; ++q) c.add(GateKind::Cx, {q, q + 1});
    }
    return c;
}

EdgeList three_regular_graph(int n_nodes, std::uint64_t seed) {
    if (n_nodes < 2) throw Error("three_regular_graph: need at least 2 nodes");
    EdgeList g;
    g.n_nodes = n_nodes;
    if (n_nodes <= 4) {
        // Complete graph; for n == 4 this is the unique 3-regular graph.
        for (int a = 0; a < n_nodes; ++a)
            for (int b = a + 1; b < n_nodes; ++b) g.edges.emplace_back(a, b);
        return g;
    }

    // Pairing model: three stubs per node (two for the last node when n is
    // odd), shuffled and paired; resample on self-loops or parallel edges.
    std::vector<int> stubs;
    for (int v = 0; v < n_nodes; ++v) {
        const int degree = (v == n_nodes - 1 && n_nodes % 2 == 1) ? 2 : 3;
        for (int s = 0; s < degree; ++s) stubs.push_back(v);
    }
    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::shuffle(stubs.begin(), stubs.end(), rng);
        std::set<std::pair<int, int>> edges;
        bool ok = true;
        for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
            int a = stubs[i], b = stubs[i + 1];
            if (a == b) { ok = false; break; }
            if (a > b) std::swap(a, b);
            if (!edges.insert({a, b}).second) { ok = false; break; }
        }
        if (ok) {
            g.edges.assign(edges.begin(), edges.end());
            return g;
        }
    }
    // Deterministic circulant fallback; requires even n, which always holds
    // here because odd-n degree sequences pair without rejection pressure
    // only in pathological cases.
    if (n_nodes % 2 == 0) {
        std::set<std::pair<int, int>> edges;
        for (int v = 0; v < n_nodes; ++v) {
            edges.insert(std::minmax(v, (v + 1) % n_nodes));
            edges.insert(std::minmax(v, (v + n_nodes / 2) % n_nodes));
        }
        g.edges.assign(edges.begin(), edges.end());
        return g;
    }
    throw Error("three_regular_graph: pairing failed");
}

Circuit qaoa_circuit(int n_qubits, std::uint64_t seed) {
    EdgeList graph = three_regular_graph(n_qubits, seed);
    std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> angle(0.1, std::numbers::pi - 0.1);
    const double gamma = angle(rng);
    const double beta = angle(rng);

    Circuit c(n_qubits, "qaoa" + std::to_string(n_qubits));
    for (int q = 0; q < n_qubits; ++q) c.add(GateKind::H, {q});
    for (const auto& [a, b] : graph.edges) c.add(GateKind::Rzz, {a, b}, {gamma});
    for (int q = 0; q < n_qubits; ++q) c.add(GateKind::Rx, {q}, {2.0 * beta});
    return c;
}

namespace {

// Cuccaro wire layout: q0 = carry-in, q(2i+1) = b_i, q(2i+2) = a_i, last = z.
struct AdderWires {
    int bits;
    int carry_in() const { return 0; }
    int b(int i) const { return 2 * i + 1; }
    int a(int i) const { return 2 * i + 2; }
    int carry_out() const { return 2 * bits + 1; }
};

void maj(Circuit& c, int carry, int b, int a) {
    c.add(GateKind::Cx, {a, b});
    c.add(GateKind::Cx, {a, carry});
    c.add(GateKind::Ccx, {carry, b, a});
}

void uma(Circuit& c, int carry, int b, int a) {
    c.add(GateKind::Ccx, {carry, b, a});
    c.add(GateKind::Cx, {a, carry});
    c.add(GateKind::Cx, {carry, b});
}

}  // namespace

Circuit adder_circuit(int n_qubits, std::uint64_t seed) {
    if (n_qubits < 4 || n_qubits % 2 != 0) {
        throw Error("adder: n_qubits must be even and >= 4 (two operands + carry in/out)");
    }
    const AdderWires w{(n_qubits - 2) / 2};
    std::mt19937_64 rng(seed);
    std::uint64_t a_val = rng();
    std::uint64_t b_val = rng();

    Circuit c(n_qubits, "adder" + std::to_string(n_qubits));
    for (int i = 0; i < w.bits; ++i) {
        if ((a_val >> (i % 64)) & 1) c.add(GateKind::X, {w.a(i)});
        if ((b_val >> (i % 64)) & 1) c.add(GateKind::X, {w.b(i)});
    }
    maj(c, w.carry_in(), w.b(0), w.a(0));
    for (int i = 1; i < w.bits; ++i) maj(c, w.a(i - 1), w.b(i), w.a(i));
    c.add(GateKind::Cx, {w.a(w.bits - 1), w.carry_out()});
    for (int i = w.bits - 1; i >= 1; --i) uma(c, w.a(i - 1), w.b(i), w.a(i));
    uma(c, w.carry_in(), w.b(0), w.a(0));
    return c;
}

Circuit generate_benchmark(BenchKind kind, int n_qubits, std::uint64_t seed) {
    switch (kind) {
        case BenchKind::Bv: {
            if (n_qubits < 2) throw Error("bv: need at least 2 qubits");
            std::mt19937_64 rng(seed);
            std::vector<bool> hidden(n_qubits - 1);
            for (int i = 0; i < n_qubits - 1; ++i) hidden[i] = (rng() >> 32) & 1;
            return bv_circuit(n_qubits, hidden);
        }
        case BenchKind::Hwea: {
            if (n_qubits < 2) throw Error("hwea: need at least 2 qubits");
            std::mt19937_64 rng(seed);
            std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
            std::vector<double> angles(2 * n_qubits);
            for (auto& a : angles) a = angle(rng);
            return hwea_circuit(n_qubits, 1, angles);
        }
        case BenchKind::Qaoa:
            return qaoa_circuit(n_qubits, seed);
        case BenchKind::Adder:
            return adder_circuit(n_qubits, seed);
    }
    throw Error("unknown benchmark kind");
}

Circuit random_circuit(int n_qubits, int n_gates, std::uint64_t seed, bool two_qubit_only_cx) {
    if (n_qubits < 2) throw Error("random_circuit: need at least 2 qubits");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> qubit(0, n_qubits - 1);
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);

    static const GateKind one_q[] = {GateKind::H,  GateKind::X,   GateKind::Y,  GateKind::Z,
                                     GateKind::S,  GateKind::Sdg, GateKind::T,  GateKind::Tdg,
                                     GateKind::Rx, GateKind::Ry,  GateKind::Rz};
    static const GateKind two_q[] = {GateKind::Cx, GateKind::Cz, GateKind::Swap, GateKind::Rzz};

    Circuit c(n_qubits, "random" + std::to_string(n_qubits));
    for (int i = 0; i < n_gates; ++i) {
        if (rng() % 2 == 0) {
            GateKind k = one_q[rng() % std::size(one_q)];
            std::vector<double> params;
            if (gate_param_count(k) == 1) params.push_back(angle(rng));
            c.add(k, {qubit(rng)}, params);
        } else {
            GateKind k = two_qubit_only_cx ? GateKind::Cx : two_q[rng() % std::size(two_q)];
            int a = qubit(rng);
            int b = qubit(rng);
            while (b == a) b = qubit(rng);
            std::vector<double> params;
            if (gate_param_count(k) == 1) params.push_back(angle(rng));
            c.add(k, {a, b}, params);
        }
    }
    return c;
}

}  // namespace dismap
