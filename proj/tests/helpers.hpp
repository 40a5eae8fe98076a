#pragma once

#include "dismap/generators.hpp"
#include "dismap/optimizer.hpp"
#include "dismap/qasm.hpp"
#include "dismap/statevector.hpp"
#include "dismap/verifier.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace dismap::testing {

/// A small flat worker: a line of n qubits with uniform (or given) error rates.
inline nlohmann::json line_worker(int id, int n, double e1 = 0.0005, double e2 = 0.01,
                                  double er = 0.02) {
    nlohmann::json w;
    w["id"] = id;
    w["qubits"] = n;
    w["edges"] = nlohmann::json::array();
    w["err_2q"] = nlohmann::json::object();
    for (int q = 0; q + 1 < n; ++q) {
        w["edges"].push_back({q, q + 1});
        w["err_2q"][std::to_string(q) + "-" + std::to_string(q + 1)] = e2;
    }
    w["err_1q"] = std::vector<double>(n, e1);
    w["err_readout"] = std::vector<double>(n, er);
    return w;
}

/// A 2 x (n/2) grid worker.
inline nlohmann::json grid_worker(int id, int cols, double e1 = 0.0005, double e2 = 0.01,
                                  double er = 0.02) {
    const int n = 2 * cols;
    nlohmann::json w;
    w["id"] = id;
    w["qubits"] = n;
    w["edges"] = nlohmann::json::array();
    w["err_2q"] = nlohmann::json::object();
    auto add_edge = [&](int a, int b) {
        w["edges"].push_back({a, b});
        w["err_2q"][std::to_string(std::min(a, b)) + "-" + std::to_string(std::max(a, b))] = e2;
    };
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c + 1 < cols; ++c) add_edge(r * cols + c, r * cols + c + 1);
    }
    for (int c = 0; c < cols; ++c) add_edge(c, cols + c);
    w["err_1q"] = std::vector<double>(n, e1);
    w["err_readout"] = std::vector<double>(n, er);
    return w;
}

inline SystemConfig two_line_workers(int n_each, double sr = 0.95, int max_links = 1,
                                     int k = 3) {
    nlohmann::json j;
    j["default_sr"] = sr;
    j["max_links"] = max_links;
    j["candidates_per_worker"] = k;
    j["workers"] = {line_worker(0, n_each), line_worker(1, n_each)};
    return parse_system_config(j);
}

inline SystemConfig two_grid_workers(int cols_each, double sr = 0.95, int max_links = 1,
                                     int k = 2) {
    nlohmann::json j;
    j["default_sr"] = sr;
    j["max_links"] = max_links;
    j["candidates_per_worker"] = k;
    j["workers"] = {grid_worker(0, cols_each), grid_worker(1, cols_each)};
    return parse_system_config(j);
}

/// Full pipeline to a Plan (lower + optimize); fidelity left to the caller.
inline Plan plan_for(const Circuit& circuit, const SystemConfig& config, std::uint64_t seed = 1,
                     const OptimizerParams& params = {}) {
    return optimize(lower(circuit), config, seed, params);
}

}  // namespace dismap::testing
