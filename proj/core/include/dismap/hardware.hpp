#pragma once

#include "dismap/circuit.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace dismap {

/// One quantum processor: topology, capacity and calibration data.
struct WorkerSpec {
    int id = 0;
    int n_qubits = 0;
    std::vector<std::pair<int, int>> coupling_edges;  // normalized a < b, sorted
    std::vector<double> err_1q;
    std::vector<double> err_readout;
    std::map<std::pair<int, int>, double> err_2q;

    [[nodiscard]] bool has_edge(int a, int b) const;
    [[nodiscard]] std::vector<int> neighbors(int q) const;
    [[nodiscard]] bool is_connected() const;
};

struct SystemConfig {
    std::vector<WorkerSpec> workers;
    double default_sr = 0.95;
    int max_links = 2;
    int candidates_per_worker = 3;

    [[nodiscard]] int total_capacity() const;
};

/// Thrown by config loading; collects every violated invariant.
class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<std::string> problems);
    [[nodiscard]] const std::vector<std::string>& problems() const { return problems_; }

private:
    std::vector<std::string> problems_;
};

SystemConfig parse_system_config(const nlohmann::json& j);
SystemConfig load_system_config(const std::filesystem::path& path);
nlohmann::json system_config_to_json(const SystemConfig& config);

/// Noise score of a qubit: mean incident two-qubit error + readout + 1q error.
/// Lower is better.
double qubit_quality(const WorkerSpec& worker, int qubit);

/// The k best (lowest) quality qubits of a worker, ties broken by index.
std::vector<int> best_qubits(const WorkerSpec& worker, int k);

struct EprLink {
    int worker_a = 0;
    int qubit_a = 0;
    int worker_b = 0;
    int qubit_b = 0;
    double sr = 1.0;

    bool operator==(const EprLink&) const = default;
};

struct EprCandidate {
    std::vector<EprLink> links;
    int candidate_index = 0;
};

/// All qubit-disjoint link sets of size 1..max_links over the per-worker best-k
/// qubits, ordered by ascending total endpoint quality (stable in enumeration
/// order). Deterministic.
std::vector<EprCandidate> enumerate_epr_candidates(const SystemConfig& config);

struct VstEdge {
    int a = 0;  // global node ids, a < b
    int b = 0;
    bool epr = false;
    double err_2q = 0.0;  // for EPR edges this is 1 - sr
    double sr = 1.0;      // meaningful for EPR edges only
};

/// The merged coupling graph of all workers plus one virtual edge per EPR link.
class VirtualSystemTopology {
public:
    VirtualSystemTopology() = default;

    int n_nodes = 0;
    std::vector<int> worker_of;        // node -> worker id
    std::vector<int> local_of;         // node -> local qubit index
    std::vector<int> worker_offset;    // worker id -> first global node id
    std::vector<int> worker_capacity;  // worker id -> qubit count
    std::vector<VstEdge> edges;
    std::vector<double> node_err_1q;
    std::vector<double> node_err_readout;
    std::vector<double> node_quality;
    std::vector<EprLink> links;

    [[nodiscard]] int node_id(int worker, int local) const {
        return worker_offset.at(worker) + local;
    }
    [[nodiscard]] bool adjacent(int a, int b) const;
    [[nodiscard]] const VstEdge* edge_between(int a, int b) const;
    [[nodiscard]] const std::vector<int>& neighbors(int node) const { return adj_.at(node); }

    /// All-pairs shortest path lengths with intra-worker edges at weight 1 and
    /// EPR edges at weight w_epr. Unreachable pairs hold +inf.
    [[nodiscard]] std::vector<std::vector<double>> weighted_distances(double w_epr) const;

    /// Worker ids grouped by EPR connectivity (each group sorted ascending,
    /// groups ordered by smallest member).
    [[nodiscard]] std::vector<std::vector<int>> worker_groups() const;

    void finalize();  // builds adjacency and the edge index

private:
    std::vector<std::vector<int>> adj_;
    std::map<std::pair<int, int>, int> edge_index_;
};

/// ConVST: union of all worker topologies plus the candidate's virtual edges.
/// Pure function of its inputs.
VirtualSystemTopology con_vst(const SystemConfig& config, const EprCandidate& candidate);

}  // namespace dismap
