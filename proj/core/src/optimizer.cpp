#include "dismap/optimizer.hpp"

#include "dismap/verifier.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <mutex>
#include <thread>

namespace dismap {

namespace {

/// Workers reachable from each other through the candidate's links, as a
/// canonical key for sharing TopoCutter results between candidates. The
/// partition depends on the candidate only through this grouping.
std::vector<std::vector<int>> candidate_groups(const SystemConfig& config,
                                               const EprCandidate& candidate) {
    const int n_workers = static_cast<int>(config.workers.size());
    std::vector<int> parent(n_workers);
    for (int i = 0; i < n_workers; ++i) parent[i] = i;
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& link : candidate.links) {
        int ra = find(link.worker_a), rb = find(link.worker_b);
        if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
    }
    std::map<int, std::vector<int>> by_root;
    for (int w = 0; w < n_workers; ++w) by_root[find(w)].push_back(w);
    std::vector<std::vector<int>> out;
    for (auto& [root, members] : by_root) out.push_back(std::move(members));
    return out;
}

int group_capacity(const SystemConfig& config, const std::vector<std::vector<int>>& groups) {
    int best = 0;
    for (const auto& g : groups) {
        int cap = 0;
        for (int w : g) cap += config.workers[w].n_qubits;
        best = std::max(best, cap);
    }
    return best;
}

struct CandidateOutcome {
    bool feasible = false;
    int so = std::numeric_limits<int>::max();
    double fidelity = 0.0;
    std::uint64_t best_seed = 0;
    std::size_t partition_index = 0;  // position in the TopoCutter shortlist
};

}  // namespace

Plan optimize(const Circuit& lowered, const SystemConfig& config, std::uint64_t seed,
              const OptimizerParams& params) {
    if (!is_lowered(lowered)) throw Error("optimize: circuit must be lowered first");
    if (lowered.n_qubits > config.total_capacity()) {
        throw InfeasibleError("circuit needs " + std::to_string(lowered.n_qubits) +
                              " qubits but the system provides " +
                              std::to_string(config.total_capacity()));
    }

    const std::vector<EprCandidate> candidates = enumerate_epr_candidates(config);
    const InteractionGraph ig = interaction_graph(lowered);

    // TopoCutter shortlists keyed by worker grouping; see candidate_groups.
    std::map<std::vector<std::vector<int>>, std::vector<Partition>> partition_cache;
    std::mutex cache_mutex;

    auto partitions_for = [&](const EprCandidate& candidate,
                              const VirtualSystemTopology& vst) -> const std::vector<Partition>& {
        const auto key = candidate_groups(config, candidate);
        {
            std::lock_guard<std::mutex> lock(cache_mutex);
            auto it = partition_cache.find(key);
            if (it != partition_cache.end()) return it->second;
        }
        std::vector<Partition> p = topo_cutter_shortlist(lowered, vst, config, params.cut);
        std::lock_guard<std::mutex> lock(cache_mutex);
        return partition_cache.emplace(key, std::move(p)).first->second;
    };

    auto evaluate = [&](const EprCandidate& candidate) -> CandidateOutcome {
        CandidateOutcome out;
        if (group_capacity(config, candidate_groups(config, candidate)) < lowered.n_qubits) {
            return out;  // required workers stay disconnected under this candidate
        }
        const VirtualSystemTopology vst = con_vst(config, candidate);
        const std::vector<Partition>& shortlist = partitions_for(candidate, vst);
        for (std::size_t pi = 0; pi < shortlist.size(); ++pi) {
            const Partition& partition = shortlist[pi];
            const Layout layout = initial_layout(partition, ig, vst);
            for (int r = 0; r < std::max(1, params.restarts); ++r) {
                const std::uint64_t route_seed = seed + static_cast<std::uint64_t>(r);
                RoutingResult routing = route(lowered, partition, layout, vst, route_seed,
                                              params.router);
                if (!out.feasible || routing.total_so < out.so) {
                    out.feasible = true;
                    out.so = routing.total_so;
                    out.best_seed = route_seed;
                    out.partition_index = pi;
                    out.fidelity = estimate_routing_fidelity(routing, vst).f;
                }
            }
        }
        return out;
    };

    const int n_candidates = static_cast<int>(candidates.size());
    std::vector<CandidateOutcome> outcomes(n_candidates);
    int n_threads = params.threads > 0
                        ? params.threads
                        : static_cast<int>(std::thread::hardware_concurrency());
    n_threads = std::max(1, std::min(n_threads, n_candidates));

    if (n_threads == 1) {
        for (int i = 0; i < n_candidates; ++i) outcomes[i] = evaluate(candidates[i]);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int t = 0; t < n_threads; ++t) {
            pool.emplace_back([&] {
                for (int i = next.fetch_add(1); i < n_candidates; i = next.fetch_add(1)) {
                    outcomes[i] = evaluate(candidates[i]);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    // Strict-improvement selection in candidate order: the first achiever of
    // the optimum wins regardless of evaluation order above.
    int best_index = -1;
    int best_so = std::numeric_limits<int>::max();
    double best_fid = -1.0;
    std::vector<Evaluation> log;
    for (int i = 0; i < n_candidates; ++i) {
        const auto& o = outcomes[i];
        log.push_back({candidates[i].candidate_index, o.feasible, o.feasible ? o.so : 0,
                       o.feasible ? o.fidelity : 0.0});
        if (!o.feasible) continue;
        const bool better = params.select == SelectionKey::Swaps ? o.so < best_so
                                                                 : o.fidelity > best_fid;
        if (best_index < 0 || better) {
            best_index = i;
            best_so = o.so;
            best_fid = o.fidelity;
        }
    }
    if (best_index < 0) {
        throw InfeasibleError(
            "no feasible candidate: every link set leaves required workers disconnected");
    }

    // Rebuild the winning pipeline; all stages are pure, so this reproduces
    // the evaluated result exactly.
    Plan plan;
    plan.circuit = lowered;
    plan.candidate = candidates[best_index];
    plan.vst = con_vst(config, plan.candidate);
    plan.partition = partitions_for(plan.candidate, plan.vst)[outcomes[best_index].partition_index];
    plan.layout = initial_layout(plan.partition, ig, plan.vst);
    plan.routing = route(lowered, plan.partition, plan.layout, plan.vst,
                         outcomes[best_index].best_seed, params.router);
    plan.so = plan.routing.total_so;
    plan.evaluations = std::move(log);
    return plan;
}

Plan baseline_plan(const Circuit& lowered, const SystemConfig& config, std::uint64_t seed,
                   const OptimizerParams& params) {
    if (!is_lowered(lowered)) throw Error("baseline_plan: circuit must be lowered first");
    if (lowered.n_qubits > config.total_capacity()) {
        throw InfeasibleError("circuit needs " + std::to_string(lowered.n_qubits) +
                              " qubits but the system provides " +
                              std::to_string(config.total_capacity()));
    }

    const std::vector<EprCandidate> candidates = enumerate_epr_candidates(config);
    const EprCandidate* chosen = nullptr;
    std::vector<int> group;
    for (const auto& candidate : candidates) {
        const auto groups = candidate_groups(config, candidate);
        for (const auto& g : groups) {
            int cap = 0;
            for (int w : g) cap += config.workers[w].n_qubits;
            if (cap >= lowered.n_qubits) {
                chosen = &candidate;
                group = g;
                break;
            }
        }
        if (chosen) break;
    }
    if (!chosen) {
        throw InfeasibleError(
            "no feasible candidate: every link set leaves required workers disconnected");
    }

    // First-fit assignment: qubits in index order fill workers in id order up
    // to full capacity; no noise awareness.
    std::vector<int> assignment(lowered.n_qubits, -1);
    std::size_t wi = 0;
    int used_in_worker = 0;
    for (int q = 0; q < lowered.n_qubits; ++q) {
        while (used_in_worker >= config.workers[group[wi]].n_qubits) {
            ++wi;
            used_in_worker = 0;
        }
        assignment[q] = group[wi];
        ++used_in_worker;
    }

    Plan plan;
    plan.circuit = lowered;
    plan.candidate = *chosen;
    plan.vst = con_vst(config, plan.candidate);
    plan.partition = make_partition(lowered, std::move(assignment));

    // Identity layout: each worker's owned qubits map onto its physical
    // qubits in local index order.
    plan.layout.phys_of.assign(lowered.n_qubits, -1);
    for (const auto& sub : plan.partition.subcircuits) {
        int local = 0;
        for (int q : sub.qubits) {
            plan.layout.phys_of[q] = plan.vst.node_id(sub.worker_id, local++);
        }
    }

    plan.routing = route(lowered, plan.partition, plan.layout, plan.vst, seed, params.router);
    plan.so = plan.routing.total_so;
    plan.evaluations.push_back({plan.candidate.candidate_index, true, plan.so, 0.0});
    return plan;
}

}  // namespace dismap
