#include "dismap/router.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

namespace dismap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Hop-count distances (EPR edges at weight 1), used for placement decisions.
std::vector<std::vector<double>> hop_distances(const VirtualSystemTopology& vst) {
    return vst.weighted_distances(1.0);
}

struct CrossInfo {
    // logical qubit -> (partner worker -> interaction weight over cross gates)
    std::map<int, std::map<int, int>> partners;
    // worker -> partner worker -> anchor node on this worker
    std::map<int, std::map<int, int>> anchors;
};

/// Free nodes of one worker, plus occupancy bookkeeping during placement.
struct WorkerSpace {
    std::vector<int> nodes;           // all nodes of the worker
    std::set<int> free;

    explicit WorkerSpace(const VirtualSystemTopology& vst, int worker) {
        for (int q = 0; q < vst.worker_capacity[worker]; ++q) {
            nodes.push_back(vst.node_id(worker, q));
        }
        free.insert(nodes.begin(), nodes.end());
    }
};

/// Detects whether the block's interaction subgraph is a simple path and, if
/// so, returns the qubits in path order (lowest-index endpoint first).
std::vector<int> path_order(const std::vector<int>& qubits, const InteractionGraph& ig) {
    std::set<int> owned(qubits.begin(), qubits.end());
    std::map<int, std::vector<int>> adj;
    int edge_count = 0;
    for (const auto& [edge, w] : ig.edge_weights) {
        if (owned.count(edge.first) && owned.count(edge.second)) {
            adj[edge.first].push_back(edge.second);
            adj[edge.second].push_back(edge.first);
            ++edge_count;
        }
    }
    if (qubits.size() < 2 || edge_count != static_cast<int>(qubits.size()) - 1) return {};
    std::vector<int> endpoints;
    for (int q : qubits) {
        const std::size_t deg = adj[q].size();
        if (deg > 2) return {};
        if (deg <= 1) endpoints.push_back(q);
    }
    if (endpoints.size() != 2) return {};
    std::vector<int> order{std::min(endpoints[0], endpoints[1])};
    std::set<int> visited{order[0]};
    while (order.size() < qubits.size()) {
        int next = -1;
        for (int nbr : adj[order.back()]) {
            if (!visited.count(nbr)) next = nbr;
        }
        if (next < 0) return {};  // disconnected
        order.push_back(next);
        visited.insert(next);
    }
    return order;
}

/// Depth-first search for a physical path visiting exactly `length` free
/// nodes, starting at `start` and (when >= 0) ending at `end`. Nodes are
/// explored lowest quality first; distance and parity pruning keep the search
/// small. Returns empty on failure or budget exhaustion.
class PathEmbedder {
public:
    PathEmbedder(const VirtualSystemTopology& vst, const std::vector<std::vector<double>>& dist,
                 const std::set<int>& free, bool bipartite)
        : vst_(vst), dist_(dist), free_(free), bipartite_(bipartite) {}

    std::vector<int> find(int start, int end, int length) {
        end_ = end;
        length_ = length;
        budget_ = 60000;
        path_.clear();
        used_.clear();
        if (!free_.count(start)) return {};
        if (end >= 0 && !feasible(start, length - 1)) return {};
        if (dfs(start)) return path_;
        return {};
    }

private:
    bool feasible(int node, int remaining) const {
        if (end_ < 0) return true;
        const double d = dist_[node][end_];
        if (d > remaining) return false;
        if (bipartite_ && (static_cast<long>(d) % 2) != (remaining % 2)) return false;
        return true;
    }

    bool dfs(int node) {
        if (--budget_ < 0) return false;
        path_.push_back(node);
        used_.insert(node);
        const int placed = static_cast<int>(path_.size());
        if (placed == length_) {
            if (end_ < 0 || node == end_) return true;
            path_.pop_back();
            used_.erase(node);
            return false;
        }
        std::vector<std::pair<double, int>> next;
        for (int nbr : vst_.neighbors(node)) {
            if (!free_.count(nbr) || used_.count(nbr)) continue;
            if (!feasible(nbr, length_ - placed - 1)) continue;
            next.emplace_back(vst_.node_quality[nbr], nbr);
        }
        std::sort(next.begin(), next.end());
        for (const auto& [quality, nbr] : next) {
            if (dfs(nbr)) return true;
            if (budget_ < 0) break;
        }
        path_.pop_back();
        used_.erase(node);
        return false;
    }

    const VirtualSystemTopology& vst_;
    const std::vector<std::vector<double>>& dist_;
    const std::set<int>& free_;
    bool bipartite_;
    int end_ = -1;
    int length_ = 0;
    long budget_ = 0;
    std::vector<int> path_;
    std::set<int> used_;
};

bool worker_is_bipartite(const VirtualSystemTopology& vst, int worker) {
    const int begin = vst.worker_offset[worker];
    const int count = vst.worker_capacity[worker];
    std::vector<int> color(count, -1);
    for (int s = 0; s < count; ++s) {
        if (color[s] >= 0) continue;
        color[s] = 0;
        std::vector<int> stack{s};
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int nbr : vst.neighbors(begin + u)) {
                if (nbr < begin || nbr >= begin + count) continue;
                const int v = nbr - begin;
                if (color[v] < 0) {
                    color[v] = 1 - color[u];
                    stack.push_back(v);
                } else if (color[v] == color[u]) {
                    return false;
                }
            }
        }
    }
    return true;
}

}  // namespace

Layout initial_layout(const Partition& partition, const InteractionGraph& ig,
                      const VirtualSystemTopology& vst) {
    const int n = static_cast<int>(partition.assignment.size());
    const auto dist = hop_distances(vst);

    // cross_info wants the lowered circuit for gate qubits, but the partition
    // already carries the cross structure we need via assignment + cross gate
    // counts folded into the interaction graph. Rebuild partner counts from
    // the interaction graph directly: an ig edge whose endpoints live on
    // different workers is cross traffic.
    CrossInfo info;
    for (const auto& [edge, w] : ig.edge_weights) {
        const int wa = partition.assignment[edge.first];
        const int wb = partition.assignment[edge.second];
        if (wa == wb) continue;
        info.partners[edge.first][wb] += w;
        info.partners[edge.second][wa] += w;
    }
    std::set<std::pair<int, int>> needed;
    for (const auto& [q, ps] : info.partners) {
        for (const auto& [partner, count] : ps) needed.insert({partition.assignment[q], partner});
    }
    for (const auto& [worker, partner] : needed) {
        int best_node = -1;
        double best_dist = kInf;
        for (const auto& link : vst.links) {
            int endpoint = -1;
            if (link.worker_a == worker) endpoint = vst.node_id(link.worker_a, link.qubit_a);
            if (link.worker_b == worker) endpoint = vst.node_id(link.worker_b, link.qubit_b);
            if (endpoint < 0) continue;
            double d = kInf;
            for (int node = vst.worker_offset[partner];
                 node < vst.worker_offset[partner] + vst.worker_capacity[partner]; ++node) {
                d = std::min(d, dist[endpoint][node]);
            }
            if (d < best_dist) {
                best_dist = d;
                best_node = endpoint;
            }
        }
        if (best_node >= 0) info.anchors[worker][partner] = best_node;
    }

    Layout layout;
    layout.phys_of.assign(n, -1);

    for (const auto& sub : partition.subcircuits) {
        const int worker = sub.worker_id;
        WorkerSpace space(vst, worker);
        const bool bipartite = worker_is_bipartite(vst, worker);

        // Cross qubits of this worker, heaviest cross traffic first.
        std::vector<int> cross_qubits;
        for (int q : sub.qubits) {
            if (info.partners.count(q)) cross_qubits.push_back(q);
        }
        std::sort(cross_qubits.begin(), cross_qubits.end(), [&](int a, int b) {
            int ta = 0, tb = 0;
            for (const auto& [p, c] : info.partners[a]) ta += c;
            for (const auto& [p, c] : info.partners[b]) tb += c;
            if (ta != tb) return ta > tb;
            return a < b;
        });

        auto anchor_score = [&](int q, int node) {
            double score = 0.0;
            for (const auto& [partner, weight] : info.partners[q]) {
                auto it = info.anchors[worker].find(partner);
                if (it != info.anchors[worker].end()) score += weight * dist[node][it->second];
            }
            return score;
        };

        // Chain-shaped blocks embed as physical paths when the search finds
        // one; anchored qubits must be the chain endpoints for this to apply.
        bool placed_as_path = false;
        std::vector<int> chain = path_order(sub.qubits, ig);
        if (!chain.empty() && cross_qubits.size() <= 2) {
            bool anchored_are_endpoints = true;
            for (int q : cross_qubits) {
                if (q != chain.front() && q != chain.back()) anchored_are_endpoints = false;
            }
            if (anchored_are_endpoints) {
                // Orient the chain so an anchored qubit comes first.
                auto is_anchored = [&](int q) {
                    return std::find(cross_qubits.begin(), cross_qubits.end(), q) !=
                           cross_qubits.end();
                };
                if (!is_anchored(chain.front()) && is_anchored(chain.back())) {
                    std::reverse(chain.begin(), chain.end());
                }
                int start_node = -1, end_node = -1;
                if (is_anchored(chain.front())) {
                    double best = kInf;
                    for (int node : space.nodes) {
                        const double s = anchor_score(chain.front(), node);
                        if (s < best) {
                            best = s;
                            start_node = node;
                        }
                    }
                }
                if (is_anchored(chain.back())) {
                    double best = kInf;
                    for (int node : space.nodes) {
                        const double s = anchor_score(chain.back(), node);
                        if (s < best) {
                            best = s;
                            end_node = node;
                        }
                    }
                }
                PathEmbedder embedder(vst, dist, space.free, bipartite);
                std::vector<int> path;
                if (start_node >= 0) {
                    path = embedder.find(start_node, end_node,
                                         static_cast<int>(chain.size()));
                } else {
                    // No anchors: try seeds in quality order.
                    std::vector<std::pair<double, int>> seeds;
                    for (int node : space.nodes) seeds.emplace_back(vst.node_quality[node], node);
                    std::sort(seeds.begin(), seeds.end());
                    for (const auto& [quality, seed] : seeds) {
                        path = embedder.find(seed, -1, static_cast<int>(chain.size()));
                        if (!path.empty()) break;
                    }
                }
                if (!path.empty()) {
                    for (std::size_t i = 0; i < chain.size(); ++i) {
                        layout.phys_of[chain[i]] = path[i];
                        space.free.erase(path[i]);
                    }
                    placed_as_path = true;
                }
            }
        }
        if (placed_as_path) continue;

        // Greedy placement. Cross qubits first, pulled toward their anchors;
        // then qubits by interaction weight to already-placed neighbors.
        std::set<int> region;
        auto place = [&](int q, int node) {
            if (node < 0) {
                throw Error("initial_layout: no free region node for logical qubit " +
                            std::to_string(q));  // unreachable on connected topologies
            }
            layout.phys_of[q] = node;
            space.free.erase(node);
            region.insert(node);
        };
        std::set<int> unplaced(sub.qubits.begin(), sub.qubits.end());
        // Cross qubits sit as close to their anchors as the free set allows,
        // regardless of region adjacency.
        for (int q : cross_qubits) {
            int best_node = -1;
            double best_key = kInf;
            double best_quality = kInf;
            for (int node : space.free) {
                const double key = anchor_score(q, node);
                const double quality = vst.node_quality[node];
                if (key < best_key || (key == best_key && quality < best_quality) ||
                    (key == best_key && quality == best_quality && node < best_node)) {
                    best_key = key;
                    best_quality = quality;
                    best_node = node;
                }
            }
            place(q, best_node);
            unplaced.erase(q);
        }
        while (!unplaced.empty()) {
            // Next qubit: strongest interaction with the placed set, tie by index.
            int next_q = -1;
            long best_weight = -1;
            for (int q : unplaced) {
                long weight = 0;
                for (const auto& [edge, w] : ig.edge_weights) {
                    int other = -1;
                    if (edge.first == q) other = edge.second;
                    else if (edge.second == q) other = edge.first;
                    if (other >= 0 && layout.phys_of[other] >= 0 &&
                        partition.assignment[other] == worker) {
                        weight += w;
                    }
                }
                if (weight > best_weight) {
                    best_weight = weight;
                    next_q = q;
                }
            }
            // Candidate nodes: frontier of the region, or any free node when
            // the region is empty.
            int best_node = -1;
            double best_key = kInf;
            double best_quality = kInf;
            for (int node : space.free) {
                if (!region.empty()) {
                    bool adjacent_to_region = false;
                    for (int nbr : vst.neighbors(node)) {
                        if (region.count(nbr)) adjacent_to_region = true;
                    }
                    if (!adjacent_to_region) continue;
                }
                double key = 0.0;
                for (const auto& [edge, w] : ig.edge_weights) {
                    int other = -1;
                    if (edge.first == next_q) other = edge.second;
                    else if (edge.second == next_q) other = edge.first;
                    if (other >= 0 && layout.phys_of[other] >= 0) {
                        key += w * dist[node][layout.phys_of[other]];
                    }
                }
                const double quality = vst.node_quality[node];
                if (key < best_key || (key == best_key && quality < best_quality) ||
                    (key == best_key && quality == best_quality && node < best_node)) {
                    best_key = key;
                    best_quality = quality;
                    best_node = node;
                }
            }
            place(next_q, best_node);
            unplaced.erase(next_q);
        }
    }
    return layout;
}

namespace {

struct Dag {
    std::vector<std::vector<int>> succs;
    std::vector<int> in_degree;

    explicit Dag(const Circuit& circuit) {
        const int n_gates = static_cast<int>(circuit.gates.size());
        succs.resize(n_gates);
        in_degree.assign(n_gates, 0);
        std::vector<int> last(circuit.n_qubits, -1);
        for (int i = 0; i < n_gates; ++i) {
            std::set<int> preds;
            for (int q : circuit.gates[i].qubits) {
                if (last[q] >= 0) preds.insert(last[q]);
                last[q] = i;
            }
            for (int p : preds) {
                succs[p].push_back(i);
                ++in_degree[i];
            }
        }
    }
};

}  // namespace

RoutingResult route(const Circuit& lowered, const Partition& partition, const Layout& layout,
                    const VirtualSystemTopology& vst, std::uint64_t seed,
                    const RouterParams& params) {
    if (!is_lowered(lowered)) throw Error("route: circuit must be lowered first");
    const auto dist = vst.weighted_distances(params.w_epr);
    const Dag dag(lowered);
    const int n_gates = static_cast<int>(lowered.gates.size());

    std::vector<int> pos = layout.phys_of;            // logical -> node
    std::vector<int> occ(vst.n_nodes, -1);            // node -> logical
    for (std::size_t q = 0; q < pos.size(); ++q) {
        if (pos[q] < 0 || pos[q] >= vst.n_nodes || occ[pos[q]] >= 0) {
            throw Error("route: layout is not an injective map onto VST nodes");
        }
        occ[pos[q]] = static_cast<int>(q);
    }

    RoutingResult result;
    result.initial = layout;

    std::vector<int> remaining = dag.in_degree;
    std::set<int> front;
    for (int i = 0; i < n_gates; ++i) {
        if (remaining[i] == 0) front.insert(i);
    }

    std::vector<double> decay(vst.n_nodes, 1.0);
    int swaps_since_reset = 0;
    int swaps_since_progress = 0;
    std::mt19937_64 rng(seed);

    auto attribute_worker = [&](int na, int nb, bool epr) {
        if (epr) return std::min(vst.worker_of[na], vst.worker_of[nb]);
        return vst.worker_of[na];
    };

    auto emit = [&](RoutedGate rg) { result.routed.push_back(std::move(rg)); };

    auto execute_gate = [&](int gi) {
        const Gate& g = lowered.gates[gi];
        Gate mapped = g;
        for (std::size_t k = 0; k < g.qubits.size(); ++k) mapped.qubits[k] = pos[g.qubits[k]];
        RoutedGate rg;
        rg.gate = std::move(mapped);
        rg.source_index = gi;
        if (g.is_two_qubit()) {
            const VstEdge* e = vst.edge_between(rg.gate.qubits[0], rg.gate.qubits[1]);
            rg.on_epr = e != nullptr && e->epr;
            rg.attributed_worker = attribute_worker(rg.gate.qubits[0], rg.gate.qubits[1], rg.on_epr);
        } else {
            rg.attributed_worker = vst.worker_of[rg.gate.qubits[0]];
        }
        emit(std::move(rg));
        front.erase(gi);
        for (int s : dag.succs[gi]) {
            if (--remaining[s] == 0) front.insert(s);
        }
    };

    // Upfront reachability check so failures name the offending gate.
    for (int gi = 0; gi < n_gates; ++gi) {
        const Gate& g = lowered.gates[gi];
        if (!g.is_two_qubit()) continue;
        if (dist[pos[g.qubits[0]]][pos[g.qubits[1]]] == kInf) {
            throw Error("route: gate " + std::to_string(gi) +
                        " is unroutable (operands in disconnected VST regions)");
        }
    }

    auto apply_swap = [&](int u, int v) {
        const VstEdge* e = vst.edge_between(u, v);
        RoutedGate rg;
        rg.gate = Gate(GateKind::Swap, {u, v});
        rg.inserted_swap = true;
        rg.on_epr = e->epr;
        rg.attributed_worker = attribute_worker(u, v, e->epr);
        emit(std::move(rg));

        const int lu = occ[u], lv = occ[v];
        occ[u] = lv;
        occ[v] = lu;
        if (lu >= 0) pos[lu] = v;
        if (lv >= 0) pos[lv] = u;

        decay[u] += params.decay_step;
        decay[v] += params.decay_step;
        if (++swaps_since_reset >= params.decay_reset) {
            std::fill(decay.begin(), decay.end(), 1.0);
            swaps_since_reset = 0;
        }
    };

    while (!front.empty()) {
        bool executed = false;
        std::vector<int> ready;
        for (int gi : front) {
            const Gate& g = lowered.gates[gi];
            if (!g.is_two_qubit()) {
                ready.push_back(gi);
            } else if (vst.adjacent(pos[g.qubits[0]], pos[g.qubits[1]])) {
                ready.push_back(gi);
            }
        }
        for (int gi : ready) {
            execute_gate(gi);
            executed = true;
        }
        if (executed) {
            swaps_since_progress = 0;
            continue;
        }

        // All front gates are blocked two-qubit gates; pick a SWAP.
        std::vector<int> front_gates(front.begin(), front.end());

        // Extended set: the next two-qubit gates past the front layer.
        std::vector<int> extended;
        {
            std::set<int> seen;
            std::set<int> layer(front.begin(), front.end());
            while (!layer.empty() && static_cast<int>(extended.size()) < params.extended_size) {
                std::set<int> next_layer;
                for (int gi : layer) {
                    for (int s : dag.succs[gi]) {
                        if (seen.insert(s).second) next_layer.insert(s);
                    }
                }
                for (int s : next_layer) {
                    if (lowered.gates[s].is_two_qubit() &&
                        static_cast<int>(extended.size()) < params.extended_size) {
                        extended.push_back(s);
                    }
                }
                layer = std::move(next_layer);
            }
        }

        std::set<std::pair<int, int>> swap_candidates;
        for (int gi : front_gates) {
            for (int q : lowered.gates[gi].qubits) {
                const int node = pos[q];
                for (int nbr : vst.neighbors(node)) {
                    swap_candidates.insert(std::minmax(node, nbr));
                }
            }
        }

        auto score_after = [&](const std::pair<int, int>& sw) {
            auto pos_of = [&](int logical) {
                int p = pos[logical];
                if (p == sw.first) return sw.second;
                if (p == sw.second) return sw.first;
                return p;
            };
            double front_sum = 0.0;
            for (int gi : front_gates) {
                const Gate& g = lowered.gates[gi];
                front_sum += dist[pos_of(g.qubits[0])][pos_of(g.qubits[1])];
            }
            double score = front_sum / front_gates.size();
            if (!extended.empty()) {
                double ext_sum = 0.0;
                for (int gi : extended) {
                    const Gate& g = lowered.gates[gi];
                    ext_sum += dist[pos_of(g.qubits[0])][pos_of(g.qubits[1])];
                }
                score += params.extended_weight * ext_sum / extended.size();
            }
            return std::max(decay[sw.first], decay[sw.second]) * score;
        };

        double best = kInf;
        std::vector<std::pair<int, int>> best_swaps;
        for (const auto& sw : swap_candidates) {
            const double s = score_after(sw);
            if (s < best - 1e-12) {
                best = s;
                best_swaps = {sw};
            } else if (s <= best + 1e-12) {
                best_swaps.push_back(sw);
            }
        }
        if (best_swaps.empty()) {
            throw Error("route: no SWAP candidate for blocked front layer");
        }
        std::pair<int, int> chosen = best_swaps[rng() % best_swaps.size()];

        // Livelock backstop: after unreasonably many SWAPs without progress,
        // march the first blocked gate's operand along a shortest path.
        if (++swaps_since_progress > 4 * vst.n_nodes * vst.n_nodes) {
            const Gate& g = lowered.gates[front_gates[0]];
            const int src = pos[g.qubits[0]], dst = pos[g.qubits[1]];
            int step = -1;
            double best_d = kInf;
            for (int nbr : vst.neighbors(src)) {
                if (dist[nbr][dst] < best_d) {
                    best_d = dist[nbr][dst];
                    step = nbr;
                }
            }
            chosen = std::minmax(src, step);
        }
        apply_swap(chosen.first, chosen.second);
    }

    // Final layout and per-worker bookkeeping.
    result.final.phys_of = pos;
    std::map<int, MappedSubcircuit> subs;
    for (const auto& sub : partition.subcircuits) {
        subs[sub.worker_id].worker_id = sub.worker_id;
    }
    for (const auto& rg : result.routed) {
        auto& ms = subs[rg.attributed_worker];
        ms.worker_id = rg.attributed_worker;
        if (rg.inserted_swap) {
            ++ms.swap_count;
            if (rg.on_epr) ms.epr_uses += 3;
        } else if (rg.on_epr) {
            ms.epr_uses += 1;
        }
        ms.gates.push_back(rg);
    }
    for (auto& [w, ms] : subs) {
        result.per_worker_swaps[w] = ms.swap_count;
        result.total_so += ms.swap_count;
        result.total_epr_uses += ms.epr_uses;
        result.mapped.push_back(std::move(ms));
    }
    return result;
}

int swap_overhead(const RoutingResult& result) {
    int total = 0;
    for (const auto& ms : result.mapped) total += ms.swap_count;
    return total;
}

}  // namespace dismap
