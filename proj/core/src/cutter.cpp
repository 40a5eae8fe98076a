#include "dismap/cutter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace dismap {

std::vector<int> Partition::used_workers() const {
    std::set<int> used;
    for (int w : assignment) used.insert(w);
    return {used.begin(), used.end()};
}

namespace {

/// Per-worker prefix sums over ascending quality scores; mean_best(w, c) is
/// the mean quality of the c best qubits of worker w.
struct NoiseTable {
    std::vector<std::vector<double>> prefix;

    explicit NoiseTable(const VirtualSystemTopology& vst) {
        const int n_workers = static_cast<int>(vst.worker_offset.size());
        prefix.resize(n_workers);
        for (int w = 0; w < n_workers; ++w) {
            std::vector<double> scores;
            for (int q = 0; q < vst.worker_capacity[w]; ++q) {
                scores.push_back(vst.node_quality[vst.node_id(w, q)]);
            }
            std::sort(scores.begin(), scores.end());
            prefix[w].assign(scores.size() + 1, 0.0);
            for (std::size_t i = 0; i < scores.size(); ++i) {
                prefix[w][i + 1] = prefix[w][i] + scores[i];
            }
        }
    }

    [[nodiscard]] double mean_best(int worker, int count) const {
        if (count <= 0) return 0.0;
        return prefix[worker][count] / count;
    }
};

struct IgAdj {
    // neighbor list per qubit: (other, weight)
    std::vector<std::vector<std::pair<int, int>>> nbr;

    explicit IgAdj(const InteractionGraph& ig) {
        nbr.resize(ig.n_qubits);
        for (const auto& [edge, w] : ig.edge_weights) {
            nbr[edge.first].emplace_back(edge.second, w);
            nbr[edge.second].emplace_back(edge.first, w);
        }
    }
};

double assignment_cost(const std::vector<int>& assign, const InteractionGraph& ig,
                       const NoiseTable& noise, int n_workers, const CutParams& params) {
    double cross = 0.0;
    for (const auto& [edge, w] : ig.edge_weights) {
        if (assign[edge.first] != assign[edge.second]) cross += w;
    }
    std::vector<int> counts(n_workers, 0);
    for (int w : assign) ++counts[w];
    double noise_term = 0.0;
    for (int w = 0; w < n_workers; ++w) noise_term += noise.mean_best(w, counts[w]);
    return params.alpha * cross + params.beta * noise_term;
}

/// KL-style refinement: greedy improving moves and swaps, then full
/// Kernighan-Lin swap passes (tentative locked moves with best-prefix
/// rollback) to climb out of local optima. Every accepted outer iteration
/// strictly decreases the cost, so the loop terminates.
void refine(std::vector<int>& assign, std::vector<int>& counts, const IgAdj& adj,
            const std::vector<int>& caps, const NoiseTable& noise, const CutParams& params,
            const std::vector<int>& workers) {
    const int n = static_cast<int>(assign.size());
    const double eps = 1e-12;

    auto move_cut_delta = [&](int q, int target) {
        // Change in cut weight when q moves from assign[q] to target.
        double delta = 0.0;
        for (const auto& [p, w] : adj.nbr[q]) {
            const bool was_cross = assign[p] != assign[q];
            const bool now_cross = assign[p] != target;
            delta += w * (static_cast<int>(now_cross) - static_cast<int>(was_cross));
        }
        return params.alpha * delta;
    };
    auto noise_delta = [&](int from, int to) {
        return params.beta * (noise.mean_best(from, counts[from] - 1) -
                              noise.mean_best(from, counts[from]) +
                              noise.mean_best(to, counts[to] + 1) - noise.mean_best(to, counts[to]));
    };
    auto swap_delta = [&](int q, int r) {
        // Counts stay fixed; only the cut changes. The shared edge needs a
        // correction because both single-move deltas count it as healed.
        const double dq = move_cut_delta(q, assign[r]);
        const double dr = move_cut_delta(r, assign[q]);
        int wqr = 0;
        for (const auto& [p, w] : adj.nbr[q]) {
            if (p == r) wqr = w;
        }
        return dq + dr + 2.0 * params.alpha * wqr;
    };

    auto greedy_moves = [&]() {
        bool improved_any = false;
        bool improved = true;
        while (improved) {
            improved = false;
            for (int q = 0; q < n; ++q) {
                for (int target : workers) {
                    if (target == assign[q] || counts[target] >= caps[target]) continue;
                    if (move_cut_delta(q, target) + noise_delta(assign[q], target) < -eps) {
                        --counts[assign[q]];
                        ++counts[target];
                        assign[q] = target;
                        improved = true;
                        improved_any = true;
                    }
                }
            }
        }
        return improved_any;
    };

    // One KL pass: tentatively apply the best swap among unlocked qubits
    // (improving or not), lock the pair, and finally roll back to the prefix
    // with the lowest cumulative delta. Returns true if that prefix improves.
    auto kl_swap_pass = [&]() {
        std::vector<bool> locked(n, false);
        struct Step {
            int q, r;
        };
        std::vector<Step> trail;
        double cumulative = 0.0;
        double best_cumulative = 0.0;
        std::size_t best_len = 0;

        while (true) {
            double best_delta = std::numeric_limits<double>::infinity();
            int best_q = -1, best_r = -1;
            for (int q = 0; q < n; ++q) {
                if (locked[q]) continue;
                for (int r = q + 1; r < n; ++r) {
                    if (locked[r] || assign[q] == assign[r]) continue;
                    const double d = swap_delta(q, r);
                    if (d < best_delta - eps) {
                        best_delta = d;
                        best_q = q;
                        best_r = r;
                    }
                }
            }
            if (best_q < 0) break;
            std::swap(assign[best_q], assign[best_r]);
            locked[best_q] = locked[best_r] = true;
            trail.push_back({best_q, best_r});
            cumulative += best_delta;
            if (cumulative < best_cumulative - eps) {
                best_cumulative = cumulative;
                best_len = trail.size();
            }
        }
        while (trail.size() > best_len) {
            std::swap(assign[trail.back().q], assign[trail.back().r]);
            trail.pop_back();
        }
        return best_cumulative < -eps;
    };

    // Move variant of the KL pass for unbalanced transitions: the best legal
    // single move (improving or not) is applied and the qubit locked; the
    // prefix with the lowest cumulative delta wins.
    auto kl_move_pass = [&]() {
        std::vector<bool> locked(n, false);
        struct Step {
            int q, from, to;
        };
        std::vector<Step> trail;
        double cumulative = 0.0;
        double best_cumulative = 0.0;
        std::size_t best_len = 0;

        while (true) {
            double best_delta = std::numeric_limits<double>::infinity();
            int best_q = -1, best_t = -1;
            for (int q = 0; q < n; ++q) {
                if (locked[q]) continue;
                for (int target : workers) {
                    if (target == assign[q] || counts[target] >= caps[target]) continue;
                    const double d =
                        move_cut_delta(q, target) + noise_delta(assign[q], target);
                    if (d < best_delta - eps) {
                        best_delta = d;
                        best_q = q;
                        best_t = target;
                    }
                }
            }
            if (best_q < 0) break;
            trail.push_back({best_q, assign[best_q], best_t});
            --counts[assign[best_q]];
            ++counts[best_t];
            assign[best_q] = best_t;
            locked[best_q] = true;
            cumulative += best_delta;
            if (cumulative < best_cumulative - eps) {
                best_cumulative = cumulative;
                best_len = trail.size();
            }
        }
        while (trail.size() > best_len) {
            const Step s = trail.back();
            trail.pop_back();
            --counts[s.to];
            ++counts[s.from];
            assign[s.q] = s.from;
        }
        return best_cumulative < -eps;
    };

    int guard = 0;
    while (++guard < 1000) {
        const bool moved = greedy_moves();
        const bool swapped = kl_swap_pass();
        const bool shifted = kl_move_pass();
        if (!moved && !swapped && !shifted) break;
    }
}

/// Qubits ordered by descending weighted interaction degree, ties by index.
std::vector<int> degree_order(const InteractionGraph& ig) {
    std::vector<std::pair<long, int>> keyed;
    for (int q = 0; q < ig.n_qubits; ++q) keyed.emplace_back(-ig.weighted_degree(q), q);
    std::sort(keyed.begin(), keyed.end());
    std::vector<int> order;
    for (auto& [d, q] : keyed) order.push_back(q);
    return order;
}

}  // namespace

double cut_cost(const Partition& partition, const InteractionGraph& ig,
                const VirtualSystemTopology& vst, const CutParams& params) {
    NoiseTable noise(vst);
    return assignment_cost(partition.assignment, ig, noise,
                           static_cast<int>(vst.worker_offset.size()), params);
}

Partition make_partition(const Circuit& lowered, std::vector<int> assignment) {
    Partition p;
    p.assignment = std::move(assignment);
    std::map<int, Subcircuit> subs;
    for (std::size_t q = 0; q < p.assignment.size(); ++q) {
        auto& sub = subs[p.assignment[q]];
        sub.worker_id = p.assignment[q];
        sub.qubits.push_back(static_cast<int>(q));
        ++p.budget_used[p.assignment[q]];
    }
    for (std::size_t i = 0; i < lowered.gates.size(); ++i) {
        const Gate& g = lowered.gates[i];
        if (g.kind == GateKind::Cx && p.assignment[g.qubits[0]] != p.assignment[g.qubits[1]]) {
            p.cross_gates.push_back(static_cast<int>(i));
            continue;
        }
        const int w0 = p.assignment[g.qubits[0]];
        bool same = true;
        for (int q : g.qubits) same = same && p.assignment[q] == w0;
        if (same) subs[w0].gate_indices.push_back(static_cast<int>(i));
    }
    for (auto& [w, sub] : subs) p.subcircuits.push_back(std::move(sub));
    return p;
}

Partition topo_cutter(const Circuit& lowered, const VirtualSystemTopology& vst,
                      const SystemConfig& config, const CutParams& params) {
    return std::move(topo_cutter_shortlist(lowered, vst, config, params).front());
}

std::vector<Partition> topo_cutter_shortlist(const Circuit& lowered,
                                             const VirtualSystemTopology& vst,
                                             const SystemConfig& config,
                                             const CutParams& params) {
    if (!is_lowered(lowered)) throw Error("topo_cutter: circuit must be lowered first");
    const int n = lowered.n_qubits;
    const int n_workers = static_cast<int>(config.workers.size());

    // Multiway partitioning happens inside the largest EPR-connected worker
    // group; cross gates between disconnected groups would be unroutable.
    const auto groups = vst.worker_groups();
    std::vector<int> group;
    int group_capacity = 0;
    for (const auto& g : groups) {
        int cap = 0;
        for (int w : g) cap += vst.worker_capacity[w];
        if (cap > group_capacity) {
            group_capacity = cap;
            group = g;
        }
    }
    const int total_vst = vst.n_nodes;
    if (n > total_vst) {
        throw InfeasibleError("insufficient qubits: circuit needs " + std::to_string(n) +
                              ", VST provides " + std::to_string(total_vst) + " (deficit " +
                              std::to_string(n - total_vst) + ")");
    }
    if (n > group_capacity) {
        throw InfeasibleError("insufficient connected qubits: circuit needs " + std::to_string(n) +
                              ", largest linked worker group provides " +
                              std::to_string(group_capacity) + " (deficit " +
                              std::to_string(n - group_capacity) + ")");
    }

    const InteractionGraph ig = interaction_graph(lowered);
    const IgAdj adj(ig);
    const NoiseTable noise(vst);
    const std::vector<int> order = degree_order(ig);

    // Workers of the group ranked by the noise of their best qubits.
    auto noise_ranked = [&](const std::vector<int>& caps) {
        std::vector<std::pair<double, int>> keyed;
        for (int w : group) {
            if (caps[w] > 0) keyed.emplace_back(noise.mean_best(w, std::min(caps[w], n)), w);
        }
        std::sort(keyed.begin(), keyed.end());
        std::vector<int> out;
        for (auto& [k, w] : keyed) out.push_back(w);
        return out;
    };

    // Two slots per distinct used-worker set: the cheapest partition and the
    // most balanced one (smallest maximum block). Balance matters to the
    // router: a block larger than any embeddable region forces SWAPs that the
    // cut objective cannot see.
    struct Slot {
        double cost = std::numeric_limits<double>::infinity();
        int max_block = std::numeric_limits<int>::max();
        std::vector<int> assign;
    };
    std::map<std::vector<int>, std::pair<Slot, Slot>> best_by_used;

    auto consider = [&](std::vector<int> assign, std::vector<int> counts,
                        const std::vector<int>& caps, bool do_refine) {
        if (do_refine) refine(assign, counts, adj, caps, noise, params, group);
        const double cost = assignment_cost(assign, ig, noise, n_workers, params);
        int max_block = 0;
        std::vector<int> recount(n_workers, 0);
        for (int w : assign) max_block = std::max(max_block, ++recount[w]);
        std::set<int> used_set(assign.begin(), assign.end());
        std::vector<int> used(used_set.begin(), used_set.end());
        auto& [cheapest, balanced] = best_by_used[used];
        if (cost < cheapest.cost) {
            cheapest = {cost, max_block, assign};
        }
        if (max_block < balanced.max_block ||
            (max_block == balanced.max_block && cost < balanced.cost)) {
            balanced = {cost, max_block, std::move(assign)};
        }
    };

    std::set<std::vector<int>> seen_caps;
    for (int sq = n; sq <= group_capacity; ++sq) {
        std::vector<int> caps(n_workers, 0);
        for (int w : group) {
            const long scaled = static_cast<long>(sq) * vst.worker_capacity[w];
            caps[w] = static_cast<int>(
                std::min<long>(vst.worker_capacity[w], (scaled + group_capacity - 1) / group_capacity));
        }
        if (!seen_caps.insert(caps).second) continue;
        const std::vector<int> ranked = noise_ranked(caps);
        if (ranked.empty()) continue;

        // Start A: greedy growth. Highest-degree qubits seed the least noisy
        // workers; each next qubit joins the worker it interacts with most.
        {
            std::vector<int> assign(n, -1);
            std::vector<int> counts(n_workers, 0);
            for (int q : order) {
                int best_w = -1;
                long best_gain = -1;
                double best_noise = 0.0;
                for (int w : ranked) {
                    if (counts[w] >= caps[w]) continue;
                    long gain = 0;
                    for (const auto& [p, wt] : adj.nbr[q]) {
                        if (assign[p] == w) gain += wt;
                    }
                    const double wn = noise.mean_best(w, std::min(caps[w], n));
                    if (gain > best_gain ||
                        (gain == best_gain && (wn < best_noise ||
                                               (wn == best_noise && w < best_w)))) {
                        best_gain = gain;
                        best_noise = wn;
                        best_w = w;
                    }
                }
                assign[q] = best_w;
                ++counts[best_w];
            }
            consider(std::move(assign), std::move(counts), caps, true);
        }

        // Start B: contiguous index blocks over noise-ranked workers. Chain
        // circuits split into consecutive segments this way.
        {
            std::vector<int> assign(n, -1);
            std::vector<int> counts(n_workers, 0);
            std::size_t wi = 0;
            for (int q = 0; q < n; ++q) {
                while (wi < ranked.size() && counts[ranked[wi]] >= caps[ranked[wi]]) ++wi;
                assign[q] = ranked[wi];
                ++counts[ranked[wi]];
            }
            consider(std::move(assign), std::move(counts), caps, true);
        }

        // Start C: pack interaction-graph components whole (first-fit
        // decreasing); a component kept on one worker contributes no cut.
        {
            std::vector<int> comp_of(n, -1);
            std::vector<std::vector<int>> comps;
            for (int q = 0; q < n; ++q) {
                if (comp_of[q] >= 0) continue;
                std::vector<int> comp{q};
                comp_of[q] = static_cast<int>(comps.size());
                for (std::size_t head = 0; head < comp.size(); ++head) {
                    for (const auto& [p, w] : adj.nbr[comp[head]]) {
                        if (comp_of[p] < 0) {
                            comp_of[p] = static_cast<int>(comps.size());
                            comp.push_back(p);
                        }
                    }
                }
                std::sort(comp.begin(), comp.end());
                comps.push_back(std::move(comp));
            }
            std::stable_sort(comps.begin(), comps.end(), [](const auto& a, const auto& b) {
                if (a.size() != b.size()) return a.size() > b.size();
                return a.front() < b.front();
            });
            std::vector<int> assign(n, -1);
            std::vector<int> counts(n_workers, 0);
            for (const auto& comp : comps) {
                int target = -1;
                for (int w : ranked) {
                    if (counts[w] + static_cast<int>(comp.size()) <= caps[w]) {
                        target = w;
                        break;
                    }
                }
                if (target >= 0) {
                    for (int q : comp) {
                        assign[q] = target;
                        ++counts[target];
                    }
                } else {
                    // Component larger than any remaining space: spread its
                    // qubits over the roomiest workers.
                    for (int q : comp) {
                        int best_w = -1;
                        for (int w : ranked) {
                            if (counts[w] >= caps[w]) continue;
                            if (best_w < 0 || caps[w] - counts[w] > caps[best_w] - counts[best_w]) {
                                best_w = w;
                            }
                        }
                        assign[q] = best_w;
                        ++counts[best_w];
                    }
                }
            }
            consider(std::move(assign), std::move(counts), caps, true);
        }
    }

    // Whole-circuit-on-one-worker candidates when capacity allows.
    for (int w = 0; w < n_workers; ++w) {
        if (vst.worker_capacity[w] >= n) {
            std::vector<int> assign(n, w);
            std::vector<int> counts(n_workers, 0);
            counts[w] = n;
            std::vector<int> caps(n_workers, 0);
            caps[w] = vst.worker_capacity[w];
            consider(std::move(assign), std::move(counts), caps, false);
        }
    }

    std::vector<std::pair<double, std::vector<int>>> ranked;
    for (auto& [used, slots] : best_by_used) {
        ranked.emplace_back(slots.first.cost, std::move(slots.first.assign));
        if (slots.second.assign != ranked.back().second) {
            ranked.emplace_back(slots.second.cost, std::move(slots.second.assign));
        }
    }
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second < b.second;
    });
    std::vector<Partition> shortlist;
    shortlist.reserve(ranked.size());
    for (auto& [cost, assign] : ranked) {
        shortlist.push_back(make_partition(lowered, std::move(assign)));
    }
    return shortlist;
}

}  // namespace dismap
