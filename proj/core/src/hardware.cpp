#include "dismap/hardware.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <queue>
#include <sstream>

#include <nlohmann/json.hpp>

namespace dismap {

using nlohmann::json;

bool WorkerSpec::has_edge(int a, int b) const {
    if (a > b) std::swap(a, b);
    return std::binary_search(coupling_edges.begin(), coupling_edges.end(), std::make_pair(a, b));
}

std::vector<int> WorkerSpec::neighbors(int q) const {
    std::vector<int> out;
    for (const auto& [a, b] : coupling_edges) {
        if (a == q) out.push_back(b);
        else if (b == q) out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool WorkerSpec::is_connected() const {
    if (n_qubits <= 0) return false;
    std::vector<bool> seen(n_qubits, false);
    std::queue<int> frontier;
    frontier.push(0);
    seen[0] = true;
    int visited = 1;
    while (!frontier.empty()) {
        int q = frontier.front();
        frontier.pop();
        for (const auto& [a, b] : coupling_edges) {
            int other = -1;
            if (a == q) other = b;
            else if (b == q) other = a;
            if (other >= 0 && other < n_qubits && !seen[other]) {
                seen[other] = true;
                ++visited;
                frontier.push(other);
            }
        }
    }
    return visited == n_qubits;
}

int SystemConfig::total_capacity() const {
    int total = 0;
    for (const auto& w : workers) total += w.n_qubits;
    return total;
}

ConfigError::ConfigError(std::vector<std::string> problems)
    : Error([&problems] {
          std::ostringstream msg;
          msg << "invalid system config (" << problems.size() << " problem(s)):";
          for (const auto& p : problems) msg << "\n  - " << p;
          return msg.str();
      }()),
      problems_(std::move(problems)) {}

namespace {

bool probability_ok(double p) { return p >= 0.0 && p < 1.0; }

void parse_worker(const json& j, std::size_t position, std::vector<WorkerSpec>& workers,
                  std::vector<std::string>& problems) {
    const std::string where = "workers[" + std::to_string(position) + "]";
    WorkerSpec w;
    if (!j.contains("id") || !j["id"].is_number_integer()) {
        problems.push_back(where + ": missing integer field 'id'");
        w.id = static_cast<int>(position);
    } else {
        w.id = j["id"].get<int>();
    }
    if (!j.contains("qubits") || !j["qubits"].is_number_integer() || j["qubits"].get<int>() <= 0) {
        problems.push_back(where + ": missing positive integer field 'qubits'");
        return;
    }
    w.n_qubits = j["qubits"].get<int>();

    if (!j.contains("edges") || !j["edges"].is_array()) {
        problems.push_back(where + ": missing array field 'edges'");
        return;
    }
    for (const auto& e : j["edges"]) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
            !e[1].is_number_integer()) {
            problems.push_back(where + ": malformed edge entry " + e.dump());
            continue;
        }
        int a = e[0].get<int>(), b = e[1].get<int>();
        if (a == b) {
            problems.push_back(where + ": self-loop edge [" + std::to_string(a) + "," +
                               std::to_string(b) + "]");
            continue;
        }
        if (a < 0 || b < 0 || a >= w.n_qubits || b >= w.n_qubits) {
            problems.push_back(where + ": edge endpoint out of range in [" + std::to_string(a) +
                               "," + std::to_string(b) + "]");
            continue;
        }
        if (a > b) std::swap(a, b);
        w.coupling_edges.emplace_back(a, b);
    }
    std::sort(w.coupling_edges.begin(), w.coupling_edges.end());
    w.coupling_edges.erase(std::unique(w.coupling_edges.begin(), w.coupling_edges.end()),
                           w.coupling_edges.end());

    auto read_rates = [&](const char* field, std::vector<double>& out) {
        if (!j.contains(field) || !j[field].is_array() ||
            static_cast<int>(j[field].size()) != w.n_qubits) {
            problems.push_back(where + ": field '" + field + "' must list one rate per qubit");
            out.assign(w.n_qubits, 0.0);
            return;
        }
        out.clear();
        for (std::size_t q = 0; q < j[field].size(); ++q) {
            double v = j[field][q].is_number() ? j[field][q].get<double>() : -1.0;
            if (!probability_ok(v)) {
                problems.push_back(where + ": " + field + "[" + std::to_string(q) +
                                   "] = " + j[field][q].dump() + " outside [0,1)");
                v = 0.0;
            }
            out.push_back(v);
        }
    };
    read_rates("err_1q", w.err_1q);
    read_rates("err_readout", w.err_readout);

    if (!j.contains("err_2q") || !j["err_2q"].is_object()) {
        problems.push_back(where + ": missing object field 'err_2q'");
    } else {
        for (const auto& [key, value] : j["err_2q"].items()) {
            int a = -1, b = -1;
            if (std::sscanf(key.c_str(), "%d-%d", &a, &b) != 2) {
                problems.push_back(where + ": err_2q key '" + key + "' is not 'a-b'");
                continue;
            }
            if (a > b) std::swap(a, b);
            double v = value.is_number() ? value.get<double>() : -1.0;
            if (!probability_ok(v)) {
                problems.push_back(where + ": err_2q['" + key + "'] = " + value.dump() +
                                   " outside [0,1)");
                v = 0.0;
            }
            w.err_2q[{a, b}] = v;
        }
    }
    for (const auto& edge : w.coupling_edges) {
        if (!w.err_2q.count(edge)) {
            problems.push_back(where + ": coupling edge [" + std::to_string(edge.first) + "," +
                               std::to_string(edge.second) + "] has no err_2q entry");
        }
    }
    if (!w.coupling_edges.empty() || w.n_qubits == 1) {
        if (!w.is_connected()) {
            problems.push_back(where + ": coupling graph is not connected");
        }
    } else {
        problems.push_back(where + ": coupling graph is not connected");
    }
    workers.push_back(std::move(w));
}

}  // namespace

SystemConfig parse_system_config(const json& j) {
    std::vector<std::string> problems;
    SystemConfig config;

    if (j.contains("default_sr")) {
        if (!j["default_sr"].is_number()) {
            problems.push_back("'default_sr' must be a number");
        } else {
            config.default_sr = j["default_sr"].get<double>();
            if (!(config.default_sr > 0.0 && config.default_sr <= 1.0)) {
                problems.push_back("'default_sr' must lie in (0, 1]");
            }
        }
    }
    if (j.contains("max_links")) {
        config.max_links = j["max_links"].is_number_integer() ? j["max_links"].get<int>() : -1;
        if (config.max_links < 1) problems.push_back("'max_links' must be >= 1");
    }
    if (j.contains("candidates_per_worker")) {
        config.candidates_per_worker = j["candidates_per_worker"].is_number_integer()
                                           ? j["candidates_per_worker"].get<int>()
                                           : -1;
        if (config.candidates_per_worker < 1) {
            problems.push_back("'candidates_per_worker' must be >= 1");
        }
    }
    if (!j.contains("workers") || !j["workers"].is_array() || j["workers"].empty()) {
        problems.push_back("missing non-empty array field 'workers'");
    } else {
        for (std::size_t i = 0; i < j["workers"].size(); ++i) {
            parse_worker(j["workers"][i], i, config.workers, problems);
        }
        std::vector<int> ids;
        for (const auto& w : config.workers) ids.push_back(w.id);
        std::sort(ids.begin(), ids.end());
        for (std::size_t i = 0; i < ids.size(); ++i) {
            if (ids[i] != static_cast<int>(i)) {
                problems.push_back("worker ids must be unique and contiguous from 0");
                break;
            }
        }
        std::sort(config.workers.begin(), config.workers.end(),
                  [](const WorkerSpec& a, const WorkerSpec& b) { return a.id < b.id; });
    }

    if (!problems.empty()) throw ConfigError(std::move(problems));
    return config;
}

SystemConfig load_system_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file: " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError({std::string("JSON parse error: ") + e.what()});
    }
    return parse_system_config(j);
}

json system_config_to_json(const SystemConfig& config) {
    json j;
    j["default_sr"] = config.default_sr;
    j["max_links"] = config.max_links;
    j["candidates_per_worker"] = config.candidates_per_worker;
    j["workers"] = json::array();
    for (const auto& w : config.workers) {
        json jw;
        jw["id"] = w.id;
        jw["qubits"] = w.n_qubits;
        jw["edges"] = json::array();
        for (const auto& [a, b] : w.coupling_edges) jw["edges"].push_back({a, b});
        jw["err_1q"] = w.err_1q;
        jw["err_readout"] = w.err_readout;
        json e2q;
        for (const auto& [edge, v] : w.err_2q) {
            e2q[std::to_string(edge.first) + "-" + std::to_string(edge.second)] = v;
        }
        jw["err_2q"] = e2q;
        j["workers"].push_back(std::move(jw));
    }
    return j;
}

double qubit_quality(const WorkerSpec& worker, int qubit) {
    if (qubit < 0 || qubit >= worker.n_qubits) throw Error("qubit_quality: index out of range");
    double sum_2q = 0.0;
    int incident = 0;
    for (const auto& [edge, err] : worker.err_2q) {
        if (edge.first == qubit || edge.second == qubit) {
            sum_2q += err;
            ++incident;
        }
    }
    const double mean_2q = incident > 0 ? sum_2q / incident : 0.0;
    return mean_2q + worker.err_readout.at(qubit) + worker.err_1q.at(qubit);
}

std::vector<int> best_qubits(const WorkerSpec& worker, int k) {
    std::vector<std::pair<double, int>> scored;
    scored.reserve(worker.n_qubits);
    for (int q = 0; q < worker.n_qubits; ++q) scored.emplace_back(qubit_quality(worker, q), q);
    std::sort(scored.begin(), scored.end());
    std::vector<int> out;
    for (int i = 0; i < k && i < static_cast<int>(scored.size()); ++i) {
        out.push_back(scored[i].second);
    }
    return out;
}

std::vector<EprCandidate> enumerate_epr_candidates(const SystemConfig& config) {
    if (config.workers.size() < 2) {
        throw Error("enumerate_epr_candidates: need at least 2 workers");
    }
    std::vector<std::vector<int>> selected;  // per worker, best-k qubits
    for (const auto& w : config.workers) {
        selected.push_back(best_qubits(w, config.candidates_per_worker));
    }

    // Base enumeration: single links ordered lexicographically by
    // (worker_a, worker_b, qubit_a, qubit_b).
    std::vector<EprLink> all_links;
    for (std::size_t wi = 0; wi < config.workers.size(); ++wi) {
        for (std::size_t wj = wi + 1; wj < config.workers.size(); ++wj) {
            std::vector<int> qa = selected[wi];
            std::vector<int> qb = selected[wj];
            std::sort(qa.begin(), qa.end());
            std::sort(qb.begin(), qb.end());
            for (int a : qa) {
                for (int b : qb) {
                    all_links.push_back({static_cast<int>(wi), a, static_cast<int>(wj), b,
                                         config.default_sr});
                }
            }
        }
    }

    auto link_quality = [&](const EprLink& l) {
        return qubit_quality(config.workers[l.worker_a], l.qubit_a) +
               qubit_quality(config.workers[l.worker_b], l.qubit_b);
    };
    auto shares_qubit = [](const EprLink& x, const EprLink& y) {
        return (x.worker_a == y.worker_a && x.qubit_a == y.qubit_a) ||
               (x.worker_a == y.worker_b && x.qubit_a == y.qubit_b) ||
               (x.worker_b == y.worker_a && x.qubit_b == y.qubit_a) ||
               (x.worker_b == y.worker_b && x.qubit_b == y.qubit_b);
    };

    struct Entry {
        EprCandidate candidate;
        double quality = 0.0;
        std::size_t base_order = 0;
    };
    std::vector<Entry> entries;
    std::size_t base = 0;
    for (const auto& link : all_links) {
        entries.push_back({{{link}, 0}, link_quality(link), base++});
    }
    if (config.max_links >= 2) {
        for (std::size_t i = 0; i < all_links.size(); ++i) {
            for (std::size_t j = i + 1; j < all_links.size(); ++j) {
                if (shares_qubit(all_links[i], all_links[j])) continue;
                entries.push_back({{{all_links[i], all_links[j]}, 0},
                                   link_quality(all_links[i]) + link_quality(all_links[j]),
                                   base++});
            }
        }
    }

    std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.quality != b.quality) return a.quality < b.quality;
        return a.base_order < b.base_order;
    });

    std::vector<EprCandidate> out;
    out.reserve(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        entries[i].candidate.candidate_index = static_cast<int>(i);
        out.push_back(std::move(entries[i].candidate));
    }
    return out;
}

bool VirtualSystemTopology::adjacent(int a, int b) const {
    if (a > b) std::swap(a, b);
    return edge_index_.count({a, b}) > 0;
}

const VstEdge* VirtualSystemTopology::edge_between(int a, int b) const {
    if (a > b) std::swap(a, b);
    auto it = edge_index_.find({a, b});
    return it == edge_index_.end() ? nullptr : &edges[it->second];
}

void VirtualSystemTopology::finalize() {
    adj_.assign(n_nodes, {});
    edge_index_.clear();
    for (std::size_t i = 0; i < edges.size(); ++i) {
        auto& e = edges[i];
        if (e.a > e.b) std::swap(e.a, e.b);
        edge_index_[{e.a, e.b}] = static_cast<int>(i);
        adj_[e.a].push_back(e.b);
        adj_[e.b].push_back(e.a);
    }
    for (auto& nbrs : adj_) std::sort(nbrs.begin(), nbrs.end());
}

std::vector<std::vector<double>> VirtualSystemTopology::weighted_distances(double w_epr) const {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> dist(n_nodes, std::vector<double>(n_nodes, inf));
    // Dijkstra from every node; graphs are small (<= low hundreds of nodes).
    for (int src = 0; src < n_nodes; ++src) {
        auto& d = dist[src];
        d[src] = 0.0;
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
        heap.push({0.0, src});
        while (!heap.empty()) {
            auto [cost, node] = heap.top();
            heap.pop();
            if (cost > d[node]) continue;
            for (int nbr : adj_[node]) {
                const VstEdge* e = edge_between(node, nbr);
                const double w = e->epr ? w_epr : 1.0;
                if (cost + w < d[nbr]) {
                    d[nbr] = cost + w;
                    heap.push({d[nbr], nbr});
                }
            }
        }
    }
    return dist;
}

std::vector<std::vector<int>> VirtualSystemTopology::worker_groups() const {
    const int n_workers = static_cast<int>(worker_offset.size());
    std::vector<int> parent(n_workers);
    for (int i = 0; i < n_workers; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& link : links) {
        int ra = find(link.worker_a), rb = find(link.worker_b);
        if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
    }
    std::map<int, std::vector<int>> groups;
    for (int w = 0; w < n_workers; ++w) groups[find(w)].push_back(w);
    std::vector<std::vector<int>> out;
    for (auto& [root, members] : groups) out.push_back(std::move(members));
    return out;
}

VirtualSystemTopology con_vst(const SystemConfig& config, const EprCandidate& candidate) {
    VirtualSystemTopology vst;
    const int n_workers = static_cast<int>(config.workers.size());
    vst.worker_offset.resize(n_workers);
    vst.worker_capacity.resize(n_workers);
    int offset = 0;
    for (int w = 0; w < n_workers; ++w) {
        vst.worker_offset[w] = offset;
        vst.worker_capacity[w] = config.workers[w].n_qubits;
        offset += config.workers[w].n_qubits;
    }
    vst.n_nodes = offset;
    vst.worker_of.resize(vst.n_nodes);
    vst.local_of.resize(vst.n_nodes);
    vst.node_err_1q.resize(vst.n_nodes);
    vst.node_err_readout.resize(vst.n_nodes);
    vst.node_quality.resize(vst.n_nodes);
    for (int w = 0; w < n_workers; ++w) {
        const auto& spec = config.workers[w];
        for (int q = 0; q < spec.n_qubits; ++q) {
            const int node = vst.worker_offset[w] + q;
            vst.worker_of[node] = w;
            vst.local_of[node] = q;
            vst.node_err_1q[node] = spec.err_1q[q];
            vst.node_err_readout[node] = spec.err_readout[q];
            vst.node_quality[node] = qubit_quality(spec, q);
        }
        for (const auto& [a, b] : spec.coupling_edges) {
            VstEdge e;
            e.a = vst.worker_offset[w] + a;
            e.b = vst.worker_offset[w] + b;
            e.epr = false;
            e.err_2q = spec.err_2q.at({a, b});
            vst.edges.push_back(e);
        }
    }
    for (const auto& link : candidate.links) {
        if (link.worker_a < 0 || link.worker_a >= n_workers || link.worker_b < 0 ||
            link.worker_b >= n_workers || link.worker_a == link.worker_b) {
            throw Error("con_vst: link connects invalid workers");
        }
        if (link.qubit_a >= config.workers[link.worker_a].n_qubits ||
            link.qubit_b >= config.workers[link.worker_b].n_qubits || link.qubit_a < 0 ||
            link.qubit_b < 0) {
            throw Error("con_vst: link endpoint out of range");
        }
        VstEdge e;
        e.a = vst.node_id(link.worker_a, link.qubit_a);
        e.b = vst.node_id(link.worker_b, link.qubit_b);
        e.epr = true;
        e.sr = link.sr;
        e.err_2q = 1.0 - link.sr;
        vst.edges.push_back(e);
        vst.links.push_back(link);
    }
    vst.finalize();
    return vst;
}

}  // namespace dismap
