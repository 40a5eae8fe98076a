#include "dismap/hardware.hpp"

#include "helpers.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <set>

using namespace dismap;
using nlohmann::json;

TEST_CASE("load_system_config accepts the bundled-style schema") {
    json j;
    j["default_sr"] = 0.95;
    j["max_links"] = 2;
    j["candidates_per_worker"] = 3;
    j["workers"] = {testing::line_worker(0, 20), testing::line_worker(1, 27),
                    testing::line_worker(2, 27)};
    SystemConfig config = parse_system_config(j);
    CHECK(config.workers.size() == 3);
    CHECK(config.total_capacity() == 74);
    CHECK(config.default_sr == doctest::Approx(0.95));
}

TEST_CASE("config validation lists every violation") {
    json j;
    j["default_sr"] = 0.95;
    auto w0 = testing::line_worker(0, 3);
    w0["err_2q"]["0-1"] = 1.2;  // out of range
    auto w1 = testing::line_worker(1, 4);
    w1["edges"] = {{0, 1}, {2, 3}};  // disconnected
    w1["err_2q"] = {{"0-1", 0.01}, {"2-3", 0.01}};
    j["workers"] = {w0, w1};
    try {
        parse_system_config(j);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.problems().size() >= 2);
        bool saw_range = false, saw_connect = false;
        for (const auto& p : e.problems()) {
            if (p.find("outside [0,1)") != std::string::npos) saw_range = true;
            if (p.find("not connected") != std::string::npos) saw_connect = true;
        }
        CHECK(saw_range);
        CHECK(saw_connect);
    }
}

TEST_CASE("config validation rejects missing fields and bad ids") {
    json j;
    j["workers"] = json::array({json{{"id", 0}, {"qubits", 2}}});
    CHECK_THROWS_AS(parse_system_config(j), ConfigError);

    json dup;
    dup["workers"] = {testing::line_worker(0, 3), testing::line_worker(0, 3)};
    CHECK_THROWS_AS(parse_system_config(dup), ConfigError);
}

TEST_CASE("qubit_quality aggregates incident calibration channels") {
    WorkerSpec w;
    w.id = 0;
    w.n_qubits = 3;
    w.coupling_edges = {{0, 1}, {1, 2}};
    w.err_2q[{0, 1}] = 0.01;
    w.err_2q[{1, 2}] = 0.03;
    w.err_1q = {0.001, 0.001, 0.001};
    w.err_readout = {0.02, 0.02, 0.02};

    // qubit 1: mean(0.01, 0.03) + 0.02 + 0.001
    CHECK(qubit_quality(w, 1) == doctest::Approx(0.041));

    // Uniform noise on a line: middle scores equal to the ends.
    WorkerSpec uniform = w;
    uniform.err_2q[{0, 1}] = 0.02;
    uniform.err_2q[{1, 2}] = 0.02;
    CHECK(qubit_quality(uniform, 0) == doctest::Approx(qubit_quality(uniform, 1)));
    CHECK(qubit_quality(uniform, 1) == doctest::Approx(qubit_quality(uniform, 2)));

    WorkerSpec zero = w;
    zero.err_2q[{0, 1}] = 0.0;
    zero.err_2q[{1, 2}] = 0.0;
    zero.err_1q = {0.0, 0.0, 0.0};
    zero.err_readout = {0.0, 0.0, 0.0};
    CHECK(qubit_quality(zero, 1) == 0.0);
}

namespace {

/// Independent brute-force candidate enumerator for cross-checking:
/// every qubit-disjoint set of 1..max_links links over the per-worker best-k
/// qubits.
int brute_force_candidate_count(const SystemConfig& config) {
    std::vector<std::vector<int>> selected;
    for (const auto& w : config.workers) {
        selected.push_back(best_qubits(w, config.candidates_per_worker));
    }
    struct L {
        int wa, qa, wb, qb;
    };
    std::vector<L> links;
    for (std::size_t a = 0; a < config.workers.size(); ++a) {
        for (std::size_t b = a + 1; b < config.workers.size(); ++b) {
            for (int qa : selected[a]) {
                for (int qb : selected[b]) {
                    links.push_back({static_cast<int>(a), qa, static_cast<int>(b), qb});
                }
            }
        }
    }
    int count = static_cast<int>(links.size());
    if (config.max_links >= 2) {
        for (std::size_t i = 0; i < links.size(); ++i) {
            for (std::size_t j = i + 1; j < links.size(); ++j) {
                const auto& x = links[i];
                const auto& y = links[j];
                const bool reuse =
                    (x.wa == y.wa && x.qa == y.qa) || (x.wa == y.wb && x.qa == y.qb) ||
                    (x.wb == y.wa && x.qb == y.qa) || (x.wb == y.wb && x.qb == y.qb);
                if (!reuse) ++count;
            }
        }
    }
    return count;
}

}  // namespace

TEST_CASE("enumerate_epr_candidates counts") {
    SystemConfig c1 = testing::two_line_workers(4, 0.95, 1, 1);
    CHECK(enumerate_epr_candidates(c1).size() == 1);

    SystemConfig c2 = testing::two_line_workers(4, 0.95, 1, 3);
    CHECK(enumerate_epr_candidates(c2).size() == 9);

    // 3 workers, k=2, max_links=2: checked against the brute-force enumerator.
    json j;
    j["default_sr"] = 0.9;
    j["max_links"] = 2;
    j["candidates_per_worker"] = 2;
    j["workers"] = {testing::line_worker(0, 5, 0.0004, 0.012, 0.02),
                    testing::line_worker(1, 6, 0.0005, 0.011, 0.025),
                    testing::line_worker(2, 4, 0.0003, 0.013, 0.022)};
    SystemConfig c3 = parse_system_config(j);
    const auto candidates = enumerate_epr_candidates(c3);
    CHECK(static_cast<int>(candidates.size()) == brute_force_candidate_count(c3));

    CHECK_THROWS_AS(enumerate_epr_candidates(SystemConfig{}), Error);
}

TEST_CASE("enumerate order is deterministic and quality-sorted") {
    json j;
    j["default_sr"] = 0.95;
    j["max_links"] = 2;
    j["candidates_per_worker"] = 2;
    auto w0 = testing::line_worker(0, 4);
    w0["err_readout"] = {0.01, 0.02, 0.03, 0.04};
    auto w1 = testing::line_worker(1, 4);
    w1["err_readout"] = {0.04, 0.03, 0.02, 0.01};
    j["workers"] = {w0, w1};
    SystemConfig config = parse_system_config(j);

    auto a = enumerate_epr_candidates(config);
    auto b = enumerate_epr_candidates(config);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].links == b[i].links);
        CHECK(a[i].candidate_index == static_cast<int>(i));
    }

    auto quality_sum = [&](const EprCandidate& c) {
        double total = 0.0;
        for (const auto& l : c.links) {
            total += qubit_quality(config.workers[l.worker_a], l.qubit_a) +
                     qubit_quality(config.workers[l.worker_b], l.qubit_b);
        }
        return total;
    };
    // Within each link-set size, quality sums are non-decreasing.
    for (std::size_t i = 0; i + 1 < a.size(); ++i) {
        if (a[i].links.size() == a[i + 1].links.size()) {
            CHECK(quality_sum(a[i]) <= quality_sum(a[i + 1]) + 1e-12);
        }
    }

    // Every endpoint is one of the k best qubits of its worker.
    for (const auto& cand : a) {
        for (const auto& l : cand.links) {
            auto best_a = best_qubits(config.workers[l.worker_a], config.candidates_per_worker);
            auto best_b = best_qubits(config.workers[l.worker_b], config.candidates_per_worker);
            CHECK(std::count(best_a.begin(), best_a.end(), l.qubit_a) == 1);
            CHECK(std::count(best_b.begin(), best_b.end(), l.qubit_b) == 1);
        }
        // No qubit reuse inside one candidate.
        std::set<std::pair<int, int>> endpoints;
        for (const auto& l : cand.links) {
            CHECK(endpoints.insert({l.worker_a, l.qubit_a}).second);
            CHECK(endpoints.insert({l.worker_b, l.qubit_b}).second);
        }
    }
}

TEST_CASE("con_vst merges worker topologies with virtual edges") {
    // Two workers; link worker-0 q4 to worker-1 q3.
    json j;
    j["default_sr"] = 0.9;
    j["max_links"] = 1;
    j["candidates_per_worker"] = 3;
    j["workers"] = {testing::line_worker(0, 20), testing::line_worker(1, 27)};
    SystemConfig config = parse_system_config(j);

    EprCandidate cand;
    cand.links.push_back({0, 4, 1, 3, 0.9});
    VirtualSystemTopology vst = con_vst(config, cand);

    CHECK(vst.n_nodes == 47);
    CHECK(vst.edges.size() == 19 + 26 + 1);  // line edges + one virtual edge
    int epr_edges = 0;
    for (const auto& e : vst.edges) {
        if (e.epr) {
            ++epr_edges;
            CHECK(vst.worker_of[e.a] != vst.worker_of[e.b]);
            CHECK(e.a == vst.node_id(0, 4));
            CHECK(e.b == vst.node_id(1, 3));
            CHECK(e.err_2q == doctest::Approx(1.0 - 0.9));
        } else {
            CHECK(vst.worker_of[e.a] == vst.worker_of[e.b]);
        }
    }
    CHECK(epr_edges == 1);
    CHECK(vst.adjacent(vst.node_id(0, 4), vst.node_id(1, 3)));

    // Two links between the same pair stay a simple graph.
    EprCandidate two;
    two.links.push_back({0, 4, 1, 3, 0.9});
    two.links.push_back({0, 7, 1, 9, 0.9});
    VirtualSystemTopology vst2 = con_vst(config, two);
    CHECK(vst2.edges.size() == 19 + 26 + 2);
    std::set<std::pair<int, int>> unique_edges;
    for (const auto& e : vst2.edges) unique_edges.insert({e.a, e.b});
    CHECK(unique_edges.size() == vst2.edges.size());

    // Pure function: same inputs give identical structure.
    VirtualSystemTopology again = con_vst(config, cand);
    CHECK(again.n_nodes == vst.n_nodes);
    REQUIRE(again.edges.size() == vst.edges.size());
    for (std::size_t i = 0; i < vst.edges.size(); ++i) {
        CHECK(again.edges[i].a == vst.edges[i].a);
        CHECK(again.edges[i].b == vst.edges[i].b);
        CHECK(again.edges[i].epr == vst.edges[i].epr);
    }

    EprCandidate bad;
    bad.links.push_back({0, 25, 1, 3, 0.9});
    CHECK_THROWS_AS(con_vst(config, bad), Error);
}

TEST_CASE("worker_groups tracks EPR connectivity") {
    json j;
    j["default_sr"] = 0.9;
    j["max_links"] = 2;
    j["candidates_per_worker"] = 2;
    j["workers"] = {testing::line_worker(0, 4), testing::line_worker(1, 4),
                    testing::line_worker(2, 4)};
    SystemConfig config = parse_system_config(j);

    EprCandidate cand;
    cand.links.push_back({0, 1, 1, 2, 0.9});
    VirtualSystemTopology vst = con_vst(config, cand);
    auto groups = vst.worker_groups();
    REQUIRE(groups.size() == 2);
    CHECK(groups[0] == std::vector<int>{0, 1});
    CHECK(groups[1] == std::vector<int>{2});
}
