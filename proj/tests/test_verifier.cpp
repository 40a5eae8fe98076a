#include "dismap/verifier.hpp"

#include "dismap/generators.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <random>

using namespace dismap;

namespace {

/// Minimal hand-built plan: one worker line topology, given routed gates.
struct TestBed {
    SystemConfig config;
    Plan plan;

    explicit TestBed(int n_qubits, double e1 = 0.0, double e2 = 0.0, double er = 0.0,
                     double sr = 1.0) {
        nlohmann::json j;
        j["default_sr"] = sr;
        j["max_links"] = 1;
        j["candidates_per_worker"] = 1;
        j["workers"] = {testing::line_worker(0, n_qubits, e1, e2, er),
                        testing::line_worker(1, n_qubits, e1, e2, er)};
        config = parse_system_config(j);
        plan.candidate = enumerate_epr_candidates(config).front();
        plan.vst = con_vst(config, plan.candidate);
    }

    void set_circuit(const Circuit& lowered, std::vector<int> assignment) {
        plan.circuit = lowered;
        plan.partition = make_partition(lowered, std::move(assignment));
        InteractionGraph ig = interaction_graph(lowered);
        plan.layout = initial_layout(plan.partition, ig, plan.vst);
        plan.routing = route(lowered, plan.partition, plan.layout, plan.vst, 1);
        plan.so = plan.routing.total_so;
    }
};

}  // namespace

TEST_CASE("estimate_fidelity multiplies survival factors") {
    // Zero error, SR = 1: empty product.
    TestBed zero(3);
    Circuit c(2);
    c.add(GateKind::Cx, {0, 1});
    zero.set_circuit(c, {0, 0});
    FidelityEstimate f = estimate_fidelity(zero.plan, zero.config);
    CHECK(f.f == doctest::Approx(1.0));

    // One CX with err_2q = 0.01 and nothing else.
    TestBed one(3, 0.0, 0.01, 0.0);
    one.set_circuit(c, {0, 0});
    FidelityEstimate f1 = estimate_fidelity(one.plan, one.config);
    CHECK(f1.f == doctest::Approx(0.99));
    CHECK(f1.two_qubit == doctest::Approx(0.99));
    CHECK(f1.single_qubit == doctest::Approx(1.0));

    // Factors multiply exactly to f.
    CHECK(f1.f ==
          doctest::Approx(f1.single_qubit * f1.two_qubit * f1.readout * f1.epr).epsilon(1e-12));
}

TEST_CASE("epr uses scale fidelity by SR per use") {
    // Noiseless workers, SR = 0.95, a cross CX forced onto the link twice.
    TestBed bed(2, 0.0, 0.0, 0.0, 0.95);
    Circuit c(2);
    c.add(GateKind::Cx, {0, 1});
    c.add(GateKind::Cx, {0, 1});
    bed.set_circuit(c, {0, 1});  // one qubit per worker: both CX cross the link
    REQUIRE(bed.plan.routing.total_epr_uses == 2);
    FidelityEstimate f = estimate_fidelity(bed.plan, bed.config);
    CHECK(f.epr == doctest::Approx(0.9025));
    CHECK(f.f == doctest::Approx(0.9025));
}

TEST_CASE("estimate_fidelity is monotone under fuzzing") {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 50; ++i) {
        TestBed bed(5, 0.001, 0.01, 0.02, 0.95);
        Circuit c = lower(random_circuit(5, 15, rng(), true));
        bed.set_circuit(c, std::vector<int>(5, 0));
        const double before = estimate_fidelity(bed.plan, bed.config).f;
        CHECK(before > 0.0);
        CHECK(before <= 1.0);

        // Appending a gate with nonzero error strictly decreases F.
        Circuit extended = c;
        extended.add(GateKind::H, {0});
        bed.set_circuit(extended, std::vector<int>(5, 0));
        const double after = estimate_fidelity(bed.plan, bed.config).f;
        CHECK(after < before);
    }

    // Raising SR weakly increases F.
    for (double sr_low : {0.90, 0.95}) {
        TestBed low(2, 0.0, 0.0, 0.0, sr_low);
        TestBed high(2, 0.0, 0.0, 0.0, sr_low + 0.04);
        Circuit c(2);
        c.add(GateKind::Cx, {0, 1});
        low.set_circuit(c, {0, 1});
        high.set_circuit(c, {0, 1});
        CHECK(estimate_fidelity(high.plan, high.config).f >=
              estimate_fidelity(low.plan, low.config).f);
    }
}

TEST_CASE("check_constraints accepts pipeline plans and flags corruption") {
    SystemConfig config = testing::two_grid_workers(4, 0.95, 1, 2);
    Circuit c = random_circuit(8, 30, 55);
    Plan plan = testing::plan_for(c, config, 5);
    CHECK(check_constraints(plan).empty());

    // Move one routed two-qubit gate onto non-adjacent nodes.
    Plan corrupt = plan;
    for (auto& rg : corrupt.routing.routed) {
        if (rg.gate.qubits.size() == 2 && rg.gate.kind != GateKind::Barrier) {
            int other = rg.gate.qubits[1] == 0 ? corrupt.vst.n_nodes - 1 : 0;
            if (!corrupt.vst.adjacent(rg.gate.qubits[0], other) && other != rg.gate.qubits[0]) {
                rg.gate.qubits[1] = other;
                break;
            }
        }
    }
    auto violations = check_constraints(corrupt);
    bool non_adjacent = false;
    for (const auto& v : violations) {
        if (v.kind == Violation::Kind::NonAdjacentGate) {
            non_adjacent = true;
            CHECK(v.gate_index >= 0);
        }
    }
    CHECK(non_adjacent);

    // Tamper with the SWAP bookkeeping.
    Plan miscount = plan;
    miscount.so += 1;
    miscount.routing.total_so += 1;
    bool overhead = false;
    for (const auto& v : check_constraints(miscount)) {
        overhead = overhead || v.kind == Violation::Kind::OverheadMismatch;
    }
    CHECK(overhead);
}

TEST_CASE("equivalence_oracle validates and catches corruption") {
    SystemConfig config = testing::two_grid_workers(3, 0.95, 1, 2);

    // Unrouted circuit against itself (identity plan on one worker).
    Circuit ghz(3);
    ghz.add(GateKind::H, {0});
    ghz.add(GateKind::Cx, {0, 1});
    ghz.add(GateKind::Cx, {1, 2});
    Plan plan = testing::plan_for(ghz, config, 1);
    CHECK(equivalence_oracle(ghz, plan));

    // Deleting an inserted SWAP must break equivalence.
    std::mt19937_64 rng(3);
    for (int i = 0; i < 20; ++i) {
        Circuit c = random_circuit(6, 25, rng(), true);
        Plan p = testing::plan_for(c, config, rng());
        if (p.routing.total_so == 0) continue;
        CHECK(equivalence_oracle(c, p));
        Plan corrupted = p;
        for (std::size_t gi = 0; gi < corrupted.routing.routed.size(); ++gi) {
            if (corrupted.routing.routed[gi].inserted_swap) {
                corrupted.routing.routed.erase(corrupted.routing.routed.begin() + gi);
                break;
            }
        }
        CHECK_FALSE(equivalence_oracle(c, corrupted));
        return;  // one corrupted case is enough
    }
    FAIL("no routed instance with SWAPs found");
}

TEST_CASE("equivalence_oracle rejects oversized circuits") {
    SystemConfig config = testing::two_grid_workers(8, 0.95, 1, 2);
    Circuit big(15);
    big.add(GateKind::H, {0});
    Plan plan = testing::plan_for(big, config, 1);
    CHECK_THROWS_AS(equivalence_oracle(big, plan), Error);
}

TEST_CASE("monte carlo survival matches the analytic estimate") {
    // Zero noise: sampled fidelity is exactly 1.
    TestBed zero(3);
    Circuit c(2);
    c.add(GateKind::Cx, {0, 1});
    zero.set_circuit(c, {0, 0});
    MonteCarloResult mc0 = monte_carlo_fidelity(zero.plan, zero.config, 2000, 1);
    CHECK(mc0.fidelity == 1.0);

    // Single CX with err_2q = 0.2: survival ~ Binomial(shots, 0.8).
    TestBed lossy(3, 0.0, 0.2, 0.0);
    lossy.set_circuit(c, {0, 0});
    MonteCarloResult mc = monte_carlo_fidelity(lossy.plan, lossy.config, 100000, 7);
    CHECK(std::abs(mc.fidelity - 0.8) < 0.004);
    CHECK(mc.std_err == doctest::Approx(std::sqrt(0.8 * 0.2 / 100000)).epsilon(0.05));

    // 4-sigma agreement with the analytic no-failure probability.
    std::mt19937_64 rng(8);
    for (int i = 0; i < 5; ++i) {
        TestBed bed(4, 0.001, 0.02, 0.01, 0.95);
        Circuit rc = lower(random_circuit(4, 12, rng(), true));
        bed.set_circuit(rc, std::vector<int>(4, 0));
        const double analytic = estimate_fidelity(bed.plan, bed.config).f;
        MonteCarloResult m = monte_carlo_fidelity(bed.plan, bed.config, 100000, rng());
        const double sigma = std::sqrt(analytic * (1 - analytic) / 100000.0);
        CHECK(std::abs(m.fidelity - analytic) <= 4.0 * sigma + 1e-9);
    }

    CHECK_THROWS_AS(monte_carlo_fidelity(zero.plan, zero.config, 0, 1), Error);
}

TEST_CASE("estimator ranking matches monte carlo ranking") {
    // Plan A: low-noise; plan B: markedly noisier (> 0.05 fidelity gap).
    Circuit c(3);
    c.add(GateKind::Cx, {0, 1});
    c.add(GateKind::Cx, {1, 2});
    TestBed a(3, 0.0, 0.02, 0.0);
    a.set_circuit(c, {0, 0, 0});
    TestBed b(3, 0.0, 0.08, 0.0);
    b.set_circuit(c, {0, 0, 0});

    const double fa = estimate_fidelity(a.plan, a.config).f;
    const double fb = estimate_fidelity(b.plan, b.config).f;
    REQUIRE(fa > fb + 0.05);
    MonteCarloResult ma = monte_carlo_fidelity(a.plan, a.config, 100000, 3);
    MonteCarloResult mb = monte_carlo_fidelity(b.plan, b.config, 100000, 4);
    CHECK(ma.fidelity > mb.fidelity);
}

TEST_CASE("monte carlo rejects oversized circuits") {
    SystemConfig config = testing::two_grid_workers(8, 0.95, 1, 2);
    Circuit big(12);
    big.add(GateKind::H, {0});
    Plan plan = testing::plan_for(big, config, 1);
    CHECK_THROWS_AS(monte_carlo_fidelity(plan, config, 10, 1), Error);
}
