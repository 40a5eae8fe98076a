#include "dismap/pipeline.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace dismap;
using nlohmann::json;

namespace {

const std::string kBin = DISMAP_BIN;
const std::string kConfigDir = DISMAP_CONFIG_DIR;

int run_cli(const std::string& args) {
    const std::string cmd = kBin + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

json load_json(const std::filesystem::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    return json::parse(in);
}

json strip_timing(json j) {
    j.erase("timing");
    return j;
}

}  // namespace

TEST_CASE("exit codes for the error paths") {
    CHECK(run_cli("--config /nonexistent.json --bench bv --qubits 6") == kExitConfigError);

    // Unparsable circuit file.
    const auto bad_qasm = std::filesystem::temp_directory_path() / "dismap_bad.qasm";
    std::ofstream(bad_qasm) << "OPENQASM 2.0; qreg q[2]; frobnicate q[0];";
    CHECK(run_cli("--config " + kConfigDir + "/two_workers_8.json --circuit " +
                  bad_qasm.string()) == kExitParseError);

    // Infeasible: circuit larger than the system.
    CHECK(run_cli("--config " + kConfigDir + "/two_workers_8.json --bench bv --qubits 40") ==
          kExitInfeasible);

    // Success path exits 0.
    CHECK(run_cli("--config " + kConfigDir + "/two_workers_8.json --bench bv --qubits 8 "
                  "--seed 3 --verify") == kExitOk);
}

TEST_CASE("report JSON reconciles with its totals") {
    RunOptions options;
    options.config_path = kConfigDir + "/two_workers_8.json";
    options.bench = "qaoa";
    options.qubits = 10;
    options.seed = 5;
    options.verify = true;
    RunOutcome outcome = run_pipeline(options);
    REQUIRE(outcome.exit_code == kExitOk);
    REQUIRE(outcome.report.has_value());

    json j = json::parse(outcome.report_json);
    CHECK(j["schema"] == 1);
    int worker_swaps = 0, worker_epr = 0;
    for (const auto& w : j["per_worker"]) {
        worker_swaps += w["swaps"].get<int>();
        worker_epr += w["epr_uses"].get<int>();
    }
    CHECK(worker_swaps == j["totals"]["swap_overhead"].get<int>());
    CHECK(worker_epr == j["totals"]["epr_uses"].get<int>());
    const auto& f = j["totals"]["fidelity_factors"];
    CHECK(j["totals"]["fidelity"].get<double>() ==
          doctest::Approx(f["single_qubit"].get<double>() * f["two_qubit"].get<double>() *
                          f["readout"].get<double>() * f["epr"].get<double>())
              .epsilon(1e-12));
    CHECK(j["violations"].empty());
    CHECK(j["equivalence_verified"] == true);
}

TEST_CASE("reports are byte-identical modulo timing") {
    const auto dir = std::filesystem::temp_directory_path() / "dismap_cli_det";
    std::filesystem::create_directories(dir);
    const std::string base = "--config " + kConfigDir + "/two_workers_8.json --bench hwea "
                             "--qubits 10 --seed 11 --report ";
    REQUIRE(run_cli(base + (dir / "a.json").string() + " --threads 1") == kExitOk);
    REQUIRE(run_cli(base + (dir / "b.json").string() + " --threads 8") == kExitOk);
    const json a = strip_timing(load_json(dir / "a.json"));
    const json b = strip_timing(load_json(dir / "b.json"));
    CHECK(a.dump() == b.dump());
}

TEST_CASE("baseline produces a comparable report through the same router") {
    RunOptions options;
    options.config_path = kConfigDir + "/two_workers_8.json";
    options.bench = "hwea";
    options.qubits = 12;
    options.seed = 2;
    options.baseline = true;
    RunOutcome outcome = run_pipeline(options);
    REQUIRE(outcome.exit_code == kExitOk);
    CHECK(outcome.report->label == "baseline");
    json j = json::parse(outcome.report_json);
    CHECK(j["label"] == "baseline");
    CHECK(j["evaluations"].size() == 1);
}

TEST_CASE("emitted artifacts: partition dump, worker QASM, manifest") {
    const auto dir = std::filesystem::temp_directory_path() / "dismap_cli_emit";
    std::filesystem::remove_all(dir);
    RunOptions options;
    options.config_path = kConfigDir + "/two_workers_8.json";
    options.bench = "bv";
    options.qubits = 12;  // forces a split across both workers
    options.seed = 1;
    options.emit_partition_path = (dir / "partition.json").string();
    options.emit_qasm_dir = (dir / "qasm").string();
    RunOutcome outcome = run_pipeline(options);
    REQUIRE(outcome.exit_code == kExitOk);

    json part = load_json(dir / "partition.json");
    CHECK(part["assignment"].size() == 12);
    CHECK(part.contains("cost"));

    json manifest = load_json(dir / "qasm" / "manifest.json");
    CHECK(manifest["initial_layout"].size() == 12);
    CHECK(manifest["total_so"].get<int>() >= 0);
    int listed = 0;
    for (const auto& w : manifest["workers"]) {
        const auto file = dir / "qasm" / ("worker" + std::to_string(w["worker"].get<int>()) +
                                          ".qasm");
        CHECK(std::filesystem::exists(file));
        ++listed;
    }
    CHECK(listed >= 2);
}

TEST_CASE("DISMAP_SEED env is the seed fallback") {
    const auto dir = std::filesystem::temp_directory_path() / "dismap_cli_env";
    std::filesystem::create_directories(dir);
    const std::string common = "--config " + kConfigDir + "/two_workers_8.json --bench qaoa "
                               "--qubits 8 --report ";
    setenv("DISMAP_SEED", "21", 1);
    REQUIRE(run_cli(common + (dir / "env.json").string()) == kExitOk);
    unsetenv("DISMAP_SEED");
    REQUIRE(run_cli(common + (dir / "flag.json").string() + " --seed 21") == kExitOk);
    CHECK(strip_timing(load_json(dir / "env.json")).dump() ==
          strip_timing(load_json(dir / "flag.json")).dump());
}
