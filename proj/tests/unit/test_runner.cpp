#include "catch_amalgamated.hpp"

#include <filesystem>
#include <fstream>

#include "landau/common.hpp"
#include "landau/io.hpp"
#include "landau/runner.hpp"
#include "landau/series.hpp"

using namespace landau;

namespace {

namespace fs = std::filesystem;

fs::path temp_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "landau_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string write_scenario(const fs::path& dir, const json& doc) {
    const auto p = dir / "scenario.json";
    std::ofstream(p) << doc.dump(2);
    return p.string();
}

const json kSmall = {{"grid", {{"K", 2}, {"xi_max", 8}, {"N_xi", 64}}}, {"solver", {{"dt", 0.05}, {"T", 1.0}}}};

RunResult run_in(const fs::path& dir, const std::string& sub, const json& doc) {
    RunOptions o;
    o.subcommand = sub;
    o.scenario_path = write_scenario(dir, doc);
    o.out_dir = (dir / "out").string();
    return run(o);
}

json read_json(const fs::path& p) { return json::parse(read_text_file(p.string())); }

}  // namespace

TEST_CASE("exit codes", "[runner]") {
    CHECK(exit_code_for(ErrorKind::domain) == 10);
    CHECK(exit_code_for(ErrorKind::horizon) == 14);
    CHECK(exit_code_for(ErrorKind::validation) == 17);
    CHECK(exit_code_for(ErrorKind::io) == 19);
    RunOptions o;
    o.subcommand = "nonsense";
    CHECK(run(o).exit_code == exit_code::usage);
}

TEST_CASE("verify on the defaults", "[runner]") {
    const auto dir = temp_dir("verify");
    RunOptions o;
    o.subcommand = "verify";
    o.out_dir = (dir / "out").string();
    const auto r = run(o);
    CHECK(r.exit_code == exit_code::ok);
    CHECK(r.status == "complete");
    const auto v = read_json(dir / "out" / "verify.json");
    CHECK(v["passed"] == true);
    CHECK(v["suites"].size() == 5);
    for (const auto& s : v["suites"]) CHECK(s["passed"] == true);
    const auto m = read_json(dir / "out" / "manifest.json");
    CHECK(m["status"] == "complete");
    CHECK(m["scenario_source"] == "<defaults>");
}

TEST_CASE("simulate with zero data", "[runner]") {
    const auto dir = temp_dir("zero");
    json doc = kSmall;
    doc["initial"] = {{"family", "zero"}};
    doc["diagnostics"] = {{"every", 10}};
    const auto r = run_in(dir, "simulate", doc);
    REQUIRE(r.exit_code == exit_code::ok);
    const auto series = DensitySeries::from_csv(read_text_file((dir / "out" / "density.csv").string()));
    CHECK(series.n_t == 21);
    for (const auto& v : series.rho) CHECK(v == cplx(0.0));
    CHECK(fs::exists(dir / "out" / "snapshots" / "state_000010.bin"));
    const auto m = read_json(dir / "out" / "manifest.json");
    CHECK(m["inputs"].size() == 1);
    for (const auto& a : m["artifacts"]) CHECK(fs::exists(dir / "out" / a.get<std::string>()));
}

TEST_CASE("penrose on the vacuum", "[runner]") {
    const auto dir = temp_dir("penrose");
    json doc = kSmall;
    doc["equilibrium"] = {{"kind", "vacuum"}};
    doc["penrose"] = {{"samples", 101}};
    REQUIRE(run_in(dir, "penrose", doc).exit_code == exit_code::ok);
    CHECK(read_json(dir / "out" / "penrose.json")["margin"] == 1.0);
}

TEST_CASE("failures map to exit codes and a failed manifest", "[runner]") {
    const auto dir = temp_dir("fail");
    const auto bad = run_in(dir, "simulate", {{"solver", {{"dt", -1.0}}}});
    CHECK(bad.exit_code == exit_code_for(ErrorKind::validation));
    CHECK(bad.status == "failed");
    CHECK(bad.message == "`solver.dt` must be > 0");

    RunOptions missing;
    missing.subcommand = "simulate";
    missing.scenario_path = (dir / "absent.json").string();
    missing.out_dir = (dir / "out2").string();
    CHECK(run(missing).exit_code == exit_code_for(ErrorKind::io));

    json past = kSmall;
    past["scattering"] = {{"horizons", {1.0, 2.0, 8.0}}};
    const auto h = run_in(dir, "wave", past);
    CHECK(h.exit_code == exit_code_for(ErrorKind::validation));
}

TEST_CASE("runs are deterministic across thread counts", "[runner]") {
    const auto dir = temp_dir("determinism");
    json doc = kSmall;
    doc["initial"] = {{"family", "cosine-mode"}, {"epsilon", 0.05}};
    std::string first;
    for (unsigned threads : {1u, 4u}) {
        RunOptions o;
        o.subcommand = "simulate";
        o.scenario_path = write_scenario(dir, doc);
        o.out_dir = (dir / ("out" + std::to_string(threads))).string();
        o.threads = threads;
        REQUIRE(run(o).exit_code == exit_code::ok);
        const auto text = read_text_file((fs::path(*o.out_dir) / "density.csv").string());
        if (first.empty())
            first = text;
        else
            CHECK(text == first);
    }
    const auto a = read_json(dir / "out1" / "manifest.json"), b = read_json(dir / "out4" / "manifest.json");
    CHECK(a["scenario_hash"] == b["scenario_hash"]);
}
