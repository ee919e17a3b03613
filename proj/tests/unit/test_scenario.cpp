#include "catch_amalgamated.hpp"

#include <filesystem>
#include <fstream>

#include "landau/common.hpp"
#include "landau/scenario.hpp"

using namespace landau;
using Catch::Matchers::ContainsSubstring;

namespace {

namespace fs = std::filesystem;

fs::path temp_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "landau_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

std::string validation_message(const json& doc) {
    try {
        scenario_from_json(doc);
    } catch (const ValidationError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("documented defaults", "[scenario]") {
    const auto sc = default_scenario();
    CHECK(sc.source == "<defaults>");
    CHECK(sc.equilibrium_config.kind == "maxwellian");
    CHECK(sc.grid == FourierGrid{1, 16, 32.0, 256});
    CHECK(sc.t_max() == 2.0);
    CHECK(sc.end_time() == 2.0);
    CHECK(sc.solver.dt == 1e-3);
    CHECK(sc.initial.family == "cosine-mode");
    CHECK(sc.green.k.size() == 16);
    CHECK(sc.density.k == std::vector<std::vector<int>>{{-2}, {-1}, {1}, {2}});
    CHECK(sc.scattering.horizons == std::vector<double>{0.5, 1.0, 2.0});
    CHECK(sc.document["solver"]["T"] == 2.0);
    const auto s0 = build_initial_state(sc);
    CHECK(s0.grid == sc.grid);
    CHECK(neutrality_defect(s0) == 0.0);
}

TEST_CASE("value errors name the key", "[scenario]") {
    CHECK(validation_message({{"solver", {{"dt", 0.0}}}}) == "`solver.dt` must be > 0");
    CHECK(validation_message({{"solver", {{"dt", "fast"}}}}) == "`solver.dt` must be a number");
    CHECK(validation_message({{"grid", {{"K", 2.5}}}}) == "`grid.K` must be an integer");
    CHECK(validation_message({{"initial", {{"epsilon", -1.0}}}}) == "`initial.epsilon` must be > 0");
    CHECK(validation_message({{"weights", {{"lambda1_fraction", 0.95}}}}) ==
          "`weights.lambda1_fraction` must lie in [0.5, 0.9]");
    CHECK(validation_message({{"equilibrium", {{"dim", 4}}}}) == "`equilibrium.dim` must be 1, 2 or 3");
    CHECK(validation_message({{"solver", 3}}) == "`solver` must be an object");
    CHECK_THAT(validation_message({{"solver", {{"T", 5.0}}}}),
               ContainsSubstring("exceeds the horizon T_max = xi_max/K"));
}

TEST_CASE("horizon override", "[scenario]") {
    const json doc = {{"solver", {{"T", 5.0}}}};
    ScenarioOverrides ov;
    ov.override_horizon = true;
    const auto sc = scenario_from_json(doc, ".", ov);
    CHECK(sc.end_time() == 5.0);
    CHECK(sc.solver.override_horizon);
    const auto in_doc = scenario_from_json({{"solver", {{"T", 5.0}, {"override_horizon", true}}}});
    CHECK(in_doc.end_time() == 5.0);
}

TEST_CASE("unknown keys are reported together", "[scenario]") {
    const json doc = {{"extra", 1}, {"solver", {{"bogus", 1}, {"dt", -1.0}}}};
    CHECK(validation_message(doc) == "unknown scenario keys: extra, solver.bogus");
}

TEST_CASE("includes merge under the including document", "[scenario][io]") {
    const auto dir = temp_dir("includes");
    write(dir / "base.json", R"({"grid": {"K": 4, "xi_max": 16, "N_xi": 128}, "solver": {"dt": 0.01}})");
    write(dir / "main.json", R"({"include": "base.json", "solver": {"dt": 0.02}})");
    const auto sc = load_scenario((dir / "main.json").string());
    CHECK(sc.grid.K == 4);
    CHECK(sc.solver.dt == 0.02);
    REQUIRE(sc.inputs.size() == 2);
    CHECK(fs::equivalent(sc.inputs[0], dir / "main.json"));
    CHECK(fs::equivalent(sc.inputs[1], dir / "base.json"));

    write(dir / "a.json", R"({"include": "b.json"})");
    write(dir / "b.json", R"({"include": "a.json"})");
    CHECK_THROWS_WITH(load_scenario((dir / "a.json").string()), ContainsSubstring("cycle"));
    write(dir / "c.json", R"({"include": "missing.json"})");
    CHECK_THROWS_AS(load_scenario((dir / "c.json").string()), ValidationError);
    write(dir / "broken.json", "{ not json");
    CHECK_THROWS_AS(load_scenario((dir / "broken.json").string()), ValidationError);
    CHECK_THROWS_AS(load_scenario((dir / "absent.json").string()), IoError);
}

TEST_CASE("referenced files must exist", "[scenario][io]") {
    const auto dir = temp_dir("refs");
    const json snap = {{"initial", {{"family", "from-snapshot"}, {"path", "nope.bin"}}}};
    CHECK_THROWS_AS(scenario_from_json(snap, dir.string()), ValidationError);
    const json tab = {{"equilibrium", {{"kind", "tabulated"}, {"files", {"axis.csv"}}}}};
    CHECK_THROWS_AS(scenario_from_json(tab, dir.string()), ValidationError);

    const FourierGrid g{1, 2, 8.0, 32};
    save_glide_state((dir / "s.bin").string(), cosine_mode_glide(g, 0.1, {1}));
    const json ok = {{"grid", {{"K", 2}, {"xi_max", 8}, {"N_xi", 32}}},
                     {"initial", {{"family", "from-snapshot"}, {"path", "s.bin"}}}};
    const auto sc = scenario_from_json(ok, dir.string());
    CHECK(build_initial_state(sc).ghat == cosine_mode_glide(g, 0.1, {1}).ghat);
}

TEST_CASE("initial data families", "[scenario]") {
    const json base = {{"grid", {{"K", 2}, {"xi_max", 8}, {"N_xi", 32}}}};
    auto with = [&](json initial) {
        json d = base;
        d["initial"] = std::move(initial);
        return scenario_from_json(d);
    };
    for (const auto& v : build_initial_state(with({{"family", "zero"}})).ghat) CHECK(v == cplx(0.0));
    const auto imp = build_initial_state(with({{"family", "impulse"}, {"k0", {1}}, {"value", {0.5, 0.0}}}));
    const auto g = imp.grid;
    CHECK(imp.at(g.mode_index(std::vector<int>{1}), g.zero_node()) == cplx(0.5));
    CHECK(imp.at(g.mode_index(std::vector<int>{-1}), g.zero_node()) == cplx(0.5));
    CHECK_THROWS_AS(with({{"family", "cosine-mode"}, {"k0", {0}}}), ValidationError);
    CHECK_THROWS_AS(with({{"family", "cosine-mode"}, {"k0", {3}}}), ValidationError);
    CHECK_THROWS_AS(with({{"family", "mystery"}}), ValidationError);
}

TEST_CASE("overrides", "[scenario]") {
    ScenarioOverrides ov;
    ov.seed = 42;
    ov.threads = 3;
    ov.output = "elsewhere";
    const auto sc = default_scenario(ov);
    CHECK(sc.seed == 42);
    CHECK(sc.threads == 3);
    CHECK(sc.output == "elsewhere");
}
