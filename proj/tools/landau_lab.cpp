#include <iostream>

#include <CLI11.hpp>

#include "landau/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"landau-lab: gliding-profile experiments for linearized and nonlinear Vlasov-Poisson"};
    app.set_version_flag("--version", std::string(landau::version_string));
    app.require_subcommand(1);

    landau::RunOptions opt;
    std::string scenario, out;
    unsigned threads = 0;
    std::uint64_t seed = 0;
    std::string route;

    auto add_common = [&](CLI::App* c) {
        c->add_option("--scenario", scenario, "Scenario JSON (defaults when omitted)")->check(CLI::ExistingFile);
        c->add_option("--out", out, "Output directory (overrides the scenario)");
        c->add_option("--threads", threads, "Worker threads, 0 = all cores");
        c->add_option("--seed", seed, "RNG seed for sampled checks and probes");
        c->add_flag("--override-horizon", opt.override_horizon, "Allow times beyond T_max = xi_max/K");
    };

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"simulate", "Integrate the gliding system and record density, snapshots and diagnostics"},
        {"penrose", "Penrose margin scan of 1 + L over real tau and winding check"},
        {"green", "Tabulate the resolvent kernel G(s, k) and check its decay"},
        {"density", "Simulate, then solve the density equation by both routes"},
        {"diagnose", "Energy, Z-norm and Gevrey diagnostics of snapshots; decay fit of a series"},
        {"finalstate", "Forward solution to T and its dyadic increments"},
        {"wave", "Backward horizon construction of the wave operator"},
        {"scatter", "Scattering operator via reflection, wave operator and forward run"},
        {"verify", "Property suites: weights, dispersion, penrose, green, routes"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* c = app.add_subcommand(name, help);
        add_common(c);
        if (name == "density")
            c->add_option("--route", route, "volterra, green or both")->check(CLI::IsMember({"volterra", "green", "both"}));
        if (name == "diagnose") c->add_option("snapshots", opt.inputs, "Snapshot files or glob patterns");
        c->callback([&opt, name = name] { opt.subcommand = name; });
    }
    add_common(&app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : landau::exit_code::usage;
    }

    if (!scenario.empty()) opt.scenario_path = scenario;
    if (!out.empty()) opt.out_dir = out;
    auto given = [&](const char* flag) {
        std::size_t n = app.get_option(flag)->count();
        for (auto* c : app.get_subcommands()) n += c->get_option(flag)->count();
        return n > 0;
    };
    if (given("--threads")) opt.threads = threads;
    if (given("--seed")) opt.seed = seed;
    if (!route.empty()) opt.route = route;

    const landau::RunResult r = landau::run(opt);
    if (r.exit_code == 0) {
        std::cout << opt.subcommand << ": complete, outputs in " << r.out_dir << "\n";
    } else if (r.exit_code == landau::exit_code::verify_failed) {
        std::cerr << opt.subcommand << ": one or more suites failed, see " << r.out_dir << "/verify.json\n";
    } else {
        std::cerr << opt.subcommand << ": " << r.message << " (exit " << r.exit_code << ")\n";
    }
    return r.exit_code;
}
