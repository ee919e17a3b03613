#include "landau/runner.hpp"

#include <glob.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include "landau/density.hpp"
#include "landau/diagnostics.hpp"
#include "landau/green.hpp"
#include "landau/penrose.hpp"
#include "landau/scattering.hpp"
#include "landau/scenario.hpp"

namespace landau {

namespace fs = std::filesystem;

int exit_code_for(ErrorKind kind) { return 10 + static_cast<int>(kind); }

const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> names = {"simulate", "penrose", "green", "density", "diagnose",
                                                   "finalstate", "wave", "scatter", "verify"};
    return names;
}

namespace {

std::string hex64(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json cjson(cplx z) { return json::array({z.real(), z.imag()}); }

// Owns the output directory of one run and the manifest describing it.
class Output {
public:
    Output(fs::path dir, json manifest) : dir_(std::move(dir)), manifest_(std::move(manifest)) {
        fs::create_directories(dir_);
        manifest_["status"] = "partial";
        manifest_["artifacts"] = json::array();
        flush();
    }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    void text(const std::string& name, const std::string& body) {
        ensure_parent(name);
        write_text_file(path(name), body);
        add(name);
    }
    void document(const std::string& name, const json& j) { text(name, j.dump(2) + "\n"); }
    void state(const std::string& name, const GlideState& s, const json& extra = json::object()) {
        ensure_parent(name);
        save_glide_state(path(name), s, extra);
        add(name);
    }

    void record(const std::string& name) { add(name); }

    json& manifest() { return manifest_; }
    void flush() const { write_text_file((dir_ / "manifest.json").string(), manifest_.dump(2) + "\n"); }

private:
    void ensure_parent(const std::string& name) const {
        const fs::path p = dir_ / name;
        if (p.has_parent_path()) fs::create_directories(p.parent_path());
    }
    void add(const std::string& name) {
        manifest_["artifacts"].push_back(name);
        flush();
    }

    fs::path dir_;
    json manifest_;
};

GlideOptions glide_options(const Scenario& sc) {
    GlideOptions go;
    go.nonlinear = sc.solver.nonlinear;
    go.direction = sc.solver.direction;
    go.density_interp = sc.solver.density_interp;
    go.shift_interp = sc.solver.shift_interp;
    go.boundary_threshold = sc.solver.boundary_threshold;
    return go;
}

OperatorOptions operator_options(const Scenario& sc) {
    OperatorOptions op;
    op.glide = glide_options(sc);
    op.norm_lambda = sc.diagnostics.gevrey_lambda;
    op.allow_past_horizon = sc.solver.override_horizon;
    return op;
}

FunctionalOptions functional_options(const Scenario& sc) {
    FunctionalOptions fo;
    fo.p_values = sc.diagnostics.p_values;
    fo.beta = sc.diagnostics.beta;
    fo.exponent = sc.diagnostics.exponent;
    fo.density_interp = sc.solver.density_interp;
    return fo;
}

void check_horizon(const Scenario& sc, double T) {
    if (T > sc.t_max() * (1.0 + 1e-12) && !sc.solver.override_horizon)
        throw HorizonError("time " + format_double(T) + " exceeds the horizon T_max = xi_max/K = " +
                           format_double(sc.t_max()) + "; pass --override-horizon to continue with stale modes");
}

json glide_run_summary(const GlideRun& run, const Scenario& sc) {
    std::size_t stale = 0;
    for (auto s : run.series.stale) stale += s;
    json j;
    j["t_final"] = run.state.t;
    j["T_max"] = sc.t_max();
    j["past_horizon"] = std::abs(run.state.t) > sc.t_max() * (1.0 + 1e-12);
    j["steps"] = run.steps;
    j["invalidated"] = run.invalidated;
    j["invalidated_at"] = run.invalidated ? json(run.invalidated_at) : json(nullptr);
    j["max_boundary"] = run.max_boundary;
    j["max_reality_defect"] = run.max_reality_defect;
    j["max_neutrality_defect"] = run.max_neutrality_defect;
    j["stale_entries"] = stale;
    j["l2_norm"] = l2_norm(run.state);
    j["gevrey_norm"] = gevrey_norm(run.state, sc.diagnostics.gevrey_lambda, 1.0 / 3.0, 0);
    return j;
}

GlideRun simulate_glide(const Scenario& sc, std::size_t history_every) {
    const auto eq = sc.make_equilibrium();
    GlideState s0 = build_initial_state(sc);
    const double T = sc.end_time();
    check_horizon(sc, T);
    GlideOptions go = glide_options(sc);
    go.history_every = history_every;
    double t_end = T;
    if (sc.solver.direction == TimeDirection::forward) {
        s0.t = 0.0;
    } else {
        s0.t = T;
        t_end = 0.0;
    }
    return glide_integrate(std::move(s0), eq, t_end, sc.solver.dt, go);
}

std::string state_name(const std::string& dir, std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "state_%06zu.bin", index);
    return dir + "/" + buf;
}

json run_simulate(const Scenario& sc, Output& out) {
    const std::size_t every = sc.diagnostics.every;
    GlideRun run = simulate_glide(sc, every);
    out.text("density.csv", run.series.to_csv());
    out.state("final.bin", run.state, {{"kind_detail", "final"}});

    std::vector<FunctionalSample> samples;
    const WeightParams& wp = sc.weights;
    const auto fo = functional_options(sc);
    if (every > 0) {
        for (std::size_t i = 0; i < run.history.size(); ++i) {
            out.state(state_name("snapshots", i * every), run.history[i]);
            samples.push_back(functional_sample(run.history[i], wp, fo));
        }
        if (run.history.empty() || run.history.back().t != run.state.t) samples.push_back(functional_sample(run.state, wp, fo));
    } else {
        samples.push_back(functional_sample(build_initial_state(sc), wp, fo));
        samples.front().t = sc.solver.direction == TimeDirection::forward ? 0.0 : sc.end_time();
        samples.push_back(functional_sample(run.state, wp, fo));
    }
    out.text("diagnostics.csv", functional_csv(samples));

    json summary = glide_run_summary(run, sc);
    if (sc.solver.oracle) {
        if (sc.initial.family != "cosine-mode") throw UnsupportedError("the split-step oracle needs cosine-mode data");
        if (sc.solver.direction != TimeDirection::forward) throw UnsupportedError("the split-step oracle runs forward only");
        if (!sc.solver.nonlinear) throw UnsupportedError("the split-step oracle solves the full nonlinear system");
        if (!(sc.phase.fourier_grid(sc.grid.K) == sc.grid))
            throw ArgumentError("phase grid dual (xi_max = pi/dv, N_xi = N_v) must match the glide grid");
        const auto eq = sc.make_equilibrium();
        SplitStepOptions so;
        so.boundary_threshold = sc.solver.oracle_boundary_threshold;
        SplitStepper stepper(sc.phase, eq, so);
        PhaseState ps = cosine_mode_phase(sc.phase, sc.initial.epsilon, sc.initial.k0, sc.initial.sigma);
        const auto m0 = equilibrium_in_velocity(sc.phase, eq);
        const double mass0 = phase_mass(ps), l20 = phase_total_l2(ps, m0);
        stepper.run(ps, sc.end_time(), sc.solver.dt);
        const GlideState prof = profile_from_phase(ps, sc.grid.K);
        json o;
        o["t"] = ps.t;
        o["relative_l2"] = relative_l2(run.state, prof);
        o["mass_drift"] = std::abs(phase_mass(ps) - mass0);
        o["l2_relative_drift"] = std::abs(phase_total_l2(ps, m0) - l20) / l20;
        o["boundary_ratio"] = phase_boundary_ratio(ps, *std::max_element(m0.begin(), m0.end()));
        out.document("oracle.json", o);
        out.state("oracle_profile.bin", prof, {{"kind_detail", "split-step profile"}});
        summary["oracle"] = o;
    }
    out.document("run.json", summary);
    return summary;
}

json run_penrose(const Scenario& sc, Output& out) {
    const auto eq = sc.make_equilibrium();
    TauGrid tg;
    tg.samples = sc.penrose.samples;
    const int kmax = sc.penrose.k_max.value_or(sc.grid.K);
    const PenroseReport rep = penrose_margin(eq, kmax, tg);
    json j;
    j["equilibrium"] = to_string(eq.kind());
    j["k_max"] = kmax;
    j["margin"] = rep.margin;
    j["argmin_k"] = rep.argmin_k;
    j["argmin_tau"] = cjson(rep.argmin_tau);
    j["zero_suspected"] = rep.zero_suspected;
    j["stable"] = rep.margin > 0.0 && !rep.zero_suspected;
    j["modes"] = json::array();
    for (const auto& m : rep.modes)
        j["modes"].push_back({{"k", m.k},
                              {"tau_cutoff", m.tau_cutoff},
                              {"min_modulus", m.min_modulus},
                              {"argmin_tau", m.argmin_tau},
                              {"winding", m.winding}});
    std::string csv = "k,tau,modulus\n";
    for (const auto& s : rep.samples) {
        std::string k;
        for (std::size_t a = 0; a < s.k.size(); ++a) k += (a ? ";" : "") + std::to_string(s.k[a]);
        csv += k + "," + format_double(s.tau) + "," + format_double(s.modulus) + "\n";
    }
    out.document("penrose.json", j);
    out.text("penrose_samples.csv", csv);
    return {{"margin", rep.margin}, {"zero_suspected", rep.zero_suspected}};
}

json green_table_header(const GreenTable& t) {
    json meta = json::array();
    for (const auto& m : t.meta)
        meta.push_back({{"k", m.k},
                        {"t_cut", m.t_cut},
                        {"d_tau", m.d_tau},
                        {"tau_samples", m.tau_samples},
                        {"tail_bound", m.tail_bound},
                        {"min_one_plus_L", m.min_one_plus_L},
                        {"accuracy_warning", m.accuracy_warning}});
    return {{"kind", "green_table"}, {"k_list", t.k_list}, {"ds", t.ds}, {"n_s", t.n_s},
            {"tail_tol", t.tail_tol}, {"meta", meta}, {"version", version_string}};
}

json run_green(const Scenario& sc, Output& out) {
    const auto eq = sc.make_equilibrium();
    GreenOptions go;
    go.tail_tol = sc.green.tail_tol;
    const GreenTable t = build_green_table(eq, sc.green.k, sc.green.s_max, sc.green.ds, go);
    const GreenDecayReport rep = verify_green_decay(t, eq.lambda0());
    write_array_file(out.path("green.bin"), green_table_header(t), t.values);
    out.record("green.bin");
    std::string csv = "s,k,abs,bound\n";
    for (std::size_t ki = 0; ki < t.k_list.size(); ++ki) {
        std::string k;
        for (std::size_t a = 0; a < t.k_list[ki].size(); ++a) k += (a ? ";" : "") + std::to_string(t.k_list[ki][a]);
        const double knorm = norm2(std::span<const int>(t.k_list[ki]));
        for (std::size_t si = 0; si < t.n_s; ++si) {
            const double s = t.ds * double(si);
            const double bound = rep.c_fit * std::exp(-0.95 * eq.lambda0() * std::cbrt(s * knorm));
            csv += format_double(s) + "," + k + "," + format_double(std::abs(t.at(ki, si))) + "," + format_double(bound) + "\n";
        }
    }
    out.text("green.csv", csv);
    json j = green_table_header(t);
    j["decay"] = {{"lambda0", eq.lambda0()}, {"c_fit", rep.c_fit}, {"worst_slope", rep.worst_slope}, {"passes", rep.passes}};
    out.document("green.json", j);
    return j["decay"];
}

DensitySeries sample_rows(const DensitySeries& s, std::size_t every, std::size_t count,
                          const std::vector<std::vector<int>>& k_list) {
    DensitySeries r(s.t0, s.dt * double(every), count, k_list);
    for (std::size_t ki = 0; ki < k_list.size(); ++ki) {
        const int src = s.find(k_list[ki]);
        if (src < 0) throw ArgumentError("density series lacks a requested mode");
        for (std::size_t i = 0; i < count; ++i) r.at(i, ki) = s.at(i * every, std::size_t(src));
    }
    return r;
}

json run_density(const Scenario& sc, const std::string& route, Output& out) {
    if (sc.solver.direction != TimeDirection::forward) throw UnsupportedError("the density pipeline runs forward in time");
    const auto eq = sc.make_equilibrium();
    const std::size_t every = sc.density.store_every;
    GlideRun run = simulate_glide(sc, every);
    if (run.history.size() < 2) throw ArgumentError("run too short for the density history: raise solver.T or lower density.store_every");
    const auto& k_list = sc.density.k;
    const double step = run.history[1].t - run.history[0].t;
    const UniformGrid tg{run.history.front().t, step, run.history.size()};
    GlideHistory hist(run.history, sc.solver.density_interp);
    const DensitySeries n_hat = nonlinearity_forward(hist, tg, k_list, sc.solver.nonlinear);
    const DensitySeries sim = sample_rows(run.series, every, tg.count, k_list);
    out.text("density_sim.csv", sim.to_csv());
    out.text("density_nhat.csv", n_hat.to_csv());

    json j;
    j["route"] = route;
    j["dt_store"] = step;
    j["samples"] = tg.count;
    j["glide"] = glide_run_summary(run, sc);
    DensitySeries vol, rep;
    if (route == "volterra" || route == "both") {
        vol = volterra_solve(VolterraKernel(eq), n_hat, VolterraDirection::forward);
        out.text("density_volterra.csv", vol.to_csv());
        j["volterra_residual"] = max_abs_difference(vol, sim);
    }
    if (route == "green" || route == "both") {
        GreenOptions go;
        go.tail_tol = sc.green.tail_tol;
        std::vector<std::vector<int>> ks = k_list;
        if (!eq.radial())
            for (const auto& k : k_list) {
                std::vector<int> m(k);
                for (int& c : m) c = -c;
                if (std::find(ks.begin(), ks.end(), m) == ks.end()) ks.push_back(m);
            }
        const GreenTable table = build_green_table(eq, ks, tg.last() - tg.start, step, go);
        rep = representation(n_hat, table, VolterraDirection::forward);
        out.text("density_green.csv", rep.to_csv());
        j["green_residual"] = max_abs_difference(rep, sim);
    }
    if (route == "both") j["route_gap"] = max_abs_difference(vol, rep);
    out.document("density.json", j);
    return j;
}

std::vector<std::string> expand_inputs(const std::vector<std::string>& patterns) {
    std::vector<std::string> files;
    for (const auto& p : patterns) {
        glob_t g{};
        const int rc = ::glob(p.c_str(), 0, nullptr, &g);
        if (rc == 0) {
            for (std::size_t i = 0; i < g.gl_pathc; ++i) files.emplace_back(g.gl_pathv[i]);
        } else if (rc != GLOB_NOMATCH) {
            globfree(&g);
            throw IoError("cannot expand snapshot pattern " + p);
        }
        globfree(&g);
        if (rc == GLOB_NOMATCH && p.find_first_of("*?[") == std::string::npos) throw IoError("snapshot not found: " + p);
    }
    std::sort(files.begin(), files.end());
    files.erase(std::unique(files.begin(), files.end()), files.end());
    return files;
}

json run_diagnose(const Scenario& sc, const std::vector<std::string>& inputs, Output& out, json& manifest_inputs) {
    std::vector<std::string> patterns = inputs;
    patterns.insert(patterns.end(), sc.diagnostics.snapshots.begin(), sc.diagnostics.snapshots.end());
    const auto files = expand_inputs(patterns);
    if (files.empty() && sc.diagnostics.series.empty())
        throw ArgumentError("diagnose needs snapshot paths/globs or diagnostics.series");

    std::vector<std::pair<GlideState, std::string>> states;
    for (const auto& f : files) {
        states.emplace_back(load_glide_state(f), f);
        manifest_inputs.push_back({{"path", f}, {"fnv1a64", hex64(fnv1a64(read_text_file(f)))}});
    }
    std::stable_sort(states.begin(), states.end(), [](const auto& a, const auto& b) { return a.first.t < b.first.t; });

    json j;
    j["snapshots"] = json::array();
    std::vector<FunctionalSample> samples;
    const auto fo = functional_options(sc);
    for (const auto& [s, path] : states) {
        samples.push_back(functional_sample(s, sc.weights, fo));
        const ZNorm z = znorm(s, 0.0, sc.diagnostics.beta, sc.weights, sc.solver.density_interp);
        const PointwiseReport pw = pointwise_sup_check(s, 0.0, sc.weights);
        j["snapshots"].push_back({{"path", path},
                                  {"t", s.t},
                                  {"gevrey_norm", gevrey_norm(s, sc.diagnostics.gevrey_lambda, 1.0 / 3.0,
                                                              derivative_order(s.grid.d))},
                                  {"znorm0", z.value},
                                  {"znorm0_boundary", z.boundary_value},
                                  {"stale_modes", z.stale_modes},
                                  {"pointwise_ratio", pw.worst_ratio},
                                  {"pointwise_worst_k", pw.worst_k},
                                  {"reality_defect", reality_defect(s)},
                                  {"neutrality_defect", neutrality_defect(s)}});
    }
    if (!samples.empty()) out.text("diagnostics.csv", functional_csv(samples));
    if (!sc.diagnostics.series.empty()) {
        const auto series = DensitySeries::from_csv(read_text_file(sc.diagnostics.series));
        const DecayFit fit = decay_fit(series, sc.weights.lambda0, sc.diagnostics.fit_t_lo, sc.diagnostics.fit_t_hi);
        j["decay_fit"] = {{"c_fit", fit.c_fit},     {"envelope", fit.envelope}, {"threshold", fit.threshold},
                          {"t_lo", fit.t_lo},       {"t_hi", fit.t_hi},         {"points", fit.points},
                          {"passes", fit.passes},   {"lambda0", sc.weights.lambda0}};
        out.document("decay_fit.json", j["decay_fit"]);
    }
    out.document("diagnose.json", j);
    return {{"snapshots", states.size()}, {"decay_fit", j.value("decay_fit", json(nullptr))}};
}

// Smooth random state of the given surrogate size at low modes, for probes.
GlideState seeded_perturbation(const FourierGrid& g, std::uint64_t seed, double size, const OperatorOptions& opt) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    GlideState p(g, 0.0);
    for (std::size_t m = 0; m < g.num_modes(); ++m) {
        const auto k = g.mode(m);
        const bool zero = std::all_of(k.begin(), k.end(), [](int x) { return x == 0; });
        const bool low = std::all_of(k.begin(), k.end(), [](int x) { return std::abs(x) <= 2; });
        const cplx c(normal(rng), normal(rng));
        if (zero || !low) continue;
        for (std::size_t j = 0; j < g.row_size(); ++j) {
            double r2 = 0.0;
            for (int n : g.node(j)) r2 += g.xi(n) * g.xi(n);
            p.at(m, j) = c * std::exp(-0.5 * r2);
        }
    }
    symmetrize(p);
    p.at(g.zero_mode(), g.zero_node()) = 0.0;
    const double n = surrogate_norm(p, opt);
    if (n > 0.0)
        for (auto& v : p.ghat) v *= size / n;
    return p;
}

json probe(const Scenario& sc, const StateMap& op, const GlideState& a, const OperatorOptions& opt, Output& out) {
    GlideState b = a;
    const GlideState p = seeded_perturbation(a.grid, sc.seed, sc.scattering.probe_distance, opt);
    for (std::size_t i = 0; i < b.ghat.size(); ++i) b.ghat[i] += p.ghat[i];
    const LipschitzReport r = lipschitz_probe(op, a, b, sc.scattering.lambda_in, sc.scattering.lambda_out, opt);
    json j = {{"seed", sc.seed},
              {"probe_distance", sc.scattering.probe_distance},
              {"lambda_in", sc.scattering.lambda_in},
              {"lambda_out", sc.scattering.lambda_out},
              {"input_gap", r.input_gap},
              {"output_gap", r.output_gap},
              {"upper_ratio", r.upper_ratio},
              {"lower_ratio", r.lower_ratio},
              {"degenerate", r.degenerate}};
    out.document("probe.json", j);
    return j;
}

json operator_run_json(const OperatorRun& r, const OperatorOptions& opt) {
    const double norm = surrogate_norm(r.input, opt);
    const double last = r.cauchy_gaps.empty() ? 0.0 : r.cauchy_gaps.back();
    return {{"horizons", r.horizons},
            {"cauchy_gaps", r.cauchy_gaps},
            {"input_norm", norm},
            {"output_norm", surrogate_norm(r.output, opt)},
            {"converged", !r.cauchy_gaps.empty() && last <= 1e-3 * norm},
            {"invalidated", r.invalidated}};
}

json run_finalstate(const Scenario& sc, Output& out) {
    const auto eq = sc.make_equilibrium();
    const auto opt = operator_options(sc);
    const GlideState f0 = build_initial_state(sc);
    const double T = sc.end_time();
    check_horizon(sc, T);
    const FinalStateResult r = final_state_forward(f0, eq, T, sc.solver.dt, opt);
    out.state("g_inf.bin", r.g_inf, {{"kind_detail", "final state"}});
    json j = {{"T", T},
              {"ladder", r.ladder},
              {"increments", r.increments},
              {"fitted_exponent", r.fitted_exponent},
              {"invalidated", r.invalidated},
              {"max_boundary", r.max_boundary},
              {"g_inf_norm", surrogate_norm(r.g_inf, opt)}};
    if (sc.scattering.probe_distance > 0.0)
        j["probe"] = probe(sc, make_operator(OperatorKind::final_state, eq, {T}, sc.solver.dt, opt), f0, opt, out);
    out.document("finalstate.json", j);
    return j;
}

json run_wave(const Scenario& sc, Output& out) {
    const auto eq = sc.make_equilibrium();
    const auto opt = operator_options(sc);
    const GlideState g_inf = build_initial_state(sc);
    const auto& hz = sc.scattering.horizons;
    const OperatorRun r = wave_operator(g_inf, eq, hz, sc.solver.dt, opt);
    for (std::size_t i = 0; i < r.solutions.size(); ++i)
        out.state("horizons/g_" + format_double(hz[i]) + ".bin", r.solutions[i], {{"horizon", hz[i]}});
    out.state("wave_output.bin", r.output, {{"kind_detail", "wave operator output"}});
    json j = operator_run_json(r, opt);
    if (sc.scattering.probe_distance > 0.0)
        j["probe"] = probe(sc, make_operator(OperatorKind::wave, eq, hz, sc.solver.dt, opt), g_inf, opt, out);
    out.document("wave.json", j);
    return j;
}

json run_scatter(const Scenario& sc, Output& out) {
    const auto eq = sc.make_equilibrium();
    const auto opt = operator_options(sc);
    const GlideState g_minus = build_initial_state(sc);
    const auto& hz = sc.scattering.horizons;
    const ScatteringResult r = scattering_operator(g_minus, eq, hz, sc.solver.dt, opt);
    out.state("g_zero.bin", r.g_zero, {{"kind_detail", "state at t = 0"}});
    out.state("g_inf.bin", r.g_inf, {{"kind_detail", "scattered state"}});
    json j = {{"wave", operator_run_json(r.wave, opt)},
              {"forward", {{"ladder", r.forward.ladder},
                           {"increments", r.forward.increments},
                           {"fitted_exponent", r.forward.fitted_exponent},
                           {"invalidated", r.forward.invalidated}}},
              {"input_norm", surrogate_norm(g_minus, opt)},
              {"output_norm", surrogate_norm(r.g_inf, opt)}};
    if (sc.scattering.probe_distance > 0.0)
        j["probe"] = probe(sc, make_operator(OperatorKind::scattering, eq, hz, sc.solver.dt, opt), g_minus, opt, out);
    out.document("scatter.json", j);
    return j;
}

// ---- verify ----

json suite(const std::string& name, bool passed, json details) {
    return {{"name", name}, {"passed", passed}, {"details", std::move(details)}};
}

json verify_weights(const Scenario& sc) {
    const std::size_t n = sc.verify.weight_samples;
    const int d = sc.grid.d;
    const auto sub = check_submultiplicativity(sc.weights, n, d, sc.seed);
    const auto c1 = check_commutator(sc.weights, n, d, sc.seed);
    const auto c2 = check_commutator(sc.weights, 2 * n, d, sc.seed);
    const double drift = std::abs(c2.fitted_constant - c1.fitted_constant) / c1.fitted_constant;
    const bool ok = sub.passes && sub.violations == 0 && std::isfinite(drift) && drift < 0.1;
    return suite("weights", ok,
                 {{"samples", n},
                  {"violations", sub.violations},
                  {"worst_ratio", sub.worst_ratio},
                  {"commutator_constant", c1.fitted_constant},
                  {"commutator_constant_doubled", c2.fitted_constant},
                  {"commutator_drift", drift}});
}

json verify_dispersion(const Scenario& sc) {
    const auto eq = EquilibriumSpec::poisson(1);
    std::mt19937_64 rng(sc.seed);
    std::uniform_real_distribution<double> re(-20.0, 20.0), im(0.0, 20.0);
    std::uniform_int_distribution<int> kd(1, 3);
    double worst = 0.0;
    for (std::size_t i = 0; i < sc.verify.dispersion_samples; ++i) {
        const int k = kd(rng);
        const cplx tau(re(rng), -im(rng));
        const cplx exact = 1.0 / ((double(k) + cplx(0, 1) * tau) * (double(k) + cplx(0, 1) * tau));
        const cplx got = dispersion_L(eq, {{k}, tau});
        worst = std::max(worst, std::abs(got - exact) / std::abs(exact));
    }
    const auto vac = EquilibriumSpec::vacuum(1);
    const double vac_l = std::abs(dispersion_L(vac, {{1}, cplx(0.5, -0.5)}));
    return suite("dispersion", worst <= 1e-8 && vac_l == 0.0,
                 {{"samples", sc.verify.dispersion_samples}, {"max_relative_error", worst}, {"vacuum_abs_L", vac_l}});
}

json verify_penrose() {
    const auto rp = penrose_margin(EquilibriumSpec::poisson(1), 2);
    const auto rv = penrose_margin(EquilibriumSpec::vacuum(1), 2);
    const bool ok = rp.margin >= 0.8934 && rp.margin <= 0.8954 && !rp.zero_suspected && rv.margin == 1.0;
    return suite("penrose", ok,
                 {{"poisson_margin", rp.margin},
                  {"poisson_expected", std::sqrt(0.8)},
                  {"poisson_argmin_tau", cjson(rp.argmin_tau)},
                  {"vacuum_margin", rv.margin}});
}

json verify_green() {
    const auto eq = EquilibriumSpec::poisson(1, 0.9);
    const GreenTable t = build_green_table(eq, {{1}}, 20.0, 0.01);
    double err = 0.0;
    for (std::size_t i = 0; i < t.n_s; ++i) {
        const double s = t.ds * double(i);
        err = std::max(err, std::abs(t.at(0, i) - std::exp(-s) * std::sin(s)));
    }
    const auto neg = green_function(eq, {1}, UniformGrid{-5.0, 0.05, 100});
    double leak = 0.0;
    for (const auto& v : neg) leak = std::max(leak, std::abs(v));
    const auto decay = verify_green_decay(t, 0.9);
    return suite("green", err <= 1e-6 && leak <= 1e-6 && decay.passes,
                 {{"max_error", err}, {"negative_s_leakage", leak}, {"decay_c_fit", decay.c_fit},
                  {"decay_passes", decay.passes}});
}

json verify_routes() {
    const auto eq = EquilibriumSpec::poisson(1);
    const double T = 10.0;
    json runs = json::array();
    bool ok = true;
    std::vector<double> ev, eg;
    for (double dt : {1e-2, 5e-3}) {
        const std::size_t n = std::size_t(std::llround(T / dt)) + 1;
        DensitySeries n_hat(0.0, dt, n, {{1}});
        for (std::size_t i = 0; i < n; ++i) n_hat.at(i, 0) = 1.0;
        const auto vol = volterra_solve(VolterraKernel(eq), n_hat, VolterraDirection::forward);
        const auto table = build_green_table(eq, {{1}}, T, dt);
        const auto rep = representation(n_hat, table, VolterraDirection::forward);
        double a = 0.0, b = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double t = dt * double(i);
            const double exact = 0.5 * (1.0 + std::exp(-t) * (std::cos(t) + std::sin(t)));
            a = std::max(a, std::abs(vol.at(i, 0) - exact));
            b = std::max(b, std::abs(rep.at(i, 0) - exact));
        }
        ok = ok && a <= 5 * dt * dt && b <= 5 * dt * dt;
        ev.push_back(a);
        eg.push_back(b);
        runs.push_back({{"dt", dt}, {"volterra_error", a}, {"green_error", b}});
    }
    const double ov = std::log2(ev[0] / ev[1]), og = std::log2(eg[0] / eg[1]);
    ok = ok && ov >= 1.9 && og >= 1.9;
    return suite("routes", ok, {{"runs", runs}, {"volterra_order", ov}, {"green_order", og}});
}

json run_verify(const Scenario& sc, Output& out, bool& all_passed) {
    json suites = json::array();
    suites.push_back(verify_weights(sc));
    suites.push_back(verify_dispersion(sc));
    suites.push_back(verify_penrose());
    suites.push_back(verify_green());
    suites.push_back(verify_routes());
    all_passed = true;
    json names = json::object();
    for (const auto& s : suites) {
        all_passed = all_passed && s["passed"].get<bool>();
        names[s["name"].get<std::string>()] = s["passed"].get<bool>() ? "passed" : "failed";
    }
    out.document("verify.json", {{"passed", all_passed}, {"suites", suites}});
    return {{"passed", all_passed}, {"suites", names}};
}

json tolerances(const Scenario& sc) {
    return {{"dt", sc.solver.dt},
            {"boundary_threshold", sc.solver.boundary_threshold},
            {"oracle_boundary_threshold", sc.solver.oracle_boundary_threshold},
            {"green_tail_tol", sc.green.tail_tol},
            {"quadrature_rel_tol", quad::Options{}.rel_tol},
            {"horizon_T_max", sc.t_max()}};
}

}  // namespace

RunResult run(const RunOptions& opt) {
    RunResult res;
    const auto& names = subcommands();
    if (std::find(names.begin(), names.end(), opt.subcommand) == names.end()) {
        res.exit_code = exit_code::usage;
        res.status = "failed";
        res.message = "unknown subcommand '" + opt.subcommand + "'";
        return res;
    }
    ScenarioOverrides ov;
    ov.override_horizon = opt.override_horizon;
    ov.seed = opt.seed;
    ov.threads = opt.threads;
    ov.output = opt.out_dir;

    json manifest = {{"tool", "landau-lab"}, {"version", version_string}, {"subcommand", opt.subcommand}};
    res.out_dir = opt.out_dir.value_or("out");
    std::unique_ptr<Output> out;
    try {
        Scenario sc;
        try {
            sc = opt.scenario_path ? load_scenario(*opt.scenario_path, ov) : default_scenario(ov);
        } catch (...) {
            manifest["scenario_source"] = opt.scenario_path.value_or("<defaults>");
            out = std::make_unique<Output>(res.out_dir, manifest);
            throw;
        }
        res.out_dir = sc.output;
        set_thread_count(sc.threads);
        manifest["scenario_source"] = sc.source;
        manifest["scenario"] = sc.document;
        json hashed = sc.document;
        // Where results go and how many threads made them do not change them.
        hashed.erase("output");
        hashed.erase("threads");
        manifest["scenario_hash"] = hex64(fnv1a64(hashed.dump()));
        json inputs = json::array();
        for (const auto& p : sc.inputs) inputs.push_back({{"path", p}, {"fnv1a64", hex64(fnv1a64(read_text_file(p)))}});
        manifest["inputs"] = inputs;
        manifest["seed"] = sc.seed;
        manifest["threads"] = sc.threads;
        manifest["override_horizon"] = sc.solver.override_horizon;
        manifest["tolerances"] = tolerances(sc);
        out = std::make_unique<Output>(res.out_dir, manifest);

        json results;
        bool passed = true;
        const std::string& cmd = opt.subcommand;
        if (cmd == "simulate") {
            results = run_simulate(sc, *out);
        } else if (cmd == "penrose") {
            results = run_penrose(sc, *out);
        } else if (cmd == "green") {
            results = run_green(sc, *out);
        } else if (cmd == "density") {
            const std::string route = opt.route.value_or(sc.density.route);
            if (route != "volterra" && route != "green" && route != "both")
                throw ArgumentError("--route must be volterra, green or both");
            results = run_density(sc, route, *out);
        } else if (cmd == "diagnose") {
            results = run_diagnose(sc, opt.inputs, *out, out->manifest()["inputs"]);
        } else if (cmd == "finalstate") {
            results = run_finalstate(sc, *out);
        } else if (cmd == "wave") {
            results = run_wave(sc, *out);
        } else if (cmd == "scatter") {
            results = run_scatter(sc, *out);
        } else {
            results = run_verify(sc, *out, passed);
        }
        out->manifest()["results"] = results;
        out->manifest()["status"] = "complete";
        res.exit_code = passed ? exit_code::ok : exit_code::verify_failed;
        out->manifest()["exit_code"] = res.exit_code;
        out->flush();
        res.status = "complete";
        res.manifest = out->manifest();
        return res;
    } catch (const Error& e) {
        res.exit_code = exit_code_for(e.kind());
        res.message = e.what();
        json err = {{"kind", to_string(e.kind())}, {"message", e.what()}};
        if (const auto* d = dynamic_cast<const DivergenceError*>(&e)) err["last_good_time"] = d->last_good_time();
        if (const auto* c = dynamic_cast<const ConvergenceError*>(&e)) err["gaps"] = c->gaps();
        if (out) out->manifest()["error"] = err;
    } catch (const json::exception& e) {
        res.exit_code = exit_code_for(ErrorKind::validation);
        res.message = e.what();
        if (out) out->manifest()["error"] = {{"kind", "validation"}, {"message", e.what()}};
    } catch (const fs::filesystem_error& e) {
        res.exit_code = exit_code_for(ErrorKind::io);
        res.message = e.what();
        if (out) out->manifest()["error"] = {{"kind", "io"}, {"message", e.what()}};
    } catch (const std::exception& e) {
        res.exit_code = exit_code::unknown;
        res.message = e.what();
        if (out) out->manifest()["error"] = {{"kind", "unknown"}, {"message", e.what()}};
    }
    res.status = "failed";
    if (out) {
        try {
            out->manifest()["status"] = "failed";
            out->manifest()["exit_code"] = res.exit_code;
            out->flush();
            res.manifest = out->manifest();
        } catch (...) {
        }
    }
    return res;
}

}  // namespace landau
