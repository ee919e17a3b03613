#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "landau/equilibria.hpp"
#include "landau/gevrey_weights.hpp"
#include "landau/io.hpp"
#include "landau/kinetics.hpp"

namespace landau {

struct EquilibriumConfig {
    std::string kind = "maxwellian";
    int dim = 1;
    double sigma = 1.0;
    double lambda0 = 0.9;
    double theta = 1.0;
    std::vector<std::string> files;  // tabulated: one CSV per axis
    std::string table;               // tabulated: array container
};

struct InitialConfig {
    std::string family = "cosine-mode";  // zero | cosine-mode | impulse | from-snapshot
    double epsilon = 1e-3;
    std::vector<int> k0{1};
    double sigma = 1.0;
    std::vector<int> node;  // impulse ξ-node (default: ξ = 0)
    cplx value{1e-3, 0.0};
    std::string path;
};

struct SolverConfig {
    double dt = 1e-3;
    std::optional<double> T;  // default: the horizon xi_max/K
    bool nonlinear = true;
    TimeDirection direction = TimeDirection::forward;
    InterpRule density_interp = InterpRule::cubic;
    InterpRule shift_interp = InterpRule::cubic;
    double boundary_threshold = 1e-8;
    bool override_horizon = false;
    bool oracle = false;  // also run the split-step solver and compare at T
    double oracle_boundary_threshold = 1e-12;
};

struct DiagnosticsConfig {
    std::size_t every = 0;  // snapshot/diagnostic cadence in steps (0: final state only)
    std::vector<double> p_values{0.0, 2.0};
    double beta = 0.5;
    std::optional<double> exponent;
    double gevrey_lambda = 0.45;
    std::vector<std::string> snapshots;  // glob patterns for `diagnose`
    std::string series;                  // density CSV for a decay fit
    std::optional<double> fit_t_lo, fit_t_hi;
};

struct GreenConfig {
    double s_max = 20.0;
    double ds = 0.01;
    std::vector<std::vector<int>> k;  // default: k = 1..K along the first axis
    double tail_tol = 1e-8;
};

struct PenroseConfig {
    std::optional<int> k_max;  // default: grid.K
    std::size_t samples = 1001;
};

struct DensityConfig {
    std::string route = "both";  // volterra | green | both
    std::size_t store_every = 5;
    std::vector<std::vector<int>> k;  // default: 0 < |k|∞ ≤ min(K, 2)
};

struct ScatteringConfig {
    std::vector<double> horizons;  // default: T_max/4, T_max/2, T_max
    double lambda_in = 0.45;
    double lambda_out = 0.225;
    double probe_distance = 0.0;  // > 0: Lipschitz probe with a seeded perturbation
};

struct VerifyConfig {
    std::size_t weight_samples = 10000;
    std::size_t dispersion_samples = 1000;
};

struct Scenario {
    json document;           // merged document with defaults filled in
    std::string source;      // path or "<defaults>"
    std::vector<std::string> inputs;  // files referenced by the scenario
    EquilibriumConfig equilibrium_config;
    FourierGrid grid{1, 16, 32.0, 256};
    PhaseGrid phase{};
    WeightParams weights = WeightParams::make(0.9, 0.8);
    InitialConfig initial;
    SolverConfig solver;
    DiagnosticsConfig diagnostics;
    GreenConfig green;
    PenroseConfig penrose;
    DensityConfig density;
    ScatteringConfig scattering;
    VerifyConfig verify;
    std::string output = "out";
    std::uint64_t seed = 1;
    unsigned threads = 1;

    double t_max() const { return horizon_limit(grid); }
    double end_time() const { return solver.T.value_or(t_max()); }
    EquilibriumSpec make_equilibrium() const;
};

struct ScenarioOverrides {
    bool override_horizon = false;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::optional<std::string> output;
};

// Parses and validates a scenario document. `base_dir` resolves relative
// paths, including "include" fragments (merged under the document).
Scenario scenario_from_json(const json& doc, const std::string& base_dir = ".", const ScenarioOverrides& ov = {});
Scenario load_scenario(const std::string& path, const ScenarioOverrides& ov = {});
Scenario default_scenario(const ScenarioOverrides& ov = {});

// Resolves "include" entries recursively; later entries and the including
// document take precedence. `loaded` collects every fragment read.
json resolve_includes(const json& doc, const std::string& base_dir, std::vector<std::string>* visited = nullptr,
                      std::vector<std::string>* loaded = nullptr);

GlideState build_initial_state(const Scenario& sc);

}  // namespace landau
