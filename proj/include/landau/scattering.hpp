#pragma once

#include <functional>
#include <string>
#include <vector>

#include "landau/kinetics.hpp"

namespace landau {

struct OperatorOptions {
    GlideOptions glide{};
    double norm_lambda = 0.45;  // λ of the Gevrey surrogate norm used for gaps
    double norm_s = 1.0 / 3.0;
    int norm_derivatives = 0;
    bool allow_past_horizon = false;  // permit times beyond xi_max/K
    double growth_tolerance = 0.2;    // relative increase of successive gaps tolerated as noise
};

double surrogate_norm(const GlideState& s, const OperatorOptions& opt);
double surrogate_distance(const GlideState& a, const GlideState& b, const OperatorOptions& opt);

struct FinalStateResult {
    GlideState g_inf;                  // g(T), time stamp T
    std::vector<double> ladder;        // T/2^m, ..., T/2, T
    std::vector<double> increments;    // ‖g(ladder[i+1]) - g(ladder[i])‖
    double fitted_exponent = 0.0;      // c in increments ~ e^{-c⟨t⟩^{1/3}}
    bool invalidated = false;
    double max_boundary = 0.0;
};

// Integrates forward from f0 (time stamp ignored, taken as 0) to T.
FinalStateResult final_state_forward(const GlideState& f0, const EquilibriumSpec& eq, double T, double dt,
                                     const OperatorOptions& opt = {}, int ladder_levels = 4);

struct OperatorRun {
    GlideState input;
    std::vector<double> horizons;
    std::vector<GlideState> solutions;  // g_n(0) per horizon
    std::vector<double> cauchy_gaps;    // ‖g_{n_{i+1}}(0) - g_{n_i}(0)‖
    GlideState output;
    bool invalidated = false;
};

// For each horizon n: state g_∞ at t = n, integrated backward to 0.
// Throws ConvergenceError when the gaps grow.
OperatorRun wave_operator(const GlideState& g_inf, const EquilibriumSpec& eq, const std::vector<double>& horizons,
                          double dt, const OperatorOptions& opt = {});

// ĝ(k, ξ) -> ĝ(-k, ξ): the profile of f(-t, -x, v) at t = 0.
GlideState reflect(const GlideState& s);

struct ScatteringResult {
    GlideState g_inf;
    GlideState g_zero;  // state at t = 0 evolving from the data at -∞
    OperatorRun wave;
    FinalStateResult forward;
};

ScatteringResult scattering_operator(const GlideState& g_minus_inf, const EquilibriumSpec& eq,
                                     const std::vector<double>& horizons, double dt, const OperatorOptions& opt = {});

enum class OperatorKind { final_state, wave, scattering };

const char* to_string(OperatorKind k);
OperatorKind parse_operator_kind(const std::string& s);

using StateMap = std::function<GlideState(const GlideState&)>;

// Convenience wrapper producing the map of one operator with fixed settings.
StateMap make_operator(OperatorKind kind, const EquilibriumSpec& eq, const std::vector<double>& horizons, double dt,
                       const OperatorOptions& opt = {});

struct LipschitzReport {
    double input_gap = 0.0;
    double output_gap = 0.0;
    double upper_ratio = 0.0;  // ‖Op a - Op b‖_{λ_out} / ‖a - b‖_{λ_in}
    double lower_ratio = 0.0;  // ‖Op a - Op b‖_{λ_in} / ‖a - b‖_{λ_out}
    bool degenerate = false;   // identical inputs: 0/0
};

LipschitzReport lipschitz_probe(const StateMap& op, const GlideState& a, const GlideState& b, double lambda_in,
                                double lambda_out, const OperatorOptions& opt = {});

}  // namespace landau
