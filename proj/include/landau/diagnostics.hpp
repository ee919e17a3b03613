#pragma once

#include <optional>
#include <vector>

#include "landau/gevrey_weights.hpp"
#include "landau/kinetics.hpp"
#include "landau/series.hpp"

namespace landau {

// d' = floor(d/2 + 1): number of ξ-derivatives carried by the norms.
inline int derivative_order(int d) { return d / 2 + 1; }

// D^a_ξ ĝ for one ξ-row, computed as the transform of (-iv)^a g on the
// v-grid dual to the ξ-grid.
std::vector<cplx> xi_derivative(const FourierGrid& grid, const cplx* row, std::span<const int> a);

// Σ_{|a|≤n} ‖D^a_ξ ĝ e^{λ⟨k,ξ⟩^s}‖, with ‖·‖² = Σ_k Σ_j |·|² Δξ^d.
// Weights are applied in the log domain.
double gevrey_norm(const GlideState& state, double lambda, double s_exp, int n);

struct EnergyOptions {
    std::optional<double> t_weight;  // time used in the weight (default: state time)
    std::optional<int> derivatives;  // max |a| (default: d')
    MollifierLevel mollifier{};
};

// E^p = Σ_k Σ_j ⟨k,ξ⟩^{-2p} A(t,k,ξ)² Σ_{|a|≤d'} |D^a ĥ|² Δξ^d, with A or A♯
// selected by params.direction.
double energy(const GlideState& state, double p, const WeightParams& params, const EnergyOptions& opt = {});

struct ZNorm {
    double value = 0.0;
    double boundary_value = 0.0;  // same sup restricted to modes with |k|∞ = K
    std::size_t stale_modes = 0;
};

// sup_{k≠0} ⟨k,tk⟩^{-p} A(t,k,tk) |ρ̂(t,k)| |k|^{-β} over retained, non-stale k.
ZNorm znorm(const GlideState& state, double p, double beta, const WeightParams& params,
            InterpRule rule = InterpRule::cubic);

struct PointwiseReport {
    double worst_ratio = 0.0;   // max_k H_p(k) / sqrt(I_p(k))
    double fitted_c0 = 0.0;     // = worst_ratio
    std::vector<int> worst_k;
};

// H_p(k) = sup_ξ |⟨k,ξ⟩^{-p} A ĥ| against the per-k energy integrand I_p(k).
PointwiseReport pointwise_sup_check(const GlideState& state, double p, const WeightParams& params,
                                    const EnergyOptions& opt = {});

struct FunctionalSample {
    double t = 0.0;
    std::vector<double> p_values;
    std::vector<double> energy_p;
    std::vector<double> znorm_p;
    double bootstrap0 = 0.0;  // E⁰ + [Z⁰ ⟨t⟩^{exponent}]²
    WeightDirection direction = WeightDirection::decreasing;
};

struct FunctionalOptions {
    std::vector<double> p_values{0.0, 2.0};
    double beta = 0.5;
    std::optional<double> exponent;  // default 6d
    InterpRule density_interp = InterpRule::cubic;
};

FunctionalSample functional_sample(const GlideState& state, const WeightParams& params,
                                   const FunctionalOptions& opt = {});

std::string functional_csv(const std::vector<FunctionalSample>& samples);

struct DecayFit {
    double c_fit = 0.0;
    double envelope = 0.0;  // max_t sup_k|ρ̂| e^{λ0⟨t⟩^{1/3}/4}
    double threshold = 0.0; // λ0/4 - 0.1 λ0
    double t_lo = 0.0, t_hi = 0.0;
    std::size_t points = 0;
    bool passes = false;
};

// Least-squares slope of log sup_k|ρ̂(t,k)| against ⟨t⟩^{1/3} over the latter
// half of [t_lo, t_hi] (default: the whole series); stale entries are skipped.
// Requires t_hi ≥ 8 t_lo.
DecayFit decay_fit(const DensitySeries& series, double lambda0, std::optional<double> t_lo = std::nullopt,
                   std::optional<double> t_hi = std::nullopt);

}  // namespace landau
