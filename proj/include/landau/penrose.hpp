#pragma once

#include <vector>

#include "landau/equilibria.hpp"
#include "landau/quadrature.hpp"

namespace landau {

struct DispersionQuery {
    std::vector<int> k;
    cplx tau{};
};

// L(·,k) for a fixed equilibrium and mode.
class DispersionFunction {
public:
    DispersionFunction(const EquilibriumSpec& eq, std::vector<int> k, quad::Options opt = {});

    // Direct quadrature of ∫_0^∞ e^{-iτs} s M̂0(sk) ds.
    cplx L(cplx tau) const;
    // Same value from the integrated-by-parts kernel M̂0(sk) + s k·∇M̂0(sk); τ ≠ 0.
    cplx L_by_parts(cplx tau) const;
    // Picks the by-parts route once |τ| exceeds a few inverse decay lengths.
    cplx L_auto(cplx tau) const;
    cplx Lprime(cplx tau) const;
    // D^a_τ L for 0 ≤ a ≤ 6.
    cplx derivative(cplx tau, int a) const;

    const RayProfile& ray() const { return ray_; }
    const std::vector<int>& k() const { return k_; }
    double knorm() const { return knorm_; }
    std::size_t evaluations() const { return evals_; }

private:
    cplx ray_integral(cplx tau, int power, bool by_parts) const;

    const EquilibriumSpec* eq_;
    std::vector<int> k_;
    double knorm_;
    RayProfile ray_;
    quad::Options opt_;
    mutable std::size_t evals_ = 0;
};

cplx dispersion_L(const EquilibriumSpec& eq, const DispersionQuery& q, const quad::Options& opt = {});
cplx dispersion_L_by_parts(const EquilibriumSpec& eq, const DispersionQuery& q, const quad::Options& opt = {});
cplx dispersion_Lprime(const EquilibriumSpec& eq, const DispersionQuery& q, const quad::Options& opt = {});

struct DerivativeResult {
    cplx value{};
    // ⟨Re τ⟩|D^a L| (|k| λ0³)^{a+1} / (3a+5)!: the constant C needed for the
    // factorial bound to hold at this point.
    double bound_constant = 0.0;
};
DerivativeResult dispersion_derivative(const EquilibriumSpec& eq, const DispersionQuery& q, int a,
                                       const quad::Options& opt = {});

struct TauGrid {
    std::size_t samples = 1001;       // real-axis samples on [0, cutoff] (or [-cutoff, cutoff])
    double cutoff_min = 50.0;         // cutoff = max(cutoff_min, cutoff_per_k·|k|)
    double cutoff_per_k = 20.0;
    double winding_step = 0.25;       // max |Δarg| (radians) between contour samples
};

struct PenroseSample {
    std::vector<int> k;
    double tau = 0.0;
    double modulus = 0.0;
};

struct PenroseModeReport {
    std::vector<int> k;
    double tau_cutoff = 0.0;
    double min_modulus = 0.0;
    double argmin_tau = 0.0;
    int winding = 0;
};

struct PenroseReport {
    double margin = 0.0;
    std::vector<int> argmin_k;
    cplx argmin_tau{};
    bool zero_suspected = false;
    std::vector<PenroseModeReport> modes;
    std::vector<PenroseSample> samples;
};

PenroseReport penrose_margin(const EquilibriumSpec& eq, int k_max, const TauGrid& grid = {},
                             const quad::Options& opt = {});

}  // namespace landau
