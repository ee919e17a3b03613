#pragma once

#include <vector>

#include "landau/equilibria.hpp"
#include "landau/green.hpp"
#include "landau/kinetics.hpp"
#include "landau/series.hpp"

namespace landau {

// K(t,s;k) = M̂0((t-s)k)·(t-s). Values outside a tabulated hull read as 0.
class VolterraKernel {
public:
    explicit VolterraKernel(const EquilibriumSpec& eq) : eq_(&eq) {}

    cplx operator()(double t, double s, const std::vector<int>& k) const { return lag(t - s, k); }
    cplx lag(double u, const std::vector<int>& k) const;
    const EquilibriumSpec& equilibrium() const { return *eq_; }

private:
    const EquilibriumSpec* eq_;
};

// Glide snapshots at uniform times t0 + i·dt, read with cubic Lagrange
// interpolation in s and the ξ-interpolation rule of the kinetics module.
class GlideHistory {
public:
    GlideHistory(std::vector<GlideState> snapshots, InterpRule rule = InterpRule::cubic);

    double t_begin() const { return t0_; }
    double t_end() const { return t0_ + dt_ * double(snaps_.size() - 1); }
    bool covers(double s) const;
    const FourierGrid& grid() const { return snaps_.front().grid; }
    const std::vector<GlideState>& snapshots() const { return snaps_; }

    // ĝ(s, k, ξ); 0 when ξ is outside the hull or k is not retained.
    cplx value(double s, const std::vector<int>& k, std::span<const double> xi) const;

private:
    std::vector<GlideState> snaps_;
    double t0_ = 0.0;
    double dt_ = 0.0;
    XiInterpolator interp_;
};

// N̂(t,k) = ĝ(T1,k,tk) - (2π)^{-d} Σ_{0<|l|∞≤K} ∫_{T1}^t ρ̂(s,l) ĝ(s,k-l,tk-sl) (t-s) l·k/|l|² ds
// on t_grid (T1 = t_grid.start), trapezoid in s on the t_grid nodes.
DensitySeries nonlinearity_forward(const GlideHistory& history, const UniformGrid& t_grid,
                                   const std::vector<std::vector<int>>& k_list, bool nonlinear = true);

enum class VolterraDirection { forward, final_state };

const char* to_string(VolterraDirection d);

// forward:     ρ̂(t) + ∫_{T1}^t ρ̂(s) K(t,s) ds = N̂(t)
// final_state: ρ̂(t) - ∫_t^{T2} ρ̂(s) K(t,s) ds = N̂'(t)
// Product trapezoid marching (explicit since K(t,t) = 0).
DensitySeries volterra_solve(const VolterraKernel& kernel, const DensitySeries& n_hat, VolterraDirection direction);

struct RepresentationOptions {
    // final_state uses Ĝ(·,-k); when -k is not tabulated, fall back to Ĝ(·,k)
    // (valid for radial M̂0). Without the flag a missing -k is an error.
    bool radial_fallback = false;
};

// forward:     ρ̂(t) = N̂(t) - ∫_{T1}^t N̂(s) Ĝ(t-s,k) ds
// final_state: ρ̂(t) = N̂'(t) - ∫_t^{T2} N̂'(s) Ĝ(s-t,-k) ds
// The table step must divide the series step. `fallbacks` lists the k for
// which the radial fallback was used.
DensitySeries representation(const DensitySeries& n_hat, const GreenTable& green, VolterraDirection direction,
                             const RepresentationOptions& opt = {},
                             std::vector<std::vector<int>>* fallbacks = nullptr);

// Largest |a - b| over common entries (same grid and k list required).
double max_abs_difference(const DensitySeries& a, const DensitySeries& b);

}  // namespace landau
