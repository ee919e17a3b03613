#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <vector>

#include "landau/equilibria.hpp"
#include "landau/fourier_grid.hpp"
#include "landau/interpolation.hpp"
#include "landau/io.hpp"
#include "landau/series.hpp"

namespace landau {

enum class TimeDirection { forward, backward };

// Forward horizon of a grid: ρ̂(t,k) = ĝ(t,k,tk) needs |t·K| ≤ xi_max.
inline double horizon_limit(const FourierGrid& g) { return g.xi_max / g.K; }

struct DensityEval {
    std::vector<cplx> rho;            // per mode index; the k = 0 entry is 0
    std::vector<std::uint8_t> stale;  // per mode index: ξ = tk outside the hull
    std::size_t stale_count = 0;
};

// ρ̂(t,k) = ĝ(t,k,tk). Throws HorizonError when every k ≠ 0 is stale.
DensityEval density_from_glide(const GlideState& s, InterpRule rule = InterpRule::cubic);

struct GlideOptions {
    bool nonlinear = true;
    TimeDirection direction = TimeDirection::forward;
    InterpRule density_interp = InterpRule::cubic;
    InterpRule shift_interp = InterpRule::cubic;
    double boundary_threshold = 1e-8;  // |ĝ| near the hull edge that invalidates a run
    int boundary_width = 2;            // nodes from the edge that count as "near"
    std::size_t history_every = 0;     // keep a snapshot every n steps (0: none)
    bool record_density = true;
};

// Right-hand side of the gliding system with plans reused across calls.
class GlideRhs {
public:
    GlideRhs(const FourierGrid& grid, const EquilibriumSpec& eq, const GlideOptions& opt);
    // out = ∂t ĝ at the state's time; optionally returns the density used.
    void evaluate(const GlideState& s, std::vector<cplx>& out, DensityEval* density = nullptr) const;

private:
    FourierGrid grid_;
    const EquilibriumSpec* eq_;
    GlideOptions opt_;
    XiInterpolator density_interp_;
    XiInterpolator shift_interp_;
    std::vector<std::vector<int>> modes_;
    std::vector<double> k2_;
};

std::vector<cplx> glide_rhs(const GlideState& s, const EquilibriumSpec& eq, const GlideOptions& opt = {});

struct GlideRun {
    GlideState state;
    DensitySeries series;               // all k ≠ 0, one row per accepted step (including the start)
    std::vector<GlideState> history;    // snapshots when history_every > 0 (including the start)
    bool invalidated = false;           // boundary magnitude exceeded the threshold
    double invalidated_at = std::numeric_limits<double>::quiet_NaN();
    double max_boundary = 0.0;
    double max_reality_defect = 0.0;
    double max_neutrality_defect = 0.0;
    std::size_t steps = 0;
};

// Classical RK4 from state.t to t_end with fixed step dt (> 0; the sign is
// taken from the direction). Symmetrizes after every step.
GlideRun glide_integrate(GlideState state, const EquilibriumSpec& eq, double t_end, double dt,
                         const GlideOptions& opt = {});

// Largest |ĝ| within `width` nodes of the ξ-grid boundary.
double boundary_magnitude(const GlideState& s, int width);

struct FieldCoefficients {
    std::vector<std::vector<int>> k_list;
    std::vector<cplx> rho_hat;
    std::vector<std::vector<cplx>> E_hat;
};

FieldCoefficients poisson_field(const std::vector<std::vector<int>>& k_list, const std::vector<cplx>& rho_hat);
// E(x) on the uniform torus grid with n_x points per axis: (2π)^{-d} Σ_k Ê(k) e^{ik·x}.
// Returned complex so that reality can be checked; layout [component][x].
std::vector<std::vector<cplx>> field_in_space(const FieldCoefficients& f, int n_x);

// ---- physical-space oracle ----

struct PhaseGrid {
    int d = 1;
    int n_x = 48;
    int n_v = 256;
    double v_max = 4.0 * pi;

    void validate() const;
    double dx() const { return 2.0 * pi / n_x; }
    double dv() const { return 2.0 * v_max / n_v; }
    double x(int i) const { return i * dx(); }
    double v(int j) const { return -v_max + j * dv(); }
    // ξ-grid dual to the v-grid: Δξ = π/v_max, ξ_j = -xi_max + jΔξ.
    double xi_max() const { return pi / dv(); }
    std::size_t x_points() const;
    std::size_t v_points() const;
    std::size_t size() const { return x_points() * v_points(); }
    double cell() const;  // Δx^d Δv^d
    // The ξ-grid of profile_from_phase for modes |k_i| ≤ K.
    FourierGrid fourier_grid(int K) const { return FourierGrid{d, K, xi_max(), n_v}; }
};

struct PhaseState {
    PhaseGrid grid;
    double t = 0.0;
    std::vector<double> f;  // x-major: f[ix * v_points + iv]

    PhaseState() = default;
    PhaseState(const PhaseGrid& g, double t0);
};

struct SplitStepOptions {
    bool field = true;                  // false: pure free transport
    bool dealias = true;                // 2/3 mask on x- and v-frequencies
    double boundary_threshold = 1e-12;  // max |f| at |v| = V relative to max(|f|, M0)
};

class SplitStepper {
public:
    SplitStepper(const PhaseGrid& grid, const EquilibriumSpec& eq, const SplitStepOptions& opt = {});
    ~SplitStepper();
    SplitStepper(const SplitStepper&) = delete;
    SplitStepper& operator=(const SplitStepper&) = delete;

    void step(PhaseState& s, double dt);
    // Runs from s.t to t_end in equal steps no longer than dt.
    void run(PhaseState& s, double t_end, double dt);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

PhaseState split_step(const PhaseState& s, const EquilibriumSpec& eq, double dt, const SplitStepOptions& opt = {});

// ĝ(t,k,ξ) = f̂(t,k,ξ - tk) for |k_i| ≤ K, computed exactly on the dual
// ξ-grid by the phase factor e^{i t k·v} before the v-transform; nodes whose
// source frequency ξ - tk lies outside the ξ-grid are set to 0.
GlideState profile_from_phase(const PhaseState& s, int K);

// M0 sampled on the v-grid (inverse transform of M̂0 on the dual grid).
std::vector<double> equilibrium_in_velocity(const PhaseGrid& grid, const EquilibriumSpec& eq);

double phase_mass(const PhaseState& s);
// Σ (f + M0)² Δx Δv.
double phase_total_l2(const PhaseState& s, const std::vector<double>& m0);
// Max |f| on the two v-boundary layers relative to max(max |f|, reference).
double phase_boundary_ratio(const PhaseState& s, double reference = 0.0);

// ---- snapshots ----

// Array container with header {kind: "glide_state", grid, t, version} plus `extra`.
void save_glide_state(const std::string& path, const GlideState& s, const json& extra = json::object());
GlideState load_glide_state(const std::string& path);

// ---- initial data ----

// ε cos(k0·x) (2πσ²)^{-d/2} e^{-|v|²/(2σ²)}.
PhaseState cosine_mode_phase(const PhaseGrid& grid, double eps, const std::vector<int>& k0, double sigma = 1.0);
GlideState cosine_mode_glide(const FourierGrid& grid, double eps, const std::vector<int>& k0, double sigma = 1.0);
// ĝ(k0, ξ_j0) = c and the partner value at (-k0, -ξ_j0).
GlideState impulse_glide(const FourierGrid& grid, const std::vector<int>& k0, const std::vector<int>& node, cplx c);

}  // namespace landau
