#pragma once

#include <vector>

#include "landau/equilibria.hpp"
#include "landau/penrose.hpp"

namespace landau {

struct UniformGrid {
    double start = 0.0;
    double step = 0.01;
    std::size_t count = 0;

    double at(std::size_t i) const { return start + step * double(i); }
    double last() const { return at(count == 0 ? 0 : count - 1); }
};

struct GreenOptions {
    double tail_tol = 1e-8;      // bound on the discarded τ-tail of the residual integral
    double t_cut_min = 50.0;     // initial cutoff max(t_cut_min, t_cut_per_k·|k|), doubled as needed
    double t_cut_per_k = 20.0;
    double t_cut_max = 1.0e5;
    quad::Options quad{};
};

struct GreenModeMeta {
    std::vector<int> k;
    double t_cut = 0.0;
    double d_tau = 0.0;
    std::size_t tau_samples = 0;
    double tail_bound = 0.0;
    double min_one_plus_L = 0.0;  // smallest |1+L| seen on the τ samples
    bool accuracy_warning = false;
};

// Ĝ(s,k) on a uniform s-grid (negative s allowed, where Ĝ vanishes).
std::vector<cplx> green_function(const EquilibriumSpec& eq, const std::vector<int>& k, const UniformGrid& s_grid,
                                 const GreenOptions& opt = {}, GreenModeMeta* meta = nullptr);

// Adaptive τ-quadrature of the same integral at a single s (cross-check oracle).
cplx green_function_direct(const EquilibriumSpec& eq, const std::vector<int>& k, double s,
                           const GreenOptions& opt = {});

struct GreenTable {
    std::vector<std::vector<int>> k_list;
    double ds = 0.0;
    std::size_t n_s = 0;               // samples s = 0, ds, ..., (n_s-1)·ds
    std::vector<cplx> values;          // k-major: values[ki*n_s + si]
    std::vector<GreenModeMeta> meta;
    double tail_tol = 0.0;

    double s_max() const { return ds * double(n_s == 0 ? 0 : n_s - 1); }
    cplx at(std::size_t ki, std::size_t si) const { return values[ki * n_s + si]; }
    // Index of k in k_list, or -1.
    int find(const std::vector<int>& k) const;
};

GreenTable build_green_table(const EquilibriumSpec& eq, const std::vector<std::vector<int>>& k_list, double s_max,
                             double ds, const GreenOptions& opt = {});

struct GreenDecayReport {
    double c_fit = 0.0;
    double worst_slope = 0.0;  // largest fitted log-envelope slope across k
    bool passes = false;
};

GreenDecayReport verify_green_decay(const GreenTable& table, double lambda0);

}  // namespace landau
