#pragma once

#include <span>
#include <vector>

#include "landau/common.hpp"

namespace landau {

// Modes k ∈ [-K, K]^d and ξ-nodes ξ_j = -xi_max + j·Δξ, j = 0..N_xi-1, per axis.
// Mode and node multi-indices are flattened row-major (axis 0 slowest).
struct FourierGrid {
    int d = 1;
    int K = 16;
    double xi_max = 32.0;
    int n_xi = 256;

    void validate() const;
    double dxi() const { return 2.0 * xi_max / n_xi; }
    int side() const { return 2 * K + 1; }
    std::size_t num_modes() const;
    std::size_t row_size() const;
    double xi(int j) const { return -xi_max + j * dxi(); }

    std::vector<int> mode(std::size_t m) const;
    std::size_t mode_index(std::span<const int> k) const;
    bool has_mode(std::span<const int> k) const;
    std::size_t zero_mode() const;
    std::size_t zero_node() const;
    // ξ-node multi-index of a flat node index.
    std::vector<int> node(std::size_t j) const;
    // Flat index of the mode -k and of the node -ξ_j (the node j = 0 on an
    // axis, ξ = -xi_max, is its own partner, as in FFT ordering).
    std::size_t mirror_mode(std::size_t m) const;
    std::size_t mirror_node(std::size_t j) const;
    // Interpolation hull: every component |ξ_i| ≤ xi_max - Δξ.
    bool in_hull(std::span<const double> xi) const;
    double hull() const { return xi_max - dxi(); }

    bool operator==(const FourierGrid& o) const {
        return d == o.d && K == o.K && xi_max == o.xi_max && n_xi == o.n_xi;
    }
};

struct GlideState {
    FourierGrid grid;
    double t = 0.0;
    std::vector<cplx> ghat;  // mode-major: ghat[m * row_size + j]

    GlideState() = default;
    GlideState(const FourierGrid& g, double t0);

    cplx* row(std::size_t m) { return ghat.data() + m * grid.row_size(); }
    const cplx* row(std::size_t m) const { return ghat.data() + m * grid.row_size(); }
    cplx& at(std::size_t m, std::size_t j) { return ghat[m * grid.row_size() + j]; }
    const cplx& at(std::size_t m, std::size_t j) const { return ghat[m * grid.row_size() + j]; }
};

// Enforces ĝ(-k,-ξ) = conj ĝ(k,ξ) by averaging partners, and ĝ(0,0) = 0.
void symmetrize(GlideState& s);

// Largest deviation from the reality and neutrality invariants.
double reality_defect(const GlideState& s);
double neutrality_defect(const GlideState& s);

// Relative ℓ² distance ‖a-b‖/‖b‖ over all modes and nodes.
double relative_l2(const GlideState& a, const GlideState& b);
double l2_norm(const GlideState& s);

}  // namespace landau
