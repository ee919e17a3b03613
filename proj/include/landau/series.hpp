#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "landau/common.hpp"

namespace landau {

// ρ̂(t,k) on a uniform time grid t_i = t0 + i·dt (dt may be negative for
// backward runs). Values are time-major: rho[i * k_list.size() + ki].
struct DensitySeries {
    double t0 = 0.0;
    double dt = 0.0;
    std::size_t n_t = 0;
    std::vector<std::vector<int>> k_list;
    std::vector<cplx> rho;
    std::vector<std::uint8_t> stale;  // same layout as rho; empty means nothing stale

    DensitySeries() = default;
    DensitySeries(double t0, double dt, std::size_t n_t, std::vector<std::vector<int>> k_list);

    double t(std::size_t i) const { return t0 + dt * double(i); }
    std::size_t n_k() const { return k_list.size(); }
    cplx& at(std::size_t ti, std::size_t ki) { return rho[ti * k_list.size() + ki]; }
    const cplx& at(std::size_t ti, std::size_t ki) const { return rho[ti * k_list.size() + ki]; }
    bool is_stale(std::size_t ti, std::size_t ki) const {
        return !stale.empty() && stale[ti * k_list.size() + ki] != 0;
    }
    int find(const std::vector<int>& k) const;
    // Time series of one mode.
    std::vector<cplx> column(std::size_t ki) const;

    // Long format: t, k_1..k_d, re, im, stale.
    std::string to_csv() const;
    static DensitySeries from_csv(const std::string& text);
};

}  // namespace landau
