#include "landau/fourier_grid.hpp"

#include <algorithm>
#include <limits>

namespace landau {

void FourierGrid::validate() const {
    if (d < 1 || d > 3) throw ArgumentError("grid dimension must be 1, 2 or 3");
    if (K < 1) throw ArgumentError("grid K must be >= 1");
    if (n_xi < 4 || n_xi % 2 != 0) throw ArgumentError("N_xi must be even and >= 4");
    if (!(xi_max > 0.0) || !std::isfinite(xi_max)) throw ArgumentError("xi_max must be positive");
}

std::size_t FourierGrid::num_modes() const {
    std::size_t n = 1;
    for (int i = 0; i < d; ++i) n *= std::size_t(side());
    return n;
}

std::size_t FourierGrid::row_size() const {
    std::size_t n = 1;
    for (int i = 0; i < d; ++i) n *= std::size_t(n_xi);
    return n;
}

std::vector<int> FourierGrid::mode(std::size_t m) const {
    std::vector<int> k(d);
    for (int a = d - 1; a >= 0; --a) {
        k[a] = int(m % std::size_t(side())) - K;
        m /= std::size_t(side());
    }
    return k;
}

std::size_t FourierGrid::mode_index(std::span<const int> k) const {
    std::size_t m = 0;
    for (int a = 0; a < d; ++a) m = m * std::size_t(side()) + std::size_t(k[a] + K);
    return m;
}

bool FourierGrid::has_mode(std::span<const int> k) const {
    if (int(k.size()) != d) return false;
    return std::all_of(k.begin(), k.end(), [&](int x) { return x >= -K && x <= K; });
}

std::size_t FourierGrid::zero_mode() const {
    std::vector<int> z(d, 0);
    return mode_index(z);
}

std::size_t FourierGrid::zero_node() const {
    std::size_t j = 0;
    for (int a = 0; a < d; ++a) j = j * std::size_t(n_xi) + std::size_t(n_xi / 2);
    return j;
}

std::vector<int> FourierGrid::node(std::size_t j) const {
    std::vector<int> idx(d);
    for (int a = d - 1; a >= 0; --a) {
        idx[a] = int(j % std::size_t(n_xi));
        j /= std::size_t(n_xi);
    }
    return idx;
}

std::size_t FourierGrid::mirror_mode(std::size_t m) const { return num_modes() - 1 - m; }

std::size_t FourierGrid::mirror_node(std::size_t j) const {
    const auto idx = node(j);
    std::size_t out = 0;
    for (int a = 0; a < d; ++a) out = out * std::size_t(n_xi) + std::size_t((n_xi - idx[a]) % n_xi);
    return out;
}

bool FourierGrid::in_hull(std::span<const double> xi) const {
    const double h = hull() * (1.0 + 1e-12);
    return std::all_of(xi.begin(), xi.end(), [&](double x) { return std::abs(x) <= h; });
}

GlideState::GlideState(const FourierGrid& g, double t0) : grid(g), t(t0) {
    grid.validate();
    ghat.assign(grid.num_modes() * grid.row_size(), 0.0);
}

void symmetrize(GlideState& s) {
    const auto& g = s.grid;
    const std::size_t M = g.num_modes(), R = g.row_size();
    std::vector<std::size_t> mirror(R);
    for (std::size_t j = 0; j < R; ++j) mirror[j] = g.mirror_node(j);
    for (std::size_t m = 0; m < M; ++m) {
        const std::size_t mm = g.mirror_mode(m);
        if (mm < m) continue;
        cplx* a = s.row(m);
        cplx* b = s.row(mm);
        for (std::size_t j = 0; j < R; ++j) {
            const std::size_t jj = mirror[j];
            if (mm == m && jj < j) continue;
            const cplx avg = 0.5 * (a[j] + std::conj(b[jj]));
            a[j] = avg;
            b[jj] = std::conj(avg);
        }
    }
    s.at(g.zero_mode(), g.zero_node()) = 0.0;
}

double reality_defect(const GlideState& s) {
    const auto& g = s.grid;
    double worst = 0.0;
    for (std::size_t m = 0; m < g.num_modes(); ++m) {
        const std::size_t mm = g.mirror_mode(m);
        for (std::size_t j = 0; j < g.row_size(); ++j)
            worst = std::max(worst, std::abs(s.at(m, j) - std::conj(s.at(mm, g.mirror_node(j)))));
    }
    return worst;
}

double neutrality_defect(const GlideState& s) { return std::abs(s.at(s.grid.zero_mode(), s.grid.zero_node())); }

double l2_norm(const GlideState& s) {
    double acc = 0.0;
    for (const auto& v : s.ghat) acc += std::norm(v);
    return std::sqrt(acc);
}

double relative_l2(const GlideState& a, const GlideState& b) {
    if (!(a.grid == b.grid)) throw ArgumentError("states live on different grids");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.ghat.size(); ++i) {
        num += std::norm(a.ghat[i] - b.ghat[i]);
        den += std::norm(b.ghat[i]);
    }
    if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::sqrt(num / den);
}

}  // namespace landau
