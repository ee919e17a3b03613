#include "landau/density.hpp"

#include <algorithm>
#include <cmath>

namespace landau {

cplx VolterraKernel::lag(double u, const std::vector<int>& k) const {
    if (u == 0.0) return 0.0;
    std::vector<double> xi(k.size());
    for (std::size_t a = 0; a < k.size(); ++a) xi[a] = u * k[a];
    return eq_->fourier_value_or_zero(xi) * u;
}

const char* to_string(VolterraDirection d) { return d == VolterraDirection::forward ? "forward" : "final_state"; }

GlideHistory::GlideHistory(std::vector<GlideState> snapshots, InterpRule rule)
    : snaps_(std::move(snapshots)),
      interp_(snaps_.empty() ? FourierGrid{} : snaps_.front().grid, rule) {
    if (snaps_.empty()) throw ArgumentError("glide history is empty");
    for (const auto& s : snaps_)
        if (!(s.grid == snaps_.front().grid)) throw ArgumentError("glide history snapshots use different grids");
    t0_ = snaps_.front().t;
    dt_ = snaps_.size() > 1 ? snaps_[1].t - snaps_[0].t : 0.0;
    if (snaps_.size() > 1 && dt_ == 0.0) throw ArgumentError("glide history has repeated times");
    for (std::size_t i = 1; i < snaps_.size(); ++i) {
        const double expect = t0_ + dt_ * double(i);
        if (std::abs(snaps_[i].t - expect) > 1e-9 * std::max(1.0, std::abs(expect)))
            throw ArgumentError("glide history times are not uniform");
    }
}

bool GlideHistory::covers(double s) const {
    const double lo = std::min(t0_, t_end()), hi = std::max(t0_, t_end());
    const double tol = 1e-9 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
    return s >= lo - tol && s <= hi + tol;
}

cplx GlideHistory::value(double s, const std::vector<int>& k, std::span<const double> xi) const {
    if (!covers(s))
        throw ArgumentError("glide history does not cover s = " + std::to_string(s) + " (have [" +
                            std::to_string(t0_) + ", " + std::to_string(t_end()) + "])");
    const auto& g = grid();
    if (!g.has_mode(k)) return 0.0;
    const std::size_t m = g.mode_index(k);
    const std::size_t n = snaps_.size();
    if (n == 1) return interp_.point(snaps_[0].row(m), xi);
    const double p = (s - t0_) / dt_;
    const double pr = std::round(p);
    if (std::abs(p - pr) < 1e-9) {
        const std::size_t i = std::size_t(std::clamp(pr, 0.0, double(n - 1)));
        return interp_.point(snaps_[i].row(m), xi);
    }
    // Lagrange over up to four snapshots around p.
    const int width = int(std::min<std::size_t>(4, n));
    int lo = int(std::floor(p)) - (width - 1) / 2;
    lo = std::clamp(lo, 0, int(n) - width);
    cplx acc = 0.0;
    for (int a = 0; a < width; ++a) {
        double w = 1.0;
        for (int b = 0; b < width; ++b)
            if (b != a) w *= (p - double(lo + b)) / double(a - b);
        if (w != 0.0) acc += w * interp_.point(snaps_[std::size_t(lo + a)].row(m), xi);
    }
    return acc;
}

DensitySeries nonlinearity_forward(const GlideHistory& history, const UniformGrid& t_grid,
                                   const std::vector<std::vector<int>>& k_list, bool nonlinear) {
    if (t_grid.count == 0) throw ArgumentError("time grid is empty");
    if (t_grid.count > 1 && !(t_grid.step > 0.0)) throw ArgumentError("time grid step must be positive");
    if (!history.covers(t_grid.start) || !history.covers(t_grid.last()))
        throw ArgumentError("glide history does not cover the requested time grid");
    const auto& g = history.grid();
    for (const auto& k : k_list)
        if (int(k.size()) != g.d) throw ArgumentError("k vector has the wrong dimension");
    const std::size_t n = t_grid.count;
    const int d = g.d;
    const double T1 = t_grid.start;
    const double dt = t_grid.step;
    DensitySeries out(T1, dt, n, k_list);

    std::vector<std::vector<int>> ls;
    if (nonlinear) {
        for (std::size_t m = 0; m < g.num_modes(); ++m)
            if (m != g.zero_mode()) ls.push_back(g.mode(m));
    }
    // ρ̂(s_j, l) on the nodes.
    std::vector<cplx> rho(n * ls.size());
    parallel_for(n, [&](std::size_t j) {
        const double s = t_grid.at(j);
        std::vector<double> xi(static_cast<std::size_t>(d));
        for (std::size_t li = 0; li < ls.size(); ++li) {
            for (int a = 0; a < d; ++a) xi[std::size_t(a)] = s * ls[li][std::size_t(a)];
            rho[j * ls.size() + li] = history.value(s, ls[li], xi);
        }
    });
    const double norm = std::pow(2.0 * pi, -d);

    parallel_for(k_list.size(), [&](std::size_t ki) {
        const auto& k = k_list[ki];
        std::vector<double> xi(static_cast<std::size_t>(d));
        std::vector<int> kl(static_cast<std::size_t>(d));
        for (std::size_t i = 0; i < n; ++i) {
            const double t = t_grid.at(i);
            for (int a = 0; a < d; ++a) xi[std::size_t(a)] = t * k[std::size_t(a)];
            cplx value = history.value(T1, k, xi);
            cplx integral = 0.0;
            for (std::size_t j = 0; j < i; ++j) {  // the j = i node carries (t - s) = 0
                const double s = t_grid.at(j);
                const double w = (j == 0 ? 0.5 : 1.0) * dt * (t - s);
                for (std::size_t li = 0; li < ls.size(); ++li) {
                    const cplx r = rho[j * ls.size() + li];
                    if (r == 0.0) continue;
                    const auto& l = ls[li];
                    double l2 = 0.0, lk = 0.0;
                    for (int a = 0; a < d; ++a) {
                        const int la = l[std::size_t(a)];
                        kl[std::size_t(a)] = k[std::size_t(a)] - la;
                        xi[std::size_t(a)] = t * k[std::size_t(a)] - s * la;
                        l2 += double(la) * la;
                        lk += double(la) * k[std::size_t(a)];
                    }
                    if (lk == 0.0) continue;
                    integral += w * r * history.value(s, kl, xi) * (lk / l2);
                }
            }
            value -= norm * integral;
            out.at(i, ki) = value;
        }
    });
    return out;
}

DensitySeries volterra_solve(const VolterraKernel& kernel, const DensitySeries& n_hat, VolterraDirection direction) {
    const std::size_t n = n_hat.n_t;
    if (n == 0) throw ArgumentError("density series is empty");
    if (n > 1 && !(n_hat.dt > 0.0)) throw ArgumentError("density series time step must be positive");
    for (const auto& k : n_hat.k_list)
        if (int(k.size()) != kernel.equilibrium().dim()) throw ArgumentError("k vector has the wrong dimension");
    DensitySeries out = n_hat;
    const double dt = n_hat.dt;
    parallel_for(n_hat.n_k(), [&](std::size_t ki) {
        const auto& k = n_hat.k_list[ki];
        // Kernel samples at lags m·dt (forward) or -m·dt (final state).
        const double sign = direction == VolterraDirection::forward ? 1.0 : -1.0;
        std::vector<cplx> K(n);
        for (std::size_t m = 0; m < n; ++m) K[m] = kernel.lag(sign * double(m) * dt, k);
        if (direction == VolterraDirection::forward) {
            for (std::size_t i = 1; i < n; ++i) {
                cplx acc = 0.0;
                for (std::size_t j = 0; j < i; ++j) acc += (j == 0 ? 0.5 : 1.0) * K[i - j] * out.at(j, ki);
                out.at(i, ki) = n_hat.at(i, ki) - dt * acc;
            }
        } else {
            for (std::size_t i = n - 1; i-- > 0;) {
                cplx acc = 0.0;
                for (std::size_t j = i + 1; j < n; ++j) acc += (j == n - 1 ? 0.5 : 1.0) * K[j - i] * out.at(j, ki);
                out.at(i, ki) = n_hat.at(i, ki) + dt * acc;
            }
        }
    });
    return out;
}

DensitySeries representation(const DensitySeries& n_hat, const GreenTable& green, VolterraDirection direction,
                             const RepresentationOptions& opt, std::vector<std::vector<int>>* fallbacks) {
    const std::size_t n = n_hat.n_t;
    if (n == 0) throw ArgumentError("density series is empty");
    if (n > 1 && !(n_hat.dt > 0.0)) throw ArgumentError("density series time step must be positive");
    const double dt = n_hat.dt;
    std::size_t ratio = 1;
    if (n > 1) {
        if (!(green.ds > 0.0)) throw ArgumentError("Green table step must be positive");
        const double r = dt / green.ds;
        ratio = std::size_t(std::llround(r));
        if (ratio == 0 || std::abs(r - double(ratio)) > 1e-9 * r)
            throw ArgumentError("Green table step must divide the density time step");
        if ((n - 1) * ratio >= green.n_s)
            throw ArgumentError("Green table covers s <= " + std::to_string(green.s_max()) + " but lags up to " +
                                std::to_string(double(n - 1) * dt) + " are needed");
    }
    std::vector<std::size_t> rows(n_hat.n_k());
    for (std::size_t ki = 0; ki < n_hat.n_k(); ++ki) {
        auto k = n_hat.k_list[ki];
        if (direction == VolterraDirection::final_state)
            for (int& c : k) c = -c;
        int idx = green.find(k);
        if (idx < 0 && direction == VolterraDirection::final_state && opt.radial_fallback) {
            idx = green.find(n_hat.k_list[ki]);
            if (idx >= 0 && fallbacks) fallbacks->push_back(n_hat.k_list[ki]);
        }
        if (idx < 0) {
            std::string ks;
            for (int c : k) ks += (ks.empty() ? "" : ",") + std::to_string(c);
            throw ArgumentError("Green table has no entry for k = (" + ks + ")");
        }
        rows[ki] = std::size_t(idx);
    }
    DensitySeries out = n_hat;
    parallel_for(n_hat.n_k(), [&](std::size_t ki) {
        const std::size_t gk = rows[ki];
        for (std::size_t i = 0; i < n; ++i) {
            cplx acc = 0.0;
            if (direction == VolterraDirection::forward) {
                for (std::size_t j = 0; j <= i; ++j) {
                    const double w = (j == 0 || j == i) ? 0.5 : 1.0;
                    acc += w * n_hat.at(j, ki) * green.at(gk, (i - j) * ratio);
                }
            } else {
                for (std::size_t j = i; j < n; ++j) {
                    const double w = (j == i || j == n - 1) ? 0.5 : 1.0;
                    acc += w * n_hat.at(j, ki) * green.at(gk, (j - i) * ratio);
                }
            }
            out.at(i, ki) = n_hat.at(i, ki) - dt * acc;
        }
    });
    return out;
}

double max_abs_difference(const DensitySeries& a, const DensitySeries& b) {
    if (a.n_t != b.n_t || a.k_list != b.k_list) throw ArgumentError("density series have different shapes");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.rho.size(); ++i) worst = std::max(worst, std::abs(a.rho[i] - b.rho[i]));
    return worst;
}

}  // namespace landau
