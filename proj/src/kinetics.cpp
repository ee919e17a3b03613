#include "landau/kinetics.hpp"

#include <algorithm>
#include <cmath>

namespace landau {

namespace {

DensityEval density_impl(const GlideState& s, const XiInterpolator& interp) {
    const auto& g = s.grid;
    DensityEval out;
    out.rho.assign(g.num_modes(), 0.0);
    out.stale.assign(g.num_modes(), 0);
    const std::size_t zero = g.zero_mode();
    std::vector<double> xi(static_cast<std::size_t>(g.d));
    for (std::size_t m = 0; m < g.num_modes(); ++m) {
        if (m == zero) continue;
        const auto k = g.mode(m);
        for (int a = 0; a < g.d; ++a) xi[std::size_t(a)] = s.t * k[std::size_t(a)];
        if (!g.in_hull(xi)) {
            out.stale[m] = 1;
            ++out.stale_count;
            continue;
        }
        out.rho[m] = interp.point(s.row(m), xi);
    }
    return out;
}

double squared_norm(std::span<const int> k) {
    double s = 0.0;
    for (int x : k) s += double(x) * double(x);
    return s;
}

}  // namespace

DensityEval density_from_glide(const GlideState& s, InterpRule rule) {
    s.grid.validate();
    XiInterpolator interp(s.grid, rule);
    auto out = density_impl(s, interp);
    if (out.stale_count + 1 == s.grid.num_modes())
        throw HorizonError("every mode is past the horizon at t = " + std::to_string(s.t) + " (xi_max/K = " +
                           std::to_string(horizon_limit(s.grid)) + ")");
    return out;
}

GlideRhs::GlideRhs(const FourierGrid& grid, const EquilibriumSpec& eq, const GlideOptions& opt)
    : grid_(grid), eq_(&eq), opt_(opt), density_interp_(grid, opt.density_interp),
      shift_interp_(grid, opt.shift_interp) {
    grid_.validate();
    if (eq.dim() != grid.d) throw ArgumentError("equilibrium dimension does not match the grid");
    for (std::size_t m = 0; m < grid_.num_modes(); ++m) {
        modes_.push_back(grid_.mode(m));
        k2_.push_back(squared_norm(modes_.back()));
    }
}

void GlideRhs::evaluate(const GlideState& s, std::vector<cplx>& out, DensityEval* density) const {
    if (!(s.grid == grid_)) throw ArgumentError("state grid does not match the right-hand side");
    const int d = grid_.d;
    const int N = grid_.n_xi;
    const std::size_t M = grid_.num_modes();
    const std::size_t R = grid_.row_size();
    const std::size_t zero = grid_.zero_mode();
    const double t = s.t;
    out.assign(M * R, 0.0);

    DensityEval dens = density_impl(s, density_interp_);

    // Shift plans for every l whose density is live.
    std::vector<XiInterpolator::Shift> shifts(M);
    std::vector<std::size_t> live;
    if (opt_.nonlinear) {
        for (std::size_t l = 0; l < M; ++l) {
            if (l == zero || dens.stale[l] || dens.rho[l] == 0.0) continue;
            std::vector<double> a(static_cast<std::size_t>(d));
            for (int ax = 0; ax < d; ++ax) a[std::size_t(ax)] = t * modes_[l][std::size_t(ax)];
            shifts[l] = shift_interp_.prepare_shift(a);
            live.push_back(l);
        }
    }
    const double norm_nl = std::pow(2.0 * pi, -d);

    parallel_for(M, [&](std::size_t m) {
        const auto& k = modes_[m];
        cplx* o = out.data() + m * R;
        std::vector<double> eta(static_cast<std::size_t>(d));
        std::vector<double> xi(static_cast<std::size_t>(d));
        // Linear term: -ρ̂(k) M̂0(ξ - tk) k·(ξ - tk)/|k|².
        if (m != zero && dens.rho[m] != 0.0) {
            const cplx rk = dens.rho[m] / k2_[m];
            for (std::size_t j = 0; j < R; ++j) {
                std::size_t rem = j;
                double dot = 0.0;
                for (int ax = d - 1; ax >= 0; --ax) {
                    const int idx = int(rem % std::size_t(N));
                    rem /= std::size_t(N);
                    eta[std::size_t(ax)] = grid_.xi(idx) - t * k[std::size_t(ax)];
                    dot += k[std::size_t(ax)] * eta[std::size_t(ax)];
                }
                const cplx mv = eq_->fourier_value_or_zero(eta);
                if (mv != 0.0) o[j] -= rk * mv * dot;
            }
        }
        if (live.empty()) return;
        // Nonlinear term: -(2π)^{-d} Σ_l ρ̂(l) ĝ(k - l, ξ - tl) l·(ξ - tk)/|l|².
        std::vector<cplx> shifted(R), scratch(d > 1 ? R : 0);
        std::vector<int> kl(static_cast<std::size_t>(d));
        for (std::size_t l : live) {
            bool inside = true;
            for (int ax = 0; ax < d; ++ax) {
                kl[std::size_t(ax)] = k[std::size_t(ax)] - modes_[l][std::size_t(ax)];
                if (kl[std::size_t(ax)] < -grid_.K || kl[std::size_t(ax)] > grid_.K) inside = false;
            }
            if (!inside) continue;
            const std::size_t src = grid_.mode_index(kl);
            shift_interp_.apply_shift(shifts[l], s.row(src), shifted.data(), scratch.data());
            const cplx c = norm_nl * dens.rho[l] / k2_[l];
            const auto& lv = modes_[l];
            if (d == 1) {
                const double l0 = lv[0];
                const double tk = t * k[0];
                for (int j = 0; j < N; ++j) {
                    if (shifted[std::size_t(j)] == 0.0) continue;
                    o[j] -= c * shifted[std::size_t(j)] * (l0 * (grid_.xi(j) - tk));
                }
            } else {
                for (std::size_t j = 0; j < R; ++j) {
                    if (shifted[j] == 0.0) continue;
                    std::size_t rem = j;
                    double dot = 0.0;
                    for (int ax = d - 1; ax >= 0; --ax) {
                        const int idx = int(rem % std::size_t(N));
                        rem /= std::size_t(N);
                        dot += lv[std::size_t(ax)] * (grid_.xi(idx) - t * k[std::size_t(ax)]);
                    }
                    o[j] -= c * shifted[j] * dot;
                }
            }
        }
    });
    if (density) *density = std::move(dens);
}

std::vector<cplx> glide_rhs(const GlideState& s, const EquilibriumSpec& eq, const GlideOptions& opt) {
    GlideRhs rhs(s.grid, eq, opt);
    std::vector<cplx> out;
    rhs.evaluate(s, out);
    return out;
}

double boundary_magnitude(const GlideState& s, int width) {
    const auto& g = s.grid;
    const int N = g.n_xi;
    const std::size_t R = g.row_size();
    double worst = 0.0;
    for (std::size_t j = 0; j < R; ++j) {
        const auto idx = g.node(j);
        bool near = false;
        for (int x : idx)
            if (x < width || x >= N - width) near = true;
        if (!near) continue;
        for (std::size_t m = 0; m < g.num_modes(); ++m) worst = std::max(worst, std::abs(s.at(m, j)));
    }
    return worst;
}

GlideRun glide_integrate(GlideState state, const EquilibriumSpec& eq, double t_end, double dt,
                         const GlideOptions& opt) {
    const auto& g = state.grid;
    g.validate();
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ArgumentError("solver.dt must be positive");
    if (!std::isfinite(t_end)) throw ArgumentError("end time must be finite");
    const double sign = opt.direction == TimeDirection::forward ? 1.0 : -1.0;
    const double span = (t_end - state.t) * sign;
    if (span < 0.0)
        throw ArgumentError(opt.direction == TimeDirection::forward ? "end time precedes the start time"
                                                                    : "backward run needs an end time before the start");
    const std::size_t n = span == 0.0 ? 0 : std::size_t(std::ceil(span / dt - 1e-9));
    const double h = n == 0 ? 0.0 : (t_end - state.t) / double(n);
    const double t0 = state.t;

    GlideRhs rhs(g, eq, opt);
    XiInterpolator dens_interp(g, opt.density_interp);
    symmetrize(state);

    GlideRun run;
    const std::size_t M = g.num_modes();
    const std::size_t zero = g.zero_mode();
    std::vector<std::vector<int>> k_list;
    std::vector<std::size_t> k_index;
    for (std::size_t m = 0; m < M; ++m)
        if (m != zero) {
            k_list.push_back(g.mode(m));
            k_index.push_back(m);
        }
    if (opt.record_density) {
        run.series = DensitySeries(t0, h, n + 1, k_list);
        run.series.stale.assign(run.series.rho.size(), 0);
    }
    auto record = [&](std::size_t i, const GlideState& s) {
        if (!opt.record_density) return;
        const auto de = density_impl(s, dens_interp);
        for (std::size_t ki = 0; ki < k_index.size(); ++ki) {
            run.series.at(i, ki) = de.rho[k_index[ki]];
            run.series.stale[i * k_index.size() + ki] = de.stale[k_index[ki]];
        }
    };
    auto monitor = [&](const GlideState& s) {
        const double b = boundary_magnitude(s, opt.boundary_width);
        run.max_boundary = std::max(run.max_boundary, b);
        if (b > opt.boundary_threshold && !run.invalidated) {
            run.invalidated = true;
            run.invalidated_at = s.t;
        }
        run.max_reality_defect = std::max(run.max_reality_defect, reality_defect(s));
        run.max_neutrality_defect = std::max(run.max_neutrality_defect, neutrality_defect(s));
    };

    record(0, state);
    monitor(state);
    if (opt.history_every > 0) run.history.push_back(state);
    const double norm0 = std::max(l2_norm(state), 1e-300);

    std::vector<cplx> k1, k2, k3, k4;
    GlideState stage(g, t0);
    const std::size_t size = state.ghat.size();
    for (std::size_t step = 0; step < n; ++step) {
        const double t = t0 + h * double(step);
        const double last_good = state.t;
        state.t = t;
        rhs.evaluate(state, k1);
        stage.t = t + 0.5 * h;
        for (std::size_t i = 0; i < size; ++i) stage.ghat[i] = state.ghat[i] + 0.5 * h * k1[i];
        rhs.evaluate(stage, k2);
        for (std::size_t i = 0; i < size; ++i) stage.ghat[i] = state.ghat[i] + 0.5 * h * k2[i];
        rhs.evaluate(stage, k3);
        stage.t = t + h;
        for (std::size_t i = 0; i < size; ++i) stage.ghat[i] = state.ghat[i] + h * k3[i];
        rhs.evaluate(stage, k4);
        for (std::size_t i = 0; i < size; ++i)
            state.ghat[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        state.t = t0 + h * double(step + 1);
        symmetrize(state);

        const double nrm = l2_norm(state);
        if (!std::isfinite(nrm) || nrm > 1e12 * norm0)
            throw DivergenceError("gliding integration diverged at t = " + std::to_string(state.t), last_good);

        record(step + 1, state);
        monitor(state);
        if (opt.history_every > 0 && (step + 1) % opt.history_every == 0) run.history.push_back(state);
    }
    run.steps = n;
    run.state = std::move(state);
    return run;
}

FieldCoefficients poisson_field(const std::vector<std::vector<int>>& k_list, const std::vector<cplx>& rho_hat) {
    if (k_list.size() != rho_hat.size()) throw ArgumentError("k list and density sizes differ");
    FieldCoefficients f;
    f.k_list = k_list;
    f.rho_hat = rho_hat;
    for (std::size_t i = 0; i < k_list.size(); ++i) {
        const double k2 = squared_norm(k_list[i]);
        std::vector<cplx> e(k_list[i].size(), 0.0);
        if (k2 > 0.0)
            for (std::size_t a = 0; a < e.size(); ++a) e[a] = -cplx(0.0, 1.0) * double(k_list[i][a]) * rho_hat[i] / k2;
        f.E_hat.push_back(std::move(e));
    }
    return f;
}

std::vector<std::vector<cplx>> field_in_space(const FieldCoefficients& f, int n_x) {
    if (n_x < 1) throw ArgumentError("n_x must be positive");
    const std::size_t d = f.k_list.empty() ? 1 : f.k_list.front().size();
    std::size_t pts = 1;
    for (std::size_t a = 0; a < d; ++a) pts *= std::size_t(n_x);
    std::vector<std::vector<cplx>> E(d, std::vector<cplx>(pts, 0.0));
    const double dx = 2.0 * pi / n_x;
    const double norm = std::pow(2.0 * pi, -double(d));
    for (std::size_t p = 0; p < pts; ++p) {
        std::size_t rem = p;
        std::vector<double> x(d);
        for (std::size_t a = d; a-- > 0;) {
            x[a] = double(rem % std::size_t(n_x)) * dx;
            rem /= std::size_t(n_x);
        }
        for (std::size_t i = 0; i < f.k_list.size(); ++i) {
            double phase = 0.0;
            for (std::size_t a = 0; a < d; ++a) phase += f.k_list[i][a] * x[a];
            const cplx e = std::polar(norm, phase);
            for (std::size_t a = 0; a < d; ++a) E[a][p] += f.E_hat[i][a] * e;
        }
    }
    return E;
}

void save_glide_state(const std::string& path, const GlideState& s, const json& extra) {
    json h = extra.is_object() ? extra : json::object();
    h["kind"] = "glide_state";
    h["grid"] = {{"d", s.grid.d}, {"K", s.grid.K}, {"xi_max", s.grid.xi_max}, {"N_xi", s.grid.n_xi}};
    h["t"] = s.t;
    h["version"] = version_string;
    write_array_file(path, h, s.ghat);
}

GlideState load_glide_state(const std::string& path) {
    const auto file = read_array_file(path);
    const auto& h = file.header;
    if (h.value("kind", std::string()) != "glide_state") throw IoError(path + ": not a glide-state snapshot");
    if (!file.is_complex()) throw IoError(path + ": glide-state payload must be complex");
    FourierGrid g;
    try {
        const auto& gh = h.at("grid");
        g.d = gh.at("d").get<int>();
        g.K = gh.at("K").get<int>();
        g.xi_max = gh.at("xi_max").get<double>();
        g.n_xi = gh.at("N_xi").get<int>();
    } catch (const json::exception& e) {
        throw IoError(path + ": malformed grid header (" + e.what() + ")");
    }
    g.validate();
    GlideState s(g, h.value("t", 0.0));
    auto values = file.complex_values();
    if (values.size() != s.ghat.size()) throw IoError(path + ": payload size does not match the grid");
    s.ghat = std::move(values);
    return s;
}

GlideState cosine_mode_glide(const FourierGrid& grid, double eps, const std::vector<int>& k0, double sigma) {
    grid.validate();
    if (int(k0.size()) != grid.d || !grid.has_mode(k0)) throw ArgumentError("initial mode is outside the grid");
    if (!(sigma > 0.0)) throw ArgumentError("initial data width must be positive");
    if (std::all_of(k0.begin(), k0.end(), [](int x) { return x == 0; }))
        throw ArgumentError("initial mode must be nonzero (neutrality)");
    GlideState s(grid, 0.0);
    std::vector<int> neg(k0.size());
    for (std::size_t a = 0; a < k0.size(); ++a) neg[a] = -k0[a];
    // ∫ cos(k0·x) e^{-ik·x} dx = (2π)^d / 2 at k = ±k0.
    const double amp = 0.5 * eps * std::pow(2.0 * pi, grid.d);
    const std::size_t mp = grid.mode_index(k0), mn = grid.mode_index(neg);
    for (std::size_t j = 0; j < grid.row_size(); ++j) {
        const auto idx = grid.node(j);
        double r2 = 0.0;
        for (int x : idx) r2 += grid.xi(x) * grid.xi(x);
        const double v = amp * std::exp(-0.5 * sigma * sigma * r2);
        s.at(mp, j) += v;
        s.at(mn, j) += v;
    }
    return s;
}

GlideState impulse_glide(const FourierGrid& grid, const std::vector<int>& k0, const std::vector<int>& node, cplx c) {
    grid.validate();
    if (!grid.has_mode(k0)) throw ArgumentError("impulse mode is outside the grid");
    if (int(node.size()) != grid.d) throw ArgumentError("impulse node has the wrong dimension");
    std::size_t j = 0;
    for (int x : node) {
        if (x < 0 || x >= grid.n_xi) throw ArgumentError("impulse node is outside the grid");
        j = j * std::size_t(grid.n_xi) + std::size_t(x);
    }
    GlideState s(grid, 0.0);
    const std::size_t m = grid.mode_index(k0);
    s.at(m, j) += c;
    s.at(grid.mirror_mode(m), grid.mirror_node(j)) += std::conj(c);
    if (m == grid.zero_mode() && j == grid.zero_node()) s.at(m, j) = 0.0;
    return s;
}

}  // namespace landau
