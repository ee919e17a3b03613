#include <algorithm>
#include <cmath>

#include "landau/fft.hpp"
#include "landau/kinetics.hpp"

namespace landau {

namespace {

std::size_t ipow(int n, int d) {
    std::size_t r = 1;
    for (int i = 0; i < d; ++i) r *= std::size_t(n);
    return r;
}

// Signed frequency index of DFT bin q (the Nyquist bin maps to -n/2).
int signed_bin(int q, int n) { return q < n / 2 ? q : q - n; }

// Multi-index (row-major) of a flat index.
void unflatten(std::size_t flat, int n, int d, int* out) {
    for (int a = d - 1; a >= 0; --a) {
        out[a] = int(flat % std::size_t(n));
        flat /= std::size_t(n);
    }
}

}  // namespace

void PhaseGrid::validate() const {
    if (d < 1 || d > 3) throw ArgumentError("phase grid dimension must be 1, 2 or 3");
    if (n_x < 2) throw ArgumentError("phase grid n_x must be >= 2");
    if (n_v < 4 || n_v % 2 != 0) throw ArgumentError("phase grid n_v must be even and >= 4");
    if (!(v_max > 0.0) || !std::isfinite(v_max)) throw ArgumentError("phase grid v_max must be positive");
}

std::size_t PhaseGrid::x_points() const { return ipow(n_x, d); }
std::size_t PhaseGrid::v_points() const { return ipow(n_v, d); }
double PhaseGrid::cell() const { return std::pow(dx() * dv(), d); }

PhaseState::PhaseState(const PhaseGrid& g, double t0) : grid(g), t(t0) {
    g.validate();
    f.assign(g.size(), 0.0);
}

struct SplitStepper::Impl {
    PhaseGrid g;
    const EquilibriumSpec* eq;
    SplitStepOptions opt;
    std::size_t XP, VP;
    FftPlan x_fwd, x_bwd, v_fwd, v_bwd, rho_fwd, rho_bwd;
    std::vector<cplx> work;
    std::vector<cplx> m0term;           // M̂0(ξ_q) e^{-iξ_q·V}/Δv^d per v-bin
    std::vector<std::vector<double>> xi_bin;  // per v-bin, per axis
    std::vector<std::vector<double>> k_bin;   // per x-bin, per axis
    std::vector<std::uint8_t> x_keep, v_keep;
    double cached_half = std::numeric_limits<double>::quiet_NaN();
    std::vector<cplx> transport;        // e^{-ik·v h/2}, x-bin-major
    double m0_peak = 0.0;

    Impl(const PhaseGrid& grid, const EquilibriumSpec& e, const SplitStepOptions& o)
        : g(grid), eq(&e), opt(o), XP(grid.x_points()), VP(grid.v_points()),
          x_fwd(std::vector<int>(std::size_t(grid.d), grid.n_x), int(VP), int(VP), 1, -1),
          x_bwd(std::vector<int>(std::size_t(grid.d), grid.n_x), int(VP), int(VP), 1, +1),
          v_fwd(std::vector<int>(std::size_t(grid.d), grid.n_v), int(XP), 1, int(VP), -1),
          v_bwd(std::vector<int>(std::size_t(grid.d), grid.n_v), int(XP), 1, int(VP), +1),
          rho_fwd(std::vector<int>(std::size_t(grid.d), grid.n_x), 1, 1, int(XP), -1),
          rho_bwd(std::vector<int>(std::size_t(grid.d), grid.n_x), 1, 1, int(XP), +1) {
        const int d = g.d;
        const double dxi = pi / g.v_max;
        std::vector<int> idx(static_cast<std::size_t>(d));
        m0term.resize(VP);
        xi_bin.resize(VP);
        v_keep.resize(VP);
        for (std::size_t q = 0; q < VP; ++q) {
            unflatten(q, g.n_v, d, idx.data());
            std::vector<double> xi(static_cast<std::size_t>(d));
            double phase = 0.0;
            bool keep = true;
            for (int a = 0; a < d; ++a) {
                const int s = signed_bin(idx[std::size_t(a)], g.n_v);
                xi[std::size_t(a)] = s * dxi;
                phase -= xi[std::size_t(a)] * g.v_max;
                if (3 * std::abs(s) > g.n_v) keep = false;
            }
            m0term[q] = eq->fourier_value_or_zero(xi) * std::polar(1.0, phase) / std::pow(g.dv(), d);
            xi_bin[q] = std::move(xi);
            v_keep[q] = keep || !opt.dealias;
        }
        k_bin.resize(XP);
        x_keep.resize(XP);
        for (std::size_t q = 0; q < XP; ++q) {
            unflatten(q, g.n_x, d, idx.data());
            std::vector<double> k(static_cast<std::size_t>(d));
            bool keep = true;
            for (int a = 0; a < d; ++a) {
                const int s = signed_bin(idx[std::size_t(a)], g.n_x);
                k[std::size_t(a)] = s;
                if (3 * std::abs(s) > g.n_x) keep = false;
            }
            k_bin[q] = std::move(k);
            x_keep[q] = keep || !opt.dealias;
        }
        work.resize(g.size());
        for (double m : equilibrium_in_velocity(g, e)) m0_peak = std::max(m0_peak, std::abs(m));
    }

    void prepare_transport(double half) {
        if (half == cached_half) return;
        const int d = g.d;
        transport.resize(g.size());
        std::vector<int> iv(static_cast<std::size_t>(d));
        for (std::size_t q = 0; q < XP; ++q) {
            for (std::size_t v = 0; v < VP; ++v) {
                unflatten(v, g.n_v, d, iv.data());
                double kv = 0.0;
                for (int a = 0; a < d; ++a) kv += k_bin[q][std::size_t(a)] * g.v(iv[std::size_t(a)]);
                transport[q * VP + v] = x_keep[q] ? std::polar(1.0 / double(XP), -kv * half) : 0.0;
            }
        }
        cached_half = half;
    }

    void half_transport() {
        x_fwd.execute(work.data());
        for (std::size_t i = 0; i < work.size(); ++i) work[i] *= transport[i];
        x_bwd.execute(work.data());
    }

    void push(double h) {
        const int d = g.d;
        // Density and field on the x-grid.
        std::vector<cplx> rho(XP, 0.0);
        const double dvd = std::pow(g.dv(), d);
        for (std::size_t x = 0; x < XP; ++x) {
            double s = 0.0;
            for (std::size_t v = 0; v < VP; ++v) s += work[x * VP + v].real();
            rho[x] = s * dvd;
        }
        std::vector<std::vector<cplx>> E(std::size_t(d), std::vector<cplx>(XP, 0.0));
        if (opt.field) {
            rho_fwd.execute(rho.data());
            for (int a = 0; a < d; ++a) {
                auto& e = E[std::size_t(a)];
                for (std::size_t q = 0; q < XP; ++q) {
                    double k2 = 0.0;
                    for (double kc : k_bin[q]) k2 += kc * kc;
                    if (k2 == 0.0 || !x_keep[q]) continue;
                    e[q] = -cplx(0.0, 1.0) * k_bin[q][std::size_t(a)] * rho[q] / (k2 * double(XP));
                }
                rho_bwd.execute(e.data());
            }
        }
        v_fwd.execute(work.data());
        const double norm = 1.0 / double(VP);
        for (std::size_t x = 0; x < XP; ++x) {
            cplx* row = work.data() + x * VP;
            for (std::size_t q = 0; q < VP; ++q) {
                if (!v_keep[q]) {
                    row[q] = 0.0;
                    continue;
                }
                double xe = 0.0;
                for (int a = 0; a < d; ++a) xe += xi_bin[q][std::size_t(a)] * E[std::size_t(a)][x].real();
                const cplx ph = std::polar(1.0, -xe * h);
                row[q] = (ph * row[q] + (ph - 1.0) * m0term[q]) * norm;
            }
        }
        v_bwd.execute(work.data());
    }
};

SplitStepper::SplitStepper(const PhaseGrid& grid, const EquilibriumSpec& eq, const SplitStepOptions& opt) {
    grid.validate();
    if (eq.dim() != grid.d) throw ArgumentError("equilibrium dimension does not match the phase grid");
    impl_ = std::make_unique<Impl>(grid, eq, opt);
}

SplitStepper::~SplitStepper() = default;

void SplitStepper::step(PhaseState& s, double dt) {
    auto& im = *impl_;
    if (s.f.size() != im.g.size()) throw ArgumentError("phase state does not match the stepper grid");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ArgumentError("split-step dt must be positive");
    for (std::size_t i = 0; i < s.f.size(); ++i) im.work[i] = s.f[i];
    im.prepare_transport(0.5 * dt);
    im.half_transport();
    im.push(dt);
    im.half_transport();
    for (std::size_t i = 0; i < s.f.size(); ++i) s.f[i] = im.work[i].real();
    s.t += dt;
    const double ratio = phase_boundary_ratio(s, im.m0_peak);
    if (!std::isfinite(ratio) || ratio > im.opt.boundary_threshold)
        throw DomainError("phase-space solution reached the velocity boundary at t = " + format_double(s.t) +
                          " (edge/peak ratio " + format_double(ratio) + " > " +
                          format_double(im.opt.boundary_threshold) + ")");
}

void SplitStepper::run(PhaseState& s, double t_end, double dt) {
    if (!(dt > 0.0)) throw ArgumentError("split-step dt must be positive");
    const double span = t_end - s.t;
    if (span < 0.0) throw ArgumentError("split-step end time precedes the state time");
    if (span == 0.0) return;
    const std::size_t n = std::size_t(std::ceil(span / dt - 1e-9));
    const double h = span / double(n);
    const double t0 = s.t;
    for (std::size_t i = 0; i < n; ++i) {
        step(s, h);
        s.t = t0 + h * double(i + 1);
    }
}

PhaseState split_step(const PhaseState& s, const EquilibriumSpec& eq, double dt, const SplitStepOptions& opt) {
    SplitStepper st(s.grid, eq, opt);
    PhaseState out = s;
    st.step(out, dt);
    return out;
}

GlideState profile_from_phase(const PhaseState& s, int K) {
    const auto& g = s.grid;
    g.validate();
    if (K < 1 || 2 * K >= g.n_x) throw ArgumentError("profile K must satisfy 1 <= K < n_x/2");
    const int d = g.d;
    const std::size_t VP = g.v_points();
    std::vector<cplx> work(s.f.begin(), s.f.end());
    FftPlan x_fwd(std::vector<int>(std::size_t(d), g.n_x), int(VP), int(VP), 1, -1);
    FftPlan v_fwd(std::vector<int>(std::size_t(d), g.n_v), 1, 1, int(VP), -1);
    x_fwd.execute(work.data());

    const FourierGrid fg = g.fourier_grid(K);
    GlideState out(fg, s.t);
    const double dxd = std::pow(g.dx(), d), dvd = std::pow(g.dv(), d);
    const double dxi = fg.dxi();
    const double top = fg.xi_max - dxi;
    std::vector<int> iv(static_cast<std::size_t>(d)), jn(static_cast<std::size_t>(d));
    std::vector<cplx> row(VP);
    for (std::size_t m = 0; m < fg.num_modes(); ++m) {
        const auto k = fg.mode(m);
        std::size_t q = 0;
        for (int a = 0; a < d; ++a) q = q * std::size_t(g.n_x) + std::size_t((k[std::size_t(a)] + g.n_x) % g.n_x);
        for (std::size_t v = 0; v < VP; ++v) {
            unflatten(v, g.n_v, d, iv.data());
            double kv = 0.0;
            for (int a = 0; a < d; ++a) kv += k[std::size_t(a)] * g.v(iv[std::size_t(a)]);
            row[v] = work[q * VP + v] * std::polar(dxd, s.t * kv);
        }
        v_fwd.execute(row.data());
        for (std::size_t j = 0; j < fg.row_size(); ++j) {
            unflatten(j, fg.n_xi, d, jn.data());
            std::size_t bin = 0;
            double phase = 0.0;
            bool inside = true;
            for (int a = 0; a < d; ++a) {
                const double xi = fg.xi(jn[std::size_t(a)]);
                const double src = xi - s.t * k[std::size_t(a)];
                if (src < -fg.xi_max - 1e-9 * dxi || src > top + 1e-9 * dxi) inside = false;
                bin = bin * std::size_t(g.n_v) + std::size_t((jn[std::size_t(a)] - g.n_v / 2 + g.n_v) % g.n_v);
                phase += xi * g.v_max;
            }
            out.at(m, j) = inside ? row[bin] * std::polar(dvd, phase) : 0.0;
        }
    }
    return out;
}

std::vector<double> equilibrium_in_velocity(const PhaseGrid& g, const EquilibriumSpec& eq) {
    g.validate();
    const int d = g.d;
    const std::size_t VP = g.v_points();
    const double dxi = pi / g.v_max;
    std::vector<cplx> buf(VP);
    std::vector<int> idx(static_cast<std::size_t>(d));
    std::vector<double> xi(static_cast<std::size_t>(d));
    for (std::size_t q = 0; q < VP; ++q) {
        unflatten(q, g.n_v, d, idx.data());
        double phase = 0.0;
        for (int a = 0; a < d; ++a) {
            xi[std::size_t(a)] = signed_bin(idx[std::size_t(a)], g.n_v) * dxi;
            phase -= xi[std::size_t(a)] * g.v_max;
        }
        buf[q] = eq.fourier_value_or_zero(xi) * std::polar(1.0, phase);
    }
    FftPlan bwd(std::vector<int>(std::size_t(d), g.n_v), 1, 1, int(VP), +1);
    bwd.execute(buf.data());
    const double norm = std::pow(dxi / (2.0 * pi), d);
    std::vector<double> out(VP);
    for (std::size_t v = 0; v < VP; ++v) out[v] = buf[v].real() * norm;
    return out;
}

double phase_mass(const PhaseState& s) {
    double sum = 0.0;
    for (double x : s.f) sum += x;
    return sum * s.grid.cell();
}

double phase_total_l2(const PhaseState& s, const std::vector<double>& m0) {
    const std::size_t VP = s.grid.v_points();
    if (m0.size() != VP) throw ArgumentError("equilibrium samples do not match the v-grid");
    double sum = 0.0;
    for (std::size_t i = 0; i < s.f.size(); ++i) {
        const double v = s.f[i] + m0[i % VP];
        sum += v * v;
    }
    return sum * s.grid.cell();
}

double phase_boundary_ratio(const PhaseState& s, double reference) {
    const auto& g = s.grid;
    const std::size_t VP = g.v_points();
    double peak = 0.0, edge = 0.0;
    std::vector<int> iv(static_cast<std::size_t>(g.d));
    for (std::size_t i = 0; i < s.f.size(); ++i) {
        const double a = std::abs(s.f[i]);
        if (!std::isfinite(a)) return std::numeric_limits<double>::infinity();
        peak = std::max(peak, a);
        unflatten(i % VP, g.n_v, g.d, iv.data());
        for (int x : iv)
            if (x == 0 || x == g.n_v - 1) {
                edge = std::max(edge, a);
                break;
            }
    }
    peak = std::max(peak, reference);
    return peak > 0.0 ? edge / peak : 0.0;
}

PhaseState cosine_mode_phase(const PhaseGrid& g, double eps, const std::vector<int>& k0, double sigma) {
    g.validate();
    if (int(k0.size()) != g.d) throw ArgumentError("initial mode has the wrong dimension");
    if (!(sigma > 0.0)) throw ArgumentError("initial data width must be positive");
    PhaseState s(g, 0.0);
    const std::size_t VP = g.v_points();
    const double norm = std::pow(2.0 * pi * sigma * sigma, -0.5 * g.d);
    std::vector<int> ix(static_cast<std::size_t>(g.d)), iv(static_cast<std::size_t>(g.d));
    for (std::size_t x = 0; x < g.x_points(); ++x) {
        unflatten(x, g.n_x, g.d, ix.data());
        double kx = 0.0;
        for (int a = 0; a < g.d; ++a) kx += k0[std::size_t(a)] * g.x(ix[std::size_t(a)]);
        const double c = eps * std::cos(kx);
        for (std::size_t v = 0; v < VP; ++v) {
            unflatten(v, g.n_v, g.d, iv.data());
            double r2 = 0.0;
            for (int a = 0; a < g.d; ++a) r2 += g.v(iv[std::size_t(a)]) * g.v(iv[std::size_t(a)]);
            s.f[x * VP + v] = c * norm * std::exp(-0.5 * r2 / (sigma * sigma));
        }
    }
    return s;
}

}  // namespace landau
