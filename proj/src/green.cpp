#include "landau/green.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "landau/fft.hpp"

namespace landau {

namespace {

// Rational model with the same large-τ expansion as L' up to O(τ^-4):
// a2/(p+c)^2 + a3/(p+c)^3 + a4/(p+c)^4 with p = iτ. Its inverse transform
// is supported on s ≥ 0 and known in closed form, so only the O(τ^-5)
// residual is integrated numerically.
struct Model {
    double c = 1.0;
    cplx a2{}, a3{}, a4{};

    Model(const RayProfile& ray) {
        c = 1.0 / ray.scale();
        const cplx m0 = ray.d0(), m1 = ray.d1(), m2 = ray.d2();
        a2 = m0;
        a3 = 2.0 * m1 + 2.0 * c * m0;
        a4 = 3.0 * m2 - m0 * m0 - 3.0 * c * c * m0 + 3.0 * c * a3;
    }
    cplx hat(double tau) const {
        const cplx q = 1.0 / (cplx(c, tau));
        const cplx q2 = q * q;
        return q2 * (a2 + q * (a3 + q * a4));
    }
    cplx time(double s) const {
        if (s <= 0.0) return 0.0;
        return std::exp(-c * s) * (a2 * s + a3 * (s * s / 2.0) + a4 * (s * s * s / 6.0));
    }
};

struct Residual {
    DispersionFunction fn;
    Model model;

    Residual(const EquilibriumSpec& eq, const std::vector<int>& k, const quad::Options& q)
        : fn(eq, k, q), model(fn.ray()) {}

    cplx operator()(double tau, double* one_plus_L = nullptr) const {
        const cplx l = fn.L_auto(tau);
        const cplx z = 1.0 + l;
        if (one_plus_L) *one_plus_L = std::abs(z);
        if (std::abs(z) <= 1e-12)
            throw InstabilityError("Penrose near-violation while sampling L': |1+L| = " + std::to_string(std::abs(z)) +
                                   " at tau = " + std::to_string(tau));
        return l / z - model.hat(tau);
    }
};

// Cutoff so that the residual tail beyond ±T (decaying like τ^-5) contributes
// less than tol/(2π)·2π to the inverse transform.
double choose_cutoff(const Residual& r, double knorm, const GreenOptions& opt, double& tail, bool& warn) {
    double T = std::max(opt.t_cut_min, opt.t_cut_per_k * knorm);
    warn = false;
    while (true) {
        double peak = 0.0;
        for (double f : {1.0, 1.05, 1.1, 1.2}) {
            peak = std::max(peak, std::abs(r(f * T)));
            peak = std::max(peak, std::abs(r(-f * T)));
        }
        // ∫_T^∞ C τ^-5 dτ = C T^-4/4 = |R(T)| T/4, two sides, divided by 2π.
        tail = 2.0 * peak * T / 4.0 / (2.0 * pi);
        if (tail < opt.tail_tol) return T;
        if (2.0 * T > opt.t_cut_max) {
            warn = true;
            return T;
        }
        T *= 2.0;
    }
}

bool is_integer(double x) { return std::abs(x - std::round(x)) <= 1e-9 * std::max(1.0, std::abs(x)); }

}  // namespace

std::vector<cplx> green_function(const EquilibriumSpec& eq, const std::vector<int>& k, const UniformGrid& grid,
                                 const GreenOptions& opt, GreenModeMeta* meta) {
    if (int(k.size()) != eq.dim()) throw ArgumentError("mode k has wrong dimension");
    if (std::all_of(k.begin(), k.end(), [](int x) { return x == 0; }))
        throw ArgumentError("Green's function needs k != 0");
    if (!(grid.step > 0.0)) throw ArgumentError("s-grid step must be positive");
    std::vector<cplx> out(grid.count, 0.0);
    GreenModeMeta local;
    local.k = k;
    if (eq.kind() == EquilibriumKind::vacuum || grid.count == 0) {
        local.min_one_plus_L = 1.0;
        if (meta) *meta = local;
        return out;
    }
    Residual res(eq, k, opt.quad);
    const double knorm = res.fn.knorm();
    double tail = 0.0;
    bool warn = false;
    const double T = choose_cutoff(res, knorm, opt, tail, warn);
    // The τ-spacing sets the alias period 2π/Δτ in s; the floor of 20 keeps
    // aliased copies of the s > 0 part away from short or negative grids.
    const double s_abs = std::max({std::abs(grid.start), std::abs(grid.last()), grid.step, 20.0});
    const double dtau_max = pi / (2.0 * s_abs);
    const bool symmetric = eq.real_valued();

    const int m = std::max(1, int(std::ceil(grid.step * T / pi)));
    const double ds_fine = grid.step / m;
    const double n0 = grid.start / ds_fine;
    const double period = 2.0 * pi / ds_fine;
    std::size_t N = std::size_t(std::ceil(period / dtau_max));
    N += N % 2;
    const double dtau = period / double(N);

    local.t_cut = T;
    local.d_tau = dtau;
    local.tail_bound = tail;
    local.accuracy_warning = warn;

    // τ_j = -P/2 + jΔτ, sampled where |τ_j| ≤ T.
    std::vector<cplx> R(N, 0.0);
    std::vector<double> modulus(N, std::numeric_limits<double>::infinity());
    const std::size_t half = N / 2;
    std::size_t jmax = half + std::size_t(std::floor(T / dtau));
    jmax = std::min(jmax, N - 1);
    std::size_t jmin = N - jmax;
    std::vector<std::size_t> todo;
    for (std::size_t j = symmetric ? half : jmin; j <= jmax; ++j) todo.push_back(j);
    parallel_for(todo.size(), [&](std::size_t i) {
        const std::size_t j = todo[i];
        R[j] = res(-0.5 * period + double(j) * dtau, &modulus[j]);
    });
    if (symmetric)
        for (std::size_t j = half + 1; j <= jmax; ++j) R[N - j] = std::conj(R[j]);
    local.tau_samples = symmetric ? 2 * (jmax - half) + 1 : jmax - jmin + 1;
    local.min_one_plus_L = *std::min_element(modulus.begin(), modulus.end());

    const double scale = dtau / (2.0 * pi);
    if (is_integer(n0)) {
        FftPlan plan({int(N)}, 1, 1, int(N), +1);
        plan.execute(R.data());
        const long base = std::lround(n0);
        for (std::size_t i = 0; i < grid.count; ++i) {
            const long n = base + long(i) * m;
            const long idx = ((n % long(N)) + long(N)) % long(N);
            const double sign = (std::abs(n) % 2 == 0) ? 1.0 : -1.0;
            out[i] = scale * sign * R[std::size_t(idx)] + res.model.time(grid.at(i));
        }
    } else {
        for (std::size_t i = 0; i < grid.count; ++i) {
            const double s = grid.at(i);
            cplx acc = 0.0;
            for (std::size_t j = jmin; j <= jmax; ++j) {
                const double tau = -0.5 * period + double(j) * dtau;
                acc += R[j] * cplx(std::cos(s * tau), std::sin(s * tau));
            }
            out[i] = scale * acc + res.model.time(s);
        }
    }
    if (meta) *meta = local;
    return out;
}

cplx green_function_direct(const EquilibriumSpec& eq, const std::vector<int>& k, double s, const GreenOptions& opt) {
    if (eq.kind() == EquilibriumKind::vacuum) return 0.0;
    Residual res(eq, k, opt.quad);
    double tail = 0.0;
    bool warn = false;
    const double T = choose_cutoff(res, res.fn.knorm(), opt, tail, warn);
    const double width = std::min(T / 8.0, s != 0.0 ? 2.0 * pi / std::abs(s) : T / 8.0);
    std::vector<double> bp;
    const int panels = int(std::ceil(2.0 * T / width));
    for (int i = 0; i <= panels; ++i) bp.push_back(-T + 2.0 * T * double(i) / panels);
    quad::Options q;
    q.rel_tol = 1e-10;
    q.abs_tol = 1e-11;
    const auto r = quad::adaptive([&](double tau) { return res(tau) * cplx(std::cos(s * tau), std::sin(s * tau)); },
                                  bp, q);
    return r.value / (2.0 * pi) + res.model.time(s);
}

int GreenTable::find(const std::vector<int>& k) const {
    for (std::size_t i = 0; i < k_list.size(); ++i)
        if (k_list[i] == k) return int(i);
    return -1;
}

GreenTable build_green_table(const EquilibriumSpec& eq, const std::vector<std::vector<int>>& k_list, double s_max,
                             double ds, const GreenOptions& opt) {
    if (k_list.empty()) throw ArgumentError("Green table needs at least one mode");
    if (!(ds > 0.0) || !(s_max > 0.0)) throw ArgumentError("Green table needs positive s_max and ds");
    GreenTable t;
    t.k_list = k_list;
    t.ds = ds;
    t.n_s = std::size_t(std::llround(s_max / ds)) + 1;
    t.tail_tol = opt.tail_tol;
    t.values.assign(k_list.size() * t.n_s, 0.0);
    t.meta.resize(k_list.size());
    UniformGrid g{0.0, ds, t.n_s};
    for (std::size_t i = 0; i < k_list.size(); ++i) {
        auto col = green_function(eq, k_list[i], g, opt, &t.meta[i]);
        std::copy(col.begin(), col.end(), t.values.begin() + std::ptrdiff_t(i * t.n_s));
    }
    return t;
}

GreenDecayReport verify_green_decay(const GreenTable& table, double lambda0) {
    if (table.k_list.empty() || table.n_s == 0) throw ArgumentError("Green table is empty");
    GreenDecayReport rep;
    rep.c_fit = 0.0;
    rep.worst_slope = -std::numeric_limits<double>::infinity();
    bool ok = true;
    bool any_fit = false;
    for (std::size_t ki = 0; ki < table.k_list.size(); ++ki) {
        const double knorm = norm2(std::span<const int>(table.k_list[ki]));
        std::vector<double> x(table.n_s), mag(table.n_s);
        for (std::size_t i = 0; i < table.n_s; ++i) {
            const double s = table.ds * double(i);
            x[i] = std::cbrt(s * knorm);
            mag[i] = std::abs(table.at(ki, i));
            rep.c_fit = std::max(rep.c_fit, mag[i] * std::exp(0.95 * lambda0 * x[i]));
        }
        // Envelope: max of |Ĝ| over all later times.
        std::vector<double> env(mag);
        for (std::size_t i = table.n_s - 1; i-- > 0;) env[i] = std::max(env[i], env[i + 1]);
        const double peak = env.empty() ? 0.0 : env.front();
        if (peak == 0.0) continue;
        std::vector<std::size_t> keep;
        for (std::size_t i = 0; i < table.n_s; ++i)
            if (env[i] >= 1e-10 * peak) keep.push_back(i);
        if (keep.size() < 6) continue;
        const std::size_t from = keep.size() - keep.size() / 3;
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        double n = 0;
        for (std::size_t j = from; j < keep.size(); ++j) {
            const double xv = x[keep[j]], yv = std::log(env[keep[j]]);
            sx += xv;
            sy += yv;
            sxx += xv * xv;
            sxy += xv * yv;
            n += 1;
        }
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        any_fit = true;
        rep.worst_slope = std::max(rep.worst_slope, slope);
        if (!(slope <= -0.95 * lambda0 + 0.05 * lambda0)) ok = false;
    }
    if (!any_fit) rep.worst_slope = 0.0;
    rep.passes = ok && std::isfinite(rep.c_fit);
    return rep;
}

}  // namespace landau
