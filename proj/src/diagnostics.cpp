#include "landau/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "landau/fft.hpp"
#include "landau/io.hpp"

namespace landau {

namespace {

std::vector<std::vector<int>> multi_indices(int d, int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> a(static_cast<std::size_t>(d), 0);
    while (true) {
        int sum = 0;
        for (int x : a) sum += x;
        if (sum <= n) out.push_back(a);
        int ax = d - 1;
        while (ax >= 0 && ++a[std::size_t(ax)] > n) {
            a[std::size_t(ax)] = 0;
            --ax;
        }
        if (ax < 0) break;
    }
    return out;
}

double log_bracket(std::span<const int> k, std::span<const double> xi) {
    double s = 1.0;
    for (int x : k) s += double(x) * x;
    for (double x : xi) s += x * x;
    return 0.5 * std::log(s);
}

// ξ-coordinates of a flat node index.
void node_xi(const FourierGrid& g, std::size_t j, double* xi) {
    for (int a = g.d - 1; a >= 0; --a) {
        xi[a] = g.xi(int(j % std::size_t(g.n_xi)));
        j /= std::size_t(g.n_xi);
    }
}

// Σ_i exp(logw_i)·v_i with a power-of-two rescaling, so scaling every v_i by
// a power of two scales the result exactly.
double weighted_sum(const std::vector<double>& logw, const std::vector<double>& v) {
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0.0) top = std::max(top, logw[i]);
    if (!std::isfinite(top)) return 0.0;
    const int e = int(std::floor(top / std::log(2.0)));
    const double shift = e * std::log(2.0);
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0.0) acc += std::exp(logw[i] - shift) * v[i];
    return std::ldexp(acc, e);
}

// Σ_{|a|≤n} |D^a ĝ|² per node of one row.
std::vector<double> derivative_power(const FourierGrid& g, const cplx* row, int n) {
    std::vector<double> out(g.row_size(), 0.0);
    for (const auto& a : multi_indices(g.d, n)) {
        const auto da = xi_derivative(g, row, a);
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += std::norm(da[j]);
    }
    return out;
}

}  // namespace

std::vector<cplx> xi_derivative(const FourierGrid& g, const cplx* row, std::span<const int> a) {
    g.validate();
    if (int(a.size()) != g.d) throw ArgumentError("derivative multi-index has the wrong dimension");
    const int N = g.n_xi;
    const std::size_t R = g.row_size();
    std::vector<cplx> out(row, row + R);
    const double dv = pi / g.xi_max;
    const double V = 0.5 * N * dv;
    std::vector<cplx> line(static_cast<std::size_t>(N));
    for (int ax = 0; ax < g.d; ++ax) {
        const int order = a[std::size_t(ax)];
        if (order < 0) throw ArgumentError("derivative order must be nonnegative");
        if (order == 0) continue;
        FftPlan fwd({N}, 1, 1, N, -1), bwd({N}, 1, 1, N, +1);
        std::vector<cplx> factor(static_cast<std::size_t>(N));
        for (int m = 0; m < N; ++m) factor[std::size_t(m)] = std::pow(cplx(0.0, -(-V + m * dv)), order) / double(N);
        std::size_t stride = 1;
        for (int b = ax + 1; b < g.d; ++b) stride *= std::size_t(N);
        const std::size_t outer = R / (stride * std::size_t(N));
        for (std::size_t o = 0; o < outer; ++o) {
            for (std::size_t in = 0; in < stride; ++in) {
                cplx* base = out.data() + o * stride * std::size_t(N) + in;
                for (int j = 0; j < N; ++j) line[std::size_t(j)] = (j % 2 ? -1.0 : 1.0) * base[std::size_t(j) * stride];
                bwd.execute(line.data());
                for (int m = 0; m < N; ++m) line[std::size_t(m)] *= factor[std::size_t(m)];
                fwd.execute(line.data());
                for (int j = 0; j < N; ++j) base[std::size_t(j) * stride] = (j % 2 ? -1.0 : 1.0) * line[std::size_t(j)];
            }
        }
    }
    return out;
}

double gevrey_norm(const GlideState& state, double lambda, double s_exp, int n) {
    const auto& g = state.grid;
    g.validate();
    if (n < 0 || n > derivative_order(g.d)) throw ArgumentError("derivative count must lie in [0, d']");
    if (!(s_exp > 0.0 && s_exp <= 1.0)) throw ArgumentError("Gevrey exponent must lie in (0, 1]");
    const std::size_t M = g.num_modes(), R = g.row_size();
    const double cell = std::pow(g.dxi(), g.d);
    std::vector<double> logw(M * R);
    std::vector<double> xi(static_cast<std::size_t>(g.d));
    for (std::size_t m = 0; m < M; ++m) {
        const auto k = g.mode(m);
        for (std::size_t j = 0; j < R; ++j) {
            node_xi(g, j, xi.data());
            const double r = std::exp(log_bracket(k, xi));
            logw[m * R + j] = 2.0 * lambda * std::pow(r, s_exp);
        }
    }
    double total = 0.0;
    for (const auto& a : multi_indices(g.d, n)) {
        std::vector<double> v(M * R);
        for (std::size_t m = 0; m < M; ++m) {
            const auto da = xi_derivative(g, state.row(m), a);
            for (std::size_t j = 0; j < R; ++j) v[m * R + j] = std::norm(da[j]) * cell;
        }
        total += std::sqrt(weighted_sum(logw, v));
    }
    return total;
}

double energy(const GlideState& state, double p, const WeightParams& params, const EnergyOptions& opt) {
    const auto& g = state.grid;
    g.validate();
    params.validate();
    if (!(p >= 0.0 && p <= 2.0)) throw ArgumentError("energy index p must lie in [0, 2]");
    const int n = opt.derivatives.value_or(derivative_order(g.d));
    const double t = opt.t_weight.value_or(state.t);
    const std::size_t M = g.num_modes(), R = g.row_size();
    const double cell = std::pow(g.dxi(), g.d);
    std::vector<double> logw(M * R), v(M * R);
    std::vector<double> xi(static_cast<std::size_t>(g.d));
    for (std::size_t m = 0; m < M; ++m) {
        const auto k = g.mode(m);
        std::vector<double> kd(k.begin(), k.end());
        const auto pw = derivative_power(g, state.row(m), n);
        for (std::size_t j = 0; j < R; ++j) {
            node_xi(g, j, xi.data());
            logw[m * R + j] = -2.0 * p * log_bracket(k, xi) + 2.0 * log_weight(params, t, kd, xi, opt.mollifier);
            v[m * R + j] = pw[j] * cell;
        }
    }
    return weighted_sum(logw, v);
}

ZNorm znorm(const GlideState& state, double p, double beta, const WeightParams& params, InterpRule rule) {
    const auto& g = state.grid;
    params.validate();
    const auto dens = density_from_glide(state, rule);
    ZNorm out;
    out.stale_modes = dens.stale_count;
    std::vector<double> xi(static_cast<std::size_t>(g.d));
    for (std::size_t m = 0; m < g.num_modes(); ++m) {
        if (m == g.zero_mode() || dens.stale[m]) continue;
        const auto k = g.mode(m);
        std::vector<double> kd(k.begin(), k.end());
        for (int a = 0; a < g.d; ++a) xi[std::size_t(a)] = state.t * k[std::size_t(a)];
        const double lw = -p * log_bracket(k, xi) + log_weight(params, state.t, kd, xi) - beta * std::log(norm2(k));
        const double val = std::abs(dens.rho[m]) == 0.0 ? 0.0 : std::exp(lw) * std::abs(dens.rho[m]);
        out.value = std::max(out.value, val);
        const bool edge = std::any_of(k.begin(), k.end(), [&](int c) { return std::abs(c) == g.K; });
        if (edge) out.boundary_value = std::max(out.boundary_value, val);
    }
    return out;
}

PointwiseReport pointwise_sup_check(const GlideState& state, double p, const WeightParams& params,
                                    const EnergyOptions& opt) {
    const auto& g = state.grid;
    params.validate();
    const int n = opt.derivatives.value_or(derivative_order(g.d));
    const double t = opt.t_weight.value_or(state.t);
    const std::size_t R = g.row_size();
    const double cell = std::pow(g.dxi(), g.d);
    PointwiseReport rep;
    std::vector<double> xi(static_cast<std::size_t>(g.d));
    for (std::size_t m = 0; m < g.num_modes(); ++m) {
        const auto k = g.mode(m);
        std::vector<double> kd(k.begin(), k.end());
        const auto pw = derivative_power(g, state.row(m), n);
        std::vector<double> logw(R), v(R);
        double h_log = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < R; ++j) {
            node_xi(g, j, xi.data());
            const double lw = -p * log_bracket(k, xi) + log_weight(params, t, kd, xi, opt.mollifier);
            logw[j] = 2.0 * lw;
            v[j] = pw[j] * cell;
            const double a = std::abs(state.at(m, j));
            if (a > 0.0) h_log = std::max(h_log, lw + std::log(a));
        }
        const double integrand = weighted_sum(logw, v);
        if (!(integrand > 0.0) || !std::isfinite(h_log)) continue;
        const double ratio = std::exp(h_log - 0.5 * std::log(integrand));
        if (ratio > rep.worst_ratio) {
            rep.worst_ratio = ratio;
            rep.worst_k = k;
        }
    }
    rep.fitted_c0 = rep.worst_ratio;
    return rep;
}

FunctionalSample functional_sample(const GlideState& state, const WeightParams& params,
                                   const FunctionalOptions& opt) {
    FunctionalSample s;
    s.t = state.t;
    s.direction = params.direction;
    s.p_values = opt.p_values;
    for (double p : opt.p_values) {
        s.energy_p.push_back(energy(state, p, params));
        s.znorm_p.push_back(znorm(state, p, opt.beta, params, opt.density_interp).value);
    }
    const double e0 = energy(state, 0.0, params);
    const double z0 = znorm(state, 0.0, opt.beta, params, opt.density_interp).value;
    const double expo = opt.exponent.value_or(6.0 * state.grid.d);
    const double zt = z0 * std::pow(bracket(state.t), expo);
    s.bootstrap0 = e0 + zt * zt;
    return s;
}

std::string functional_csv(const std::vector<FunctionalSample>& samples) {
    std::ostringstream out;
    out << "t,direction";
    if (!samples.empty())
        for (double p : samples.front().p_values) out << ",energy_p" << format_double(p) << ",znorm_p" << format_double(p);
    out << ",bootstrap0\n";
    for (const auto& s : samples) {
        out << format_double(s.t) << ',' << (s.direction == WeightDirection::decreasing ? "decreasing" : "increasing");
        for (std::size_t i = 0; i < s.p_values.size(); ++i)
            out << ',' << format_double(s.energy_p[i]) << ',' << format_double(s.znorm_p[i]);
        out << ',' << format_double(s.bootstrap0) << '\n';
    }
    return out.str();
}

DecayFit decay_fit(const DensitySeries& series, double lambda0, std::optional<double> t_lo, std::optional<double> t_hi) {
    if (series.n_t < 2) throw ArgumentError("density series is too short for a decay fit");
    if (!(lambda0 > 0.0)) throw ArgumentError("lambda0 must be positive");
    const double a = std::min(series.t(0), series.t(series.n_t - 1));
    const double b = std::max(series.t(0), series.t(series.n_t - 1));
    DecayFit fit;
    fit.t_lo = t_lo.value_or(a);
    fit.t_hi = t_hi.value_or(b);
    if (fit.t_lo < a - 1e-9 || fit.t_hi > b + 1e-9 || !(fit.t_hi > fit.t_lo))
        throw ArgumentError("decay-fit window lies outside the series");
    if (fit.t_hi < 8.0 * fit.t_lo)
        throw ArgumentError("decay fit needs t_hi >= 8 t_lo (series too short)");
    fit.threshold = lambda0 / 4.0 - 0.1 * lambda0;
    const double mid = 0.5 * (fit.t_lo + fit.t_hi);
    std::vector<double> xs, ys;
    bool any_live = false, all_zero = true;
    for (std::size_t i = 0; i < series.n_t; ++i) {
        const double t = series.t(i);
        if (t < fit.t_lo - 1e-12 || t > fit.t_hi + 1e-12) continue;
        double sup = 0.0;
        bool live = false;
        for (std::size_t ki = 0; ki < series.n_k(); ++ki) {
            if (series.is_stale(i, ki)) continue;
            live = true;
            sup = std::max(sup, std::abs(series.at(i, ki)));
        }
        if (!live) continue;
        any_live = true;
        const double x = std::cbrt(bracket(t));
        fit.envelope = std::max(fit.envelope, sup * std::exp(lambda0 * x / 4.0));
        if (t >= mid && sup > 0.0) {
            all_zero = false;
            xs.push_back(x);
            ys.push_back(std::log(sup));
        }
    }
    if (!any_live) throw ArgumentError("every density entry in the decay-fit window is stale");
    fit.points = xs.size();
    if (all_zero) {
        fit.c_fit = std::numeric_limits<double>::infinity();
    } else {
        if (xs.size() < 3) throw ArgumentError("decay fit needs at least three samples in the latter half");
        double mx = 0.0, my = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            mx += xs[i];
            my += ys[i];
        }
        mx /= double(xs.size());
        my /= double(xs.size());
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sxy += (xs[i] - mx) * (ys[i] - my);
            sxx += (xs[i] - mx) * (xs[i] - mx);
        }
        fit.c_fit = -sxy / sxx;
    }
    fit.passes = fit.c_fit >= fit.threshold && std::isfinite(fit.envelope);
    return fit;
}

}  // namespace landau
