#include "landau/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "landau/diagnostics.hpp"

namespace landau {

namespace {

GlideState difference(const GlideState& a, const GlideState& b) {
    if (!(a.grid == b.grid)) throw ArgumentError("states use different grids");
    GlideState d = a;
    for (std::size_t i = 0; i < d.ghat.size(); ++i) d.ghat[i] -= b.ghat[i];
    return d;
}

void check_horizon(const FourierGrid& g, double T, const OperatorOptions& opt) {
    if (!opt.allow_past_horizon && T > horizon_limit(g) * (1.0 + 1e-12))
        throw HorizonError("time " + std::to_string(T) + " exceeds the horizon xi_max/K = " +
                           std::to_string(horizon_limit(g)) + " (override to continue with stale modes)");
}

void check_neutral(const GlideState& s) {
    double peak = 0.0;
    for (const auto& v : s.ghat) peak = std::max(peak, std::abs(v));
    if (std::abs(s.at(s.grid.zero_mode(), s.grid.zero_node())) > 1e-12 * std::max(peak, 1e-300))
        throw ArgumentError("asymptotic state must be neutral: ĝ(0,0) = 0");
}

}  // namespace

double surrogate_norm(const GlideState& s, const OperatorOptions& opt) {
    return gevrey_norm(s, opt.norm_lambda, opt.norm_s, opt.norm_derivatives);
}

double surrogate_distance(const GlideState& a, const GlideState& b, const OperatorOptions& opt) {
    return surrogate_norm(difference(a, b), opt);
}

FinalStateResult final_state_forward(const GlideState& f0, const EquilibriumSpec& eq, double T, double dt,
                                     const OperatorOptions& opt, int ladder_levels) {
    if (!(T > 0.0)) throw ArgumentError("final-state horizon T must be positive");
    if (ladder_levels < 1) throw ArgumentError("ladder needs at least one level");
    check_horizon(f0.grid, T, opt);
    GlideOptions go = opt.glide;
    go.direction = TimeDirection::forward;
    go.history_every = 0;

    FinalStateResult res;
    for (int m = ladder_levels; m >= 0; --m) res.ladder.push_back(std::ldexp(T, -m));
    GlideState state = f0;
    state.t = 0.0;
    std::vector<GlideState> marks;
    for (double t : res.ladder) {
        auto run = glide_integrate(state, eq, t, dt, go);
        res.invalidated = res.invalidated || run.invalidated;
        res.max_boundary = std::max(res.max_boundary, run.max_boundary);
        state = std::move(run.state);
        marks.push_back(state);
    }
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i + 1 < marks.size(); ++i) {
        const double inc = surrogate_distance(marks[i + 1], marks[i], opt);
        res.increments.push_back(inc);
        if (inc > 0.0) {
            xs.push_back(std::cbrt(bracket(res.ladder[i])));
            ys.push_back(std::log(inc));
        }
    }
    if (xs.size() >= 2) {
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
        res.fitted_exponent = -sxy / sxx;
    } else if (xs.empty()) {
        res.fitted_exponent = std::numeric_limits<double>::infinity();
    }
    res.g_inf = std::move(state);
    return res;
}

OperatorRun wave_operator(const GlideState& g_inf, const EquilibriumSpec& eq, const std::vector<double>& horizons,
                          double dt, const OperatorOptions& opt) {
    if (horizons.empty()) throw ArgumentError("horizon list is empty");
    for (std::size_t i = 0; i < horizons.size(); ++i) {
        if (!(horizons[i] > 0.0)) throw ArgumentError("horizons must be positive");
        if (i > 0 && !(horizons[i] > horizons[i - 1])) throw ArgumentError("horizons must increase");
    }
    check_horizon(g_inf.grid, horizons.back(), opt);
    check_neutral(g_inf);
    GlideOptions go = opt.glide;
    go.direction = TimeDirection::backward;
    go.history_every = 0;

    OperatorRun run;
    run.input = g_inf;
    run.horizons = horizons;
    for (double n : horizons) {
        GlideState start = g_inf;
        start.t = n;
        auto r = glide_integrate(start, eq, 0.0, dt, go);
        run.invalidated = run.invalidated || r.invalidated;
        run.solutions.push_back(std::move(r.state));
    }
    const double scale = surrogate_norm(g_inf, opt);
    for (std::size_t i = 0; i + 1 < run.solutions.size(); ++i)
        run.cauchy_gaps.push_back(surrogate_distance(run.solutions[i + 1], run.solutions[i], opt));
    for (std::size_t i = 1; i < run.cauchy_gaps.size(); ++i) {
        const double prev = run.cauchy_gaps[i - 1], cur = run.cauchy_gaps[i];
        if (cur > (1.0 + opt.growth_tolerance) * prev && cur > 1e-14 * scale)
            throw ConvergenceError("horizon gaps grow; the backward construction is not converging", run.cauchy_gaps);
    }
    run.output = run.solutions.back();
    return run;
}

GlideState reflect(const GlideState& s) {
    GlideState out(s.grid, s.t);
    const std::size_t R = s.grid.row_size();
    for (std::size_t m = 0; m < s.grid.num_modes(); ++m) {
        const std::size_t src = s.grid.mirror_mode(m);
        std::copy(s.row(src), s.row(src) + R, out.row(m));
    }
    return out;
}

ScatteringResult scattering_operator(const GlideState& g_minus_inf, const EquilibriumSpec& eq,
                                     const std::vector<double>& horizons, double dt, const OperatorOptions& opt) {
    ScatteringResult res;
    GlideState h_inf = reflect(g_minus_inf);
    res.wave = wave_operator(h_inf, eq, horizons, dt, opt);
    res.g_zero = reflect(res.wave.output);
    res.g_zero.t = 0.0;
    res.forward = final_state_forward(res.g_zero, eq, horizons.back(), dt, opt);
    res.g_inf = res.forward.g_inf;
    return res;
}

const char* to_string(OperatorKind k) {
    switch (k) {
        case OperatorKind::final_state: return "final_state";
        case OperatorKind::wave: return "wave";
        case OperatorKind::scattering: return "scattering";
    }
    return "?";
}

OperatorKind parse_operator_kind(const std::string& s) {
    if (s == "final_state" || s == "S+") return OperatorKind::final_state;
    if (s == "wave" || s == "W+") return OperatorKind::wave;
    if (s == "scattering" || s == "S") return OperatorKind::scattering;
    throw ArgumentError("unknown operator '" + s + "'");
}

StateMap make_operator(OperatorKind kind, const EquilibriumSpec& eq, const std::vector<double>& horizons, double dt,
                       const OperatorOptions& opt) {
    if (horizons.empty()) throw ArgumentError("horizon list is empty");
    switch (kind) {
        case OperatorKind::final_state:
            return [&eq, horizons, dt, opt](const GlideState& x) {
                return final_state_forward(x, eq, horizons.back(), dt, opt).g_inf;
            };
        case OperatorKind::wave:
            return [&eq, horizons, dt, opt](const GlideState& x) { return wave_operator(x, eq, horizons, dt, opt).output; };
        case OperatorKind::scattering:
            return [&eq, horizons, dt, opt](const GlideState& x) {
                return scattering_operator(x, eq, horizons, dt, opt).g_inf;
            };
    }
    throw ArgumentError("unknown operator");
}

LipschitzReport lipschitz_probe(const StateMap& op, const GlideState& a, const GlideState& b, double lambda_in,
                                double lambda_out, const OperatorOptions& opt) {
    LipschitzReport rep;
    OperatorOptions in = opt, out = opt;
    in.norm_lambda = lambda_in;
    out.norm_lambda = lambda_out;
    rep.input_gap = surrogate_distance(a, b, in);
    if (rep.input_gap == 0.0) {
        rep.degenerate = true;
        rep.upper_ratio = rep.lower_ratio = std::numeric_limits<double>::quiet_NaN();
        return rep;
    }
    const GlideState oa = op(a), ob = op(b);
    rep.output_gap = surrogate_distance(oa, ob, out);
    rep.upper_ratio = rep.output_gap / rep.input_gap;
    rep.lower_ratio = surrogate_distance(oa, ob, in) / surrogate_distance(a, b, out);
    return rep;
}

}  // namespace landau
