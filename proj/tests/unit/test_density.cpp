#include "catch_amalgamated.hpp"

#include <cmath>
#include <functional>
#include <random>

#include "landau/common.hpp"
#include "landau/density.hpp"

using namespace landau;
using Catch::Approx;

namespace {

using Signal = std::function<cplx(double)>;

DensitySeries sample(const Signal& f, double T, double dt, const std::vector<int>& k) {
    const auto n = std::size_t(std::lround(T / dt)) + 1;
    DensitySeries s(0.0, dt, n, {k});
    for (std::size_t i = 0; i < n; ++i) s.at(i, 0) = f(s.t(i));
    return s;
}

// A few seeded sinusoids: bounded and smooth.
Signal random_signal(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<std::array<double, 4>> terms(4);
    for (auto& t : terms) t = {u(rng), u(rng), 1.5 * std::abs(u(rng)), 3.0 * u(rng)};
    return [terms](double t) {
        cplx v = 0.0;
        for (const auto& c : terms) v += cplx(c[0], c[1]) * std::exp(cplx(0.0, c[2] * t + c[3]));
        return v;
    };
}

// Composite Simpson with n (even) panels.
cplx simpson(const Signal& f, double a, double b, int n) {
    if (a == b) return 0.0;
    const double h = (b - a) / n;
    cplx s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

double max_abs(const DensitySeries& s) {
    double m = 0.0;
    for (const auto& v : s.rho) m = std::max(m, std::abs(v));
    return m;
}

double route_gap(const EquilibriumSpec& eq, const GreenTable& table, const Signal& n, int k, double dt) {
    const auto nhat = sample(n, 20.0, dt, {k});
    const auto v = volterra_solve(VolterraKernel(eq), nhat, VolterraDirection::forward);
    const auto r = representation(nhat, table, VolterraDirection::forward);
    return max_abs_difference(v, r);
}

}  // namespace

TEST_CASE("kernel vanishes on the diagonal", "[density]") {
    const auto eq = EquilibriumSpec::maxwellian(1);
    const VolterraKernel K(eq);
    CHECK(K(3.0, 3.0, {1}) == cplx(0.0));
    CHECK(K(2.0, 1.0, {2}).real() == Approx(std::exp(-2.0)).epsilon(1e-14));
    CHECK(VolterraKernel(EquilibriumSpec::vacuum(1))(2.0, 1.0, {1}) == cplx(0.0));
}

TEST_CASE("trivial routes", "[density]") {
    const auto poisson = EquilibriumSpec::poisson(1);
    const auto table = build_green_table(poisson, {{1}, {-1}}, 10.0, 0.05);
    const auto zero = sample([](double) { return cplx(0.0); }, 10.0, 0.05, {1});
    for (auto dir : {VolterraDirection::forward, VolterraDirection::final_state}) {
        CHECK(max_abs(volterra_solve(VolterraKernel(poisson), zero, dir)) == 0.0);
        CHECK(max_abs(representation(zero, table, dir)) == 0.0);
    }
    const auto vac = EquilibriumSpec::vacuum(1);
    const auto n = sample(random_signal(3), 10.0, 0.05, {1});
    const auto vtable = build_green_table(vac, {{1}, {-1}}, 10.0, 0.05);
    for (auto dir : {VolterraDirection::forward, VolterraDirection::final_state}) {
        CHECK(volterra_solve(VolterraKernel(vac), n, dir).rho == n.rho);
        CHECK(representation(n, vtable, dir).rho == n.rho);
    }
}

TEST_CASE("poisson response to a constant source", "[density]") {
    const auto eq = EquilibriumSpec::poisson(1);
    const auto one = sample([](double) { return cplx(1.0); }, 20.0, 0.01, {1});
    const auto table = build_green_table(eq, {{1}}, 20.0, 0.01);
    const auto v = volterra_solve(VolterraKernel(eq), one, VolterraDirection::forward);
    const auto r = representation(one, table, VolterraDirection::forward);
    double ev = 0.0, er = 0.0;
    for (std::size_t i = 0; i < one.n_t; ++i) {
        const double t = one.t(i);
        const double exact = 0.5 * (1.0 + std::exp(-t) * (std::cos(t) + std::sin(t)));
        ev = std::max(ev, std::abs(v.at(i, 0) - exact));
        er = std::max(er, std::abs(r.at(i, 0) - exact));
    }
    CHECK(ev <= 1e-4);
    CHECK(er <= 1e-4);
}

TEST_CASE("route equivalence is second order", "[density][property]") {
    for (const auto& eq : {EquilibriumSpec::poisson(1), EquilibriumSpec::maxwellian(1)}) {
        const auto table = build_green_table(eq, {{1}, {2}, {3}}, 20.0, 0.0125);
        for (int k : {1, 2, 3}) {
            const auto n = random_signal(100 + std::uint64_t(k));
            const double e1 = route_gap(eq, table, n, k, 0.1);
            const double e2 = route_gap(eq, table, n, k, 0.05);
            const double e3 = route_gap(eq, table, n, k, 0.025);
            INFO("k = " << k << " gaps " << e1 << " " << e2 << " " << e3);
            CHECK(std::log2(e1 / e2) >= 1.9);
            CHECK(std::log2(e2 / e3) >= 1.9);
            // C = gap/Δt² stays put under halving.
            const double c2 = e2 / (0.05 * 0.05), c3 = e3 / (0.025 * 0.025);
            CHECK(std::abs(c3 / c2 - 1.0) <= 0.1);
        }
    }
}

TEST_CASE("Landau damping rate from the forward equation", "[density]") {
    // With σ|k| = 1/2, ρ̂ settles at 1/(1 + L(0)) = 1/5 and rings at the least
    // damped root τ = 1.415662 + 0.153359i of 1 + L (analytic continuation,
    // computed from the moment series of the Gaussian kernel).
    const auto eq = EquilibriumSpec::maxwellian(1, 0.5);
    const auto one = sample([](double) { return cplx(1.0); }, 40.0, 0.005, {1});
    const auto rho = volterra_solve(VolterraKernel(eq), one, VolterraDirection::forward);
    std::vector<double> ts, logs;
    for (std::size_t i = 1; i + 1 < rho.n_t; ++i) {
        const double t = rho.t(i);
        if (t < 10.0) continue;
        const double a = std::abs(rho.at(i - 1, 0) - 0.2), b = std::abs(rho.at(i, 0) - 0.2),
                     c = std::abs(rho.at(i + 1, 0) - 0.2);
        if (b > a && b >= c) {
            ts.push_back(t);
            logs.push_back(std::log(b));
        }
    }
    REQUIRE(ts.size() >= 6);
    const double rate = -(logs.back() - logs.front()) / (ts.back() - ts.front());
    const double half_period = (ts.back() - ts.front()) / double(ts.size() - 1);
    CHECK(rate == Approx(0.153359).epsilon(0.01));
    CHECK(half_period == Approx(pi / 1.415662).epsilon(0.01));
}

TEST_CASE("final-state and forward equations recover the same density", "[density]") {
    const auto eq = EquilibriumSpec::maxwellian(1);
    const VolterraKernel K(eq);
    const Signal rho = [](double t) { return cplx(std::exp(-0.3 * t) * std::cos(2 * t), 0.2 * std::sin(t)); };
    const double T2 = 8.0;
    auto errors = [&](double dt) {
        auto fwd = sample(
            [&](double t) {
                return rho(t) + simpson([&](double s) { return rho(s) * K(t, s, {1}); }, 0.0, t, 400);
            },
            T2, dt, {1});
        auto bwd = sample(
            [&](double t) {
                return rho(t) - simpson([&](double s) { return rho(s) * K(t, s, {1}); }, t, T2, 400);
            },
            T2, dt, {1});
        const auto a = volterra_solve(K, fwd, VolterraDirection::forward);
        const auto b = volterra_solve(K, bwd, VolterraDirection::final_state);
        double ea = 0.0, eb = 0.0, gap = 0.0;
        for (std::size_t i = 0; i < a.n_t; ++i) {
            ea = std::max(ea, std::abs(a.at(i, 0) - rho(a.t(i))));
            eb = std::max(eb, std::abs(b.at(i, 0) - rho(b.t(i))));
            gap = std::max(gap, std::abs(a.at(i, 0) - b.at(i, 0)));
        }
        return std::array<double, 3>{ea, eb, gap};
    };
    const auto c = errors(0.02), f = errors(0.01);
    CHECK(f[0] <= 1e-4);
    CHECK(f[1] <= 1e-4);
    CHECK(f[2] <= f[0] + f[1]);
    CHECK(c[0] / f[0] >= 3.5);
    CHECK(c[1] / f[1] >= 3.5);

    // The representation route on the same data, with Ĝ(·,-k) tabulated.
    const auto table = build_green_table(eq, {{1}, {-1}}, T2, 0.01);
    const auto bwd = sample(
        [&](double t) { return rho(t) - simpson([&](double s) { return rho(s) * K(t, s, {1}); }, t, T2, 400); },
        T2, 0.01, {1});
    const auto r = representation(bwd, table, VolterraDirection::final_state);
    double er = 0.0;
    for (std::size_t i = 0; i < r.n_t; ++i) er = std::max(er, std::abs(r.at(i, 0) - rho(r.t(i))));
    CHECK(er <= 1e-4);
}

TEST_CASE("representation coverage and the -k lookup", "[density]") {
    const auto eq = EquilibriumSpec::maxwellian(1);
    const auto n = sample(random_signal(5), 4.0, 0.02, {1});
    const auto only_k = build_green_table(eq, {{1}}, 4.0, 0.02);
    CHECK_THROWS_AS(representation(n, only_k, VolterraDirection::final_state), ArgumentError);
    std::vector<std::vector<int>> used;
    RepresentationOptions opt;
    opt.radial_fallback = true;
    const auto r = representation(n, only_k, VolterraDirection::final_state, opt, &used);
    REQUIRE(used.size() == 1);
    CHECK(used[0] == std::vector<int>{1});
    const auto both = build_green_table(eq, {{1}, {-1}}, 4.0, 0.02);
    CHECK(max_abs_difference(r, representation(n, both, VolterraDirection::final_state)) <= 1e-12);
    const auto short_table = build_green_table(eq, {{1}}, 2.0, 0.02);
    CHECK_THROWS_AS(representation(n, short_table, VolterraDirection::forward), ArgumentError);
    const auto coarse = build_green_table(eq, {{1}}, 4.0, 0.03);
    CHECK_THROWS_AS(representation(n, coarse, VolterraDirection::forward), ArgumentError);
}

TEST_CASE("linearized nonlinearity is the free-streaming data term", "[density]") {
    const FourierGrid g{1, 2, 16.0, 256};
    GlideState s(g, 0.0);
    for (int k : {-1, 1})
        for (std::size_t j = 0; j < g.row_size(); ++j)
            s.at(g.mode_index(std::vector<int>{k}), j) = std::exp(-g.xi(int(j)) * g.xi(int(j)));
    std::vector<GlideState> snaps;
    for (int i = 0; i <= 40; ++i) {
        auto c = s;
        c.t = 0.05 * i;
        snaps.push_back(c);
    }
    const GlideHistory h(snaps, InterpRule::bandlimited);
    const UniformGrid tg{0.0, 0.05, 41};
    const auto lin = nonlinearity_forward(h, tg, {{1}, {2}}, false);
    for (std::size_t i = 0; i < tg.count; ++i) {
        const double t = tg.at(i);
        CHECK(std::abs(lin.at(i, 0) - std::exp(-t * t)) <= 1e-10);
        CHECK(lin.at(i, 1) == cplx(0.0));
    }
    CHECK_THROWS_AS(nonlinearity_forward(h, UniformGrid{0.0, 0.05, 60}, {{1}}), ArgumentError);

    std::vector<GlideState> zeros(5, GlideState(g, 0.0));
    for (int i = 0; i < 5; ++i) zeros[std::size_t(i)].t = 0.1 * i;
    CHECK(max_abs(nonlinearity_forward(GlideHistory(zeros), UniformGrid{0.0, 0.1, 5}, {{1}, {2}})) == 0.0);
}

TEST_CASE("single-mode nonlinearity against a scalar quadrature", "[density]") {
    // Only the k = 1 row is populated: ĝ(s,1,ξ) = φ(s,ξ). Then ρ̂(s,1) = φ(s,s)
    // and N̂(t,2) = -(2π)^{-1} ∫_0^t φ(s,s) φ(s,2t-s) 2(t-s) ds.
    const FourierGrid g{1, 2, 8.0, 128};
    auto phi = [](double s, double xi) { return std::exp(-0.4 * s) * std::exp(-0.5 * (xi - 0.3) * (xi - 0.3)); };
    auto oracle = [&](double t) {
        return -simpson([&](double s) { return cplx(phi(s, s) * phi(s, 2 * t - s) * 2.0 * (t - s)); }, 0.0, t, 2000) /
               (2 * pi);
    };
    auto error = [&](double dt) {
        const int n = int(std::lround(2.0 / dt)) + 1;
        std::vector<GlideState> snaps;
        for (int i = 0; i < n; ++i) {
            GlideState s(g, dt * i);
            for (std::size_t j = 0; j < g.row_size(); ++j)
                s.at(g.mode_index(std::vector<int>{1}), j) = phi(s.t, g.xi(int(j)));
            snaps.push_back(std::move(s));
        }
        const auto N = nonlinearity_forward(GlideHistory(snaps, InterpRule::bandlimited),
                                            UniformGrid{0.0, dt, std::size_t(n)}, {{2}});
        double e = 0.0;
        for (std::size_t i = 0; i < N.n_t; ++i) e = std::max(e, std::abs(N.at(i, 0) - oracle(N.t(i))));
        return e;
    };
    const double e1 = error(0.1), e2 = error(0.05);
    CHECK(e2 <= 1e-3);
    CHECK(e1 / e2 >= 3.5);
}

TEST_CASE("simulated density satisfies the forward equation", "[density][property]") {
    const FourierGrid g{1, 4, 16.0, 128};
    const auto eq = EquilibriumSpec::maxwellian(1);
    GlideOptions opt;
    opt.history_every = 5;
    opt.density_interp = opt.shift_interp = InterpRule::bandlimited;
    const auto run = glide_integrate(cosine_mode_glide(g, 0.05, {1}), eq, 2.0, 0.01, opt);
    auto residual = [&](std::size_t stride) {
        std::vector<GlideState> snaps;
        for (std::size_t i = 0; i < run.history.size(); i += stride) snaps.push_back(run.history[i]);
        const double dt = snaps[1].t - snaps[0].t;
        const UniformGrid tg{0.0, dt, snaps.size()};
        const std::vector<std::vector<int>> ks{{1}, {2}};
        const auto N = nonlinearity_forward(GlideHistory(snaps, InterpRule::bandlimited), tg, ks);
        const auto rho = volterra_solve(VolterraKernel(eq), N, VolterraDirection::forward);
        double e = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < tg.count; ++i)
            for (std::size_t ki = 0; ki < ks.size(); ++ki) {
                const std::size_t step = i * stride * opt.history_every;
                const cplx sim = run.series.at(step, std::size_t(run.series.find(ks[ki])));
                e = std::max(e, std::abs(rho.at(i, ki) - sim));
                scale = std::max(scale, std::abs(sim));
            }
        return e / scale;
    };
    const double coarse = residual(2), fine = residual(1);
    INFO("relative residuals " << coarse << " " << fine);
    CHECK(fine <= 1e-3);
    CHECK(coarse / fine >= 3.0);
}
