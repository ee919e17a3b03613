#include "catch_amalgamated.hpp"

#include <cmath>
#include <filesystem>

#include "landau/common.hpp"
#include "landau/kinetics.hpp"

using namespace landau;
using Catch::Approx;

namespace {

std::size_t mode(const FourierGrid& g, std::vector<int> k) { return g.mode_index(k); }

double max_abs_diff(const GlideState& a, const GlideState& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.ghat.size(); ++i) m = std::max(m, std::abs(a.ghat[i] - b.ghat[i]));
    return m;
}

double norm_diff(const GlideState& a, const GlideState& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.ghat.size(); ++i) s += std::norm(a.ghat[i] - b.ghat[i]);
    return std::sqrt(s);
}

// ĝ(±1, ξ) = e^{-ξ²}, everything else 0.
GlideState gaussian_pair(const FourierGrid& g) {
    GlideState s(g, 0.0);
    for (int k : {-1, 1})
        for (std::size_t j = 0; j < g.row_size(); ++j) s.at(mode(g, {k}), j) = std::exp(-g.xi(int(j)) * g.xi(int(j)));
    return s;
}

std::string temp_path(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "landau_tests";
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

}  // namespace

TEST_CASE("zero state stays zero", "[kinetics]") {
    const FourierGrid g{1, 4, 16.0, 64};
    const auto eq = EquilibriumSpec::maxwellian(1);
    const GlideState z(g, 0.0);
    for (const auto& v : glide_rhs(z, eq)) CHECK(v == cplx(0.0));
    const auto run = glide_integrate(z, eq, 1.0, 0.1);
    for (const auto& v : run.state.ghat) CHECK(v == cplx(0.0));
    for (const auto& r : run.series.rho) CHECK(r == cplx(0.0));
    CHECK(run.series.n_t == 11);
}

TEST_CASE("free streaming freezes the profile", "[kinetics]") {
    const FourierGrid g{1, 4, 16.0, 128};
    GlideOptions opt;
    opt.nonlinear = false;
    const auto s0 = cosine_mode_glide(g, 1e-2, {1});
    const auto run = glide_integrate(s0, EquilibriumSpec::vacuum(1), 2.0, 0.05, opt);
    CHECK(run.state.ghat == s0.ghat);
    CHECK(run.state.t == Approx(2.0));
}

TEST_CASE("density along xi = tk under free streaming", "[kinetics]") {
    const FourierGrid g{1, 2, 16.0, 256};
    auto s = gaussian_pair(g);
    for (double t : {0.0, 0.5, 1.0, 1.5}) {
        s.t = t;
        const auto cubic = density_from_glide(s, InterpRule::cubic);
        const auto band = density_from_glide(s, InterpRule::bandlimited);
        for (int k : {-1, 1}) {
            CHECK(std::abs(cubic.rho[mode(g, {k})] - std::exp(-t * t)) < 2e-5);
            CHECK(std::abs(band.rho[mode(g, {k})] - std::exp(-t * t)) < 1e-10);
        }
        CHECK(cubic.rho[g.zero_mode()] == cplx(0.0));
    }
    s.t = 20.0;  // |t k| > xi_max for every k != 0
    CHECK_THROWS_AS(density_from_glide(s), HorizonError);
}

TEST_CASE("linearized poisson right-hand side", "[kinetics]") {
    const FourierGrid g{1, 1, 16.0, 128};
    const auto eq = EquilibriumSpec::poisson(1);
    GlideOptions opt;
    opt.nonlinear = false;
    auto s = gaussian_pair(g);
    s.t = 0.75;
    const auto rhs = glide_rhs(s, eq, opt);
    const cplx rho = density_from_glide(s).rho[mode(g, {1})];
    const std::size_t m = mode(g, {1});
    for (std::size_t j = 0; j < g.row_size(); ++j) {
        const double xi = g.xi(int(j));
        const cplx expect = -rho * std::exp(-std::abs(xi - s.t)) * (xi - s.t);
        CHECK(std::abs(rhs[m * g.row_size() + j] - expect) < 1e-14);
    }
}

TEST_CASE("single-mode self interaction in vacuum", "[kinetics]") {
    const FourierGrid g{1, 2, 16.0, 256};
    GlideState s(g, 0.3);
    auto phi = [](double x) { return std::exp(-0.5 * x * x); };
    for (std::size_t j = 0; j < g.row_size(); ++j) s.at(mode(g, {1}), j) = phi(g.xi(int(j)));
    GlideOptions opt;
    opt.density_interp = opt.shift_interp = InterpRule::bandlimited;
    const auto rhs = glide_rhs(s, EquilibriumSpec::vacuum(1), opt);
    // Only l = 1 carries density and only k = 2 has k - l = 1 populated.
    const std::size_t m2 = mode(g, {2});
    for (int j : {100, 128, 150}) {
        const double xi = g.xi(j), t = s.t;
        const double expect = -(1.0 / (2 * pi)) * phi(t) * phi(xi - t) * (xi - 2 * t);
        CHECK(std::abs(rhs[m2 * g.row_size() + std::size_t(j)] - expect) < 1e-10);
    }
    for (int k : {-2, -1, 0, 1})
        for (std::size_t j = 0; j < g.row_size(); ++j) CHECK(rhs[mode(g, {k}) * g.row_size() + j] == cplx(0.0));
}

TEST_CASE("fourth-order convergence in dt", "[kinetics][property]") {
    const FourierGrid g{1, 4, 16.0, 128};
    const auto eq = EquilibriumSpec::maxwellian(1, 1.0, 0.9);
    GlideOptions opt;
    opt.density_interp = opt.shift_interp = InterpRule::bandlimited;
    const auto s0 = cosine_mode_glide(g, 0.1, {1});
    std::vector<GlideState> r;
    for (double dt : {0.1, 0.05, 0.025}) r.push_back(glide_integrate(s0, eq, 1.0, dt, opt).state);
    const double ratio = norm_diff(r[0], r[1]) / norm_diff(r[1], r[2]);
    CHECK(ratio >= 14.0);
    CHECK(ratio <= 18.0);
}

TEST_CASE("reality and neutrality hold every step", "[kinetics][property]") {
    const FourierGrid g{2, 2, 8.0, 32};
    const auto eq = EquilibriumSpec::maxwellian(2);
    auto s0 = cosine_mode_glide(g, 0.05, {1, 0});
    const auto extra = cosine_mode_glide(g, 0.03, {1, -1});
    for (std::size_t i = 0; i < s0.ghat.size(); ++i) s0.ghat[i] += extra.ghat[i];
    const auto run = glide_integrate(s0, eq, 1.0, 0.05);
    CHECK(run.max_reality_defect <= 1e-12);
    CHECK(run.max_neutrality_defect <= 1e-12);
    CHECK(reality_defect(run.state) <= 1e-12);
    CHECK(neutrality_defect(run.state) <= 1e-12);
}

TEST_CASE("forward then backward returns the data", "[kinetics][property]") {
    const FourierGrid g{1, 4, 16.0, 128};
    const auto eq = EquilibriumSpec::maxwellian(1, 1.0, 0.9);
    const auto s0 = cosine_mode_glide(g, 1e-3, {1});
    GlideOptions opt;
    const auto fwd = glide_integrate(s0, eq, 2.0, 0.01, opt);
    opt.direction = TimeDirection::backward;
    const auto back = glide_integrate(fwd.state, eq, 0.0, 0.01, opt);
    CHECK(back.state.t == Approx(0.0).margin(1e-12));
    CHECK(relative_l2(back.state, s0) <= 1e-3);
    CHECK(back.series.dt < 0.0);
}

TEST_CASE("poisson field", "[kinetics]") {
    const auto zero = poisson_field({{1}, {-1}}, {0.0, 0.0});
    for (const auto& e : zero.E_hat) CHECK(e[0] == cplx(0.0));
    const auto f = poisson_field({{1}, {-1}}, {1.0, 1.0});
    CHECK(std::abs(f.E_hat[0][0] - cplx(0, -1)) < 1e-15);
    const auto g = poisson_field({{1, 0}, {-1, 0}, {1, 2}, {-1, -2}}, {cplx(0.3, 0.2), cplx(0.3, -0.2), cplx(-0.1, 0.5), cplx(-0.1, -0.5)});
    const auto E = field_in_space(g, 16);
    for (const auto& comp : E)
        for (const auto& v : comp) CHECK(std::abs(v.imag()) <= 1e-12);
}

TEST_CASE("snapshot round trip", "[kinetics][io]") {
    const FourierGrid g{1, 3, 8.0, 32};
    auto s = cosine_mode_glide(g, 0.2, {2});
    s.t = 1.25;
    const std::string path = temp_path("snap.bin");
    save_glide_state(path, s, {{"note", "x"}});
    const auto r = load_glide_state(path);
    CHECK(r.grid == g);
    CHECK(r.t == 1.25);
    CHECK(r.ghat == s.ghat);
    CHECK_THROWS_AS(load_glide_state(temp_path("nope.bin")), IoError);
}

TEST_CASE("boundary monitor invalidates a run", "[kinetics]") {
    const FourierGrid g{1, 2, 4.0, 32};
    GlideState s(g, 0.0);
    const std::vector<int> node{1};
    s = impulse_glide(g, {1}, node, cplx(1e-3, 0));
    CHECK(boundary_magnitude(s, 2) == Approx(1e-3));
    const auto run = glide_integrate(s, EquilibriumSpec::maxwellian(1), 0.1, 0.05);
    CHECK(run.invalidated);
    CHECK(run.invalidated_at == Approx(0.0));
}

TEST_CASE("split-step pure transport is exact", "[kinetics][split]") {
    PhaseGrid pg;
    pg.n_x = 16;
    pg.n_v = 128;
    const auto eq = EquilibriumSpec::vacuum(1);
    SplitStepOptions opt;
    opt.field = false;
    auto ps = cosine_mode_phase(pg, 0.1, {1});
    SplitStepper st(pg, eq, opt);
    st.run(ps, 1.5, 0.1);
    const double norm = 1.0 / std::sqrt(2 * pi);
    double err = 0.0;
    for (int i = 0; i < pg.n_x; ++i)
        for (int j = 0; j < pg.n_v; ++j) {
            const double x = pg.x(i), v = pg.v(j);
            const double exact = 0.1 * std::cos(x - v * 1.5) * std::exp(-0.5 * v * v) * norm;
            err = std::max(err, std::abs(ps.f[std::size_t(i) * pg.v_points() + std::size_t(j)] - exact));
        }
    CHECK(err <= 1e-12);
    // The profile does not move under transport.
    const auto p0 = profile_from_phase(cosine_mode_phase(pg, 0.1, {1}), 4);
    CHECK(relative_l2(profile_from_phase(ps, 4), p0) <= 1e-6);
}

TEST_CASE("phase-space profile at t = 0 is the analytic transform", "[kinetics][split]") {
    PhaseGrid pg;
    pg.n_x = 16;
    pg.n_v = 128;
    const auto p = profile_from_phase(cosine_mode_phase(pg, 1e-3, {1}), 4);
    const auto a = cosine_mode_glide(pg.fourier_grid(4), 1e-3, {1});
    CHECK(max_abs_diff(p, a) <= 1e-15);
}

TEST_CASE("split-step conservation", "[kinetics][split][property]") {
    PhaseGrid pg;
    pg.n_x = 16;
    pg.n_v = 256;
    const auto eq = EquilibriumSpec::maxwellian(1);
    auto ps = cosine_mode_phase(pg, 1e-2, {1});
    const auto m0 = equilibrium_in_velocity(pg, eq);
    const double mass0 = phase_mass(ps), l20 = phase_total_l2(ps, m0);
    CHECK(std::abs(mass0) <= 1e-15);
    SplitStepper st(pg, eq);
    st.run(ps, 3.0, 0.01);
    CHECK(std::abs(phase_mass(ps) - mass0) <= 1e-12);
    CHECK(std::abs(phase_total_l2(ps, m0) - l20) / l20 <= 1e-6);
}

TEST_CASE("glide and split-step agree on a small grid", "[kinetics][split]") {
    PhaseGrid pg;
    pg.n_x = 16;
    pg.n_v = 128;
    const FourierGrid g = pg.fourier_grid(4);
    const auto eq = EquilibriumSpec::maxwellian(1);
    GlideOptions opt;
    opt.density_interp = InterpRule::bandlimited;
    const auto run = glide_integrate(cosine_mode_glide(g, 1e-3, {1}), eq, 1.0, 0.01, opt);
    SplitStepper st(pg, eq);
    auto ps = cosine_mode_phase(pg, 1e-3, {1});
    st.run(ps, 1.0, 0.01);
    CHECK(relative_l2(run.state, profile_from_phase(ps, 4)) <= 1e-4);
}
