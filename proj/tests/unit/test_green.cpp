#include "catch_amalgamated.hpp"

#include <cmath>

#include "landau/common.hpp"
#include "landau/green.hpp"

using namespace landau;
using Catch::Approx;

namespace {

// G = K - K*G with K(u) = u M̂0(u|k|), trapezoid marching on a fine grid.
std::vector<double> resolvent_oracle(const EquilibriumSpec& eq, double knorm, double h, std::size_t n) {
    std::vector<double> K(n), G(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = h * double(i);
        const std::vector<double> xi{u * knorm};
        K[i] = u * eq.fourier_value(xi).real();
    }
    for (std::size_t i = 0; i < n; ++i) {
        double conv = 0.0;
        for (std::size_t j = 0; j < i; ++j) conv += (j == 0 ? 0.5 : 1.0) * K[i - j] * G[j];
        // The j = i term carries K(0) = 0.
        G[i] = K[i] - h * conv;
    }
    return G;
}

}  // namespace

TEST_CASE("poisson kernel is e^{-s} sin s", "[green]") {
    const auto eq = EquilibriumSpec::poisson(1, 0.9);
    const auto t = build_green_table(eq, {{1}}, 20.0, 0.01);
    REQUIRE(t.n_s == 2001);
    double err = 0.0;
    for (std::size_t i = 0; i < t.n_s; ++i) {
        const double s = t.ds * double(i);
        err = std::max(err, std::abs(t.at(0, i) - std::exp(-s) * std::sin(s)));
    }
    CHECK(err <= 1e-6);
    CHECK(t.meta[0].min_one_plus_L > 0.89);
    CHECK_FALSE(t.meta[0].accuracy_warning);
}

TEST_CASE("no support at negative times", "[green]") {
    for (const auto& eq : {EquilibriumSpec::poisson(1), EquilibriumSpec::maxwellian(1)}) {
        const auto neg = green_function(eq, {1}, UniformGrid{-5.0, 0.05, 100});
        double leak = 0.0;
        for (const auto& v : neg) leak = std::max(leak, std::abs(v));
        CHECK(leak <= 1e-6);
    }
}

TEST_CASE("vacuum kernel vanishes", "[green]") {
    const auto t = build_green_table(EquilibriumSpec::vacuum(1), {{1}, {2}}, 5.0, 0.1);
    for (const auto& v : t.values) CHECK(v == cplx(0.0));
    const auto rep = verify_green_decay(t, 0.9);
    CHECK(rep.c_fit == 0.0);
    CHECK(rep.passes);
}

TEST_CASE("maxwellian kernel solves the resolvent equation", "[green]") {
    const auto eq = EquilibriumSpec::maxwellian(1, 1.0, 0.9);
    const auto t = build_green_table(eq, {{1}, {2}}, 10.0, 0.01);
    for (std::size_t ki = 0; ki < 2; ++ki) {
        const double knorm = double(ki + 1);
        const auto G = resolvent_oracle(eq, knorm, 0.0025, 4001);
        double err = 0.0;
        for (std::size_t i = 0; i < t.n_s; ++i) err = std::max(err, std::abs(t.at(ki, i) - G[4 * i]));
        CHECK(err <= 1e-5);
        for (std::size_t i = 0; i < t.n_s; ++i) CHECK(std::abs(t.at(ki, i).imag()) <= 1e-8);
    }
    CHECK(verify_green_decay(t, 0.9).passes);
}

TEST_CASE("direct quadrature agrees with the FFT route", "[green]") {
    const auto eq = EquilibriumSpec::maxwellian(1);
    const auto col = green_function(eq, {1}, UniformGrid{0.0, 0.5, 21});
    for (std::size_t i : {1u, 4u, 9u, 20u}) CHECK(std::abs(col[i] - green_function_direct(eq, {1}, 0.5 * double(i))) < 1e-7);
}

TEST_CASE("table lookup and argument checks", "[green]") {
    const auto eq = EquilibriumSpec::poisson(2);
    const auto t = build_green_table(eq, {{1, 0}, {1, 1}}, 2.0, 0.5);
    CHECK(t.find({1, 1}) == 1);
    CHECK(t.find({2, 0}) == -1);
    CHECK(t.s_max() == Approx(2.0));
    // Radial: Ĝ depends on k through |k|.
    const auto r = build_green_table(eq, {{0, 1}}, 2.0, 0.5);
    for (std::size_t i = 0; i < t.n_s; ++i) CHECK(std::abs(t.at(0, i) - r.at(0, i)) < 1e-12);
    CHECK_THROWS_AS(green_function(eq, {0, 0}, UniformGrid{0.0, 0.1, 3}), ArgumentError);
    CHECK_THROWS_AS(build_green_table(eq, {}, 1.0, 0.1), ArgumentError);
}
