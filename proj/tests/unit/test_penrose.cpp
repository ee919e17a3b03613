#include "catch_amalgamated.hpp"

#include <cmath>
#include <random>

#include "landau/common.hpp"
#include "landau/penrose.hpp"

using namespace landau;
using Catch::Approx;

namespace {

const cplx I(0.0, 1.0);

cplx poisson_L(double k, cplx tau) { return 1.0 / ((k + I * tau) * (k + I * tau)); }

// Composite Simpson on [0, 40] for ∫ s e^{-s²/2} e^{-iτs} ds (|k| = 1).
cplx maxwell_L_simpson(cplx tau) {
    const int n = 200000;
    const double h = 40.0 / n;
    cplx acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double s = h * i;
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        acc += w * s * std::exp(-0.5 * s * s) * std::exp(-I * tau * s);
    }
    return acc * h / 3.0;
}

}  // namespace

TEST_CASE("poisson dispersion matches the closed form", "[penrose]") {
    const auto eq = EquilibriumSpec::poisson(1);
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> re(-30.0, 30.0), im(0.0, 30.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const int k = 1 + i % 3;
        const cplx tau(re(rng), -im(rng));
        const cplx got = dispersion_L(eq, {{k}, tau});
        worst = std::max(worst, std::abs(got - poisson_L(k, tau)) / std::abs(poisson_L(k, tau)));
    }
    CHECK(worst <= 1e-10);
    CHECK(dispersion_L(eq, {{1}, 0.0}).real() == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("maxwellian dispersion against Simpson quadrature", "[penrose]") {
    const auto eq = EquilibriumSpec::maxwellian(1);
    CHECK(std::abs(dispersion_L(eq, {{1}, 0.0}) - 1.0) < 1e-10);
    for (cplx tau : {cplx(0.7, 0.0), cplx(-2.5, -0.3), cplx(6.0, -1.0), cplx(1.4, 0.0)})
        CHECK(std::abs(dispersion_L(eq, {{1}, tau}) - maxwell_L_simpson(tau)) < 1e-9);
}

TEST_CASE("integrated-by-parts route agrees", "[penrose]") {
    const auto p = EquilibriumSpec::poisson(1);
    CHECK(std::abs(dispersion_L_by_parts(p, {{1}, cplx(0, -1)}) - 0.25) < 1e-10);
    CHECK(std::abs(dispersion_L(p, {{1}, cplx(0, -1)}) - 0.25) < 1e-10);
    const auto m = EquilibriumSpec::maxwellian(2);
    for (cplx tau : {cplx(1.0, 0.0), cplx(-3.0, -0.5), cplx(12.0, 0.0)}) {
        const DispersionQuery q{{1, 1}, tau};
        CHECK(std::abs(dispersion_L_by_parts(m, q) - dispersion_L(m, q)) < 1e-9);
    }
    CHECK(dispersion_L_by_parts(EquilibriumSpec::vacuum(1), {{1}, 1.0}) == cplx(0.0));
}

TEST_CASE("large-tau decay", "[penrose]") {
    for (const auto& eq : {EquilibriumSpec::poisson(1), EquilibriumSpec::maxwellian(1)}) {
        const double a = std::abs(dispersion_L(eq, {{1}, 1e3}));
        const double b = std::abs(dispersion_L(eq, {{1}, 4e3}));
        const double slope = std::log(b / a) / std::log(4.0);
        CHECK(slope <= -0.95);
    }
}

TEST_CASE("L prime and derivatives for poisson", "[penrose]") {
    const auto eq = EquilibriumSpec::poisson(1);
    CHECK(std::abs(dispersion_Lprime(eq, {{1}, 0.0}) - 0.5) < 1e-10);
    for (double t : {-4.0, -0.5, 1.0, 3.0}) {
        const cplx exact = 1.0 / ((1.0 + I * t) * (1.0 + I * t) + 1.0);
        CHECK(std::abs(dispersion_Lprime(eq, {{1}, t}) - exact) < 1e-10);
    }
    CHECK(std::abs(dispersion_derivative(eq, {{1}, 0.0}, 1).value - cplx(0, -2)) < 1e-8);
    CHECK(std::abs(dispersion_derivative(eq, {{1}, 0.0}, 2).value - cplx(-6, 0)) < 1e-7);
    CHECK(std::abs(dispersion_derivative(eq, {{2}, cplx(1, -1)}, 0).value - dispersion_L(eq, {{2}, cplx(1, -1)})) < 1e-12);
    CHECK(dispersion_Lprime(EquilibriumSpec::vacuum(1), {{1}, 2.0}) == cplx(0.0));
}

TEST_CASE("argument checks", "[penrose]") {
    const auto eq = EquilibriumSpec::poisson(1);
    CHECK_THROWS_AS(dispersion_L(eq, {{1}, cplx(0, 1)}), ArgumentError);
    CHECK_THROWS_AS(dispersion_L(eq, {{0}, 1.0}), ArgumentError);
}

TEST_CASE("penrose margins", "[penrose]") {
    const auto v = penrose_margin(EquilibriumSpec::vacuum(1), 4);
    CHECK(v.margin == 1.0);
    CHECK_FALSE(v.zero_suspected);

    const auto p = penrose_margin(EquilibriumSpec::poisson(1), 4);
    CHECK(p.margin == Approx(std::sqrt(0.8)).epsilon(1e-6));
    CHECK(std::abs(p.argmin_tau.real()) == Approx(2.0).epsilon(1e-4));
    CHECK(std::abs(p.argmin_k[0]) == 1);
    CHECK_FALSE(p.zero_suspected);

    const auto m = penrose_margin(EquilibriumSpec::maxwellian(1), 4);
    CHECK(m.margin > 0.5);
    CHECK(m.margin < 1.0);
    CHECK_FALSE(m.zero_suspected);
    for (const auto& mode : m.modes) CHECK(mode.winding == 0);
}
