#include "catch_amalgamated.hpp"

#include <cmath>
#include <random>

#include "landau/common.hpp"
#include "landau/gevrey_weights.hpp"

using namespace landau;
using Catch::Approx;

namespace {

WeightParams params(WeightDirection dir) {
    WeightParams p;
    p.lambda0 = 0.2;
    p.lambda1 = 0.18;
    p.delta = 0.001;
    p.direction = dir;
    p.validate();
    return p;
}

}  // namespace

TEST_CASE("exponent at t = r = 0", "[weights]") {
    CHECK(lambda_exponent(params(WeightDirection::decreasing), 0.0, 0.0) == Approx(0.182).epsilon(1e-14));
    CHECK(lambda_exponent(params(WeightDirection::increasing), 0.0, 0.0) == Approx(0.178).epsilon(1e-14));
    const std::vector<double> z{0.0};
    CHECK(weight(params(WeightDirection::decreasing), 0.0, z, z) == Approx(std::exp(0.182)).epsilon(1e-14));
}

TEST_CASE("delta terms decay at late times", "[weights]") {
    const auto p = params(WeightDirection::decreasing);
    const double c = std::pow(65.0, 1.0 / 6.0);
    const double limit = 0.18 * c;
    auto direct = [&](double t) {
        return limit + 0.001 * std::pow(1.0 + t, -0.001) * c + 0.001 * std::pow(1.0 + t / (c * c), -0.001) * c;
    };
    double prev = lambda_exponent(p, 0.0, 8.0);
    for (double t : {1e3, 1e6, 1e12, 1e100}) {
        const double v = lambda_exponent(p, t, 8.0);
        CHECK(v == Approx(direct(t)).epsilon(1e-14));
        CHECK(v > limit);
        CHECK(v < prev);
        prev = v;
    }
    // The δ-terms fall like t^{-δ}: slow, but they do go to zero.
    CHECK(lambda_exponent(p, 1e300, 8.0) - limit < 0.6 * (lambda_exponent(p, 0.0, 8.0) - limit));
}

TEST_CASE("weights move monotonically in time", "[weights]") {
    const std::vector<double> k{2.0}, xi{-5.5};
    for (auto dir : {WeightDirection::decreasing, WeightDirection::increasing}) {
        const auto p = params(dir);
        double prev = weight(p, 0.0, k, xi);
        for (double t : {0.5, 3.0, 40.0, 1e3}) {
            const double w = weight(p, t, k, xi);
            if (dir == WeightDirection::decreasing)
                CHECK(w < prev);
            else
                CHECK(w > prev);
            prev = w;
        }
    }
}

TEST_CASE("mollifier factor at <k,xi> = 16", "[weights]") {
    const auto p = params(WeightDirection::decreasing);
    const double r = std::sqrt(255.0);
    const double diff = log_weight_r(p, 1.0, r, MollifierLevel::level(4)) - log_weight_r(p, 1.0, r);
    CHECK(std::exp(diff) == Approx(0.0625).epsilon(1e-13));
    CHECK_THROWS_AS(MollifierLevel::level(3), ArgumentError);
}

TEST_CASE("submultiplicativity on seeded samples", "[weights][property]") {
    for (int d : {1, 2, 3})
        for (auto dir : {WeightDirection::decreasing, WeightDirection::increasing}) {
            const auto rep = check_submultiplicativity(WeightParams::make(0.9, 0.8, dir), 10000, d, 7 + d);
            CHECK(rep.samples == 10000);
            CHECK(rep.violations == 0);
            CHECK(rep.passes);
        }
}

TEST_CASE("commutator constant is stable under doubling", "[weights][property]") {
    for (int d : {1, 2}) {
        const auto p = WeightParams::make(0.9, 0.7);
        const auto a = check_commutator(p, 5000, d, 11);
        const auto b = check_commutator(p, 10000, d, 11);
        REQUIRE(a.fitted_constant > 0.0);
        CHECK(std::isfinite(b.fitted_constant));
        CHECK(std::abs(b.fitted_constant - a.fitted_constant) / a.fitted_constant < 0.1);
    }
}

TEST_CASE("exponent time difference against direct subtraction", "[weights]") {
    const auto p = params(WeightDirection::decreasing);
    CHECK(exponent_time_difference(p, 2.0, 2.0, 3.0) == 0.0);
    // a = 0, b = 1, r = 0: δ(1 - 2^{-δ}) + δ(1 - 2^{-δ}).
    CHECK(exponent_time_difference(p, 0.0, 1.0, 0.0) ==
          Approx(2 * 0.001 * (1 - std::pow(2.0, -0.001))).epsilon(1e-12));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 50.0);
    for (int i = 0; i < 200; ++i) {
        double a = u(rng), b = u(rng);
        if (a > b) std::swap(a, b);
        const double r = u(rng);
        const double direct = lambda_exponent(p, a, r) - lambda_exponent(p, b, r);
        CHECK(exponent_time_difference(p, a, b, r) == Approx(direct).margin(1e-12));
    }
    CHECK_THROWS_AS(exponent_time_difference(p, 2.0, 1.0, 0.0), ArgumentError);
}

TEST_CASE("parameter validation", "[weights]") {
    CHECK_THROWS_AS(WeightParams::make(0.9, 0.95), ArgumentError);
    CHECK_THROWS_AS(WeightParams::make(1.5, 0.8), ArgumentError);
    const auto p = WeightParams::make(0.9, 0.8);
    CHECK(p.lambda1 == Approx(0.72));
    CHECK(p.delta == Approx(0.0045));
}
