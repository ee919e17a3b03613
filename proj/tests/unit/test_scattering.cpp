#include "catch_amalgamated.hpp"

#include <cmath>

#include "landau/common.hpp"
#include "landau/scattering.hpp"

using namespace landau;
using Catch::Approx;

namespace {

const FourierGrid kGrid{1, 4, 16.0, 128};  // horizon xi_max/K = 4
const std::vector<double> kHorizons{1.0, 2.0, 4.0};

GlideState two_modes(double eps) {
    auto s = cosine_mode_glide(kGrid, eps, {1});
    const auto b = cosine_mode_glide(kGrid, 0.5 * eps, {2}, 0.8);
    for (std::size_t i = 0; i < s.ghat.size(); ++i) s.ghat[i] += b.ghat[i];
    return s;
}

OperatorOptions linear_options() {
    OperatorOptions o;
    o.glide.nonlinear = false;
    return o;
}

}  // namespace

TEST_CASE("reflection is an involution", "[scattering]") {
    auto s = two_modes(0.1);
    s.ghat[5] += cplx(0.0, 0.3);  // break symmetry so the check is not vacuous
    const auto r = reflect(s);
    CHECK(r.ghat != s.ghat);
    CHECK(reflect(r).ghat == s.ghat);
    const auto m = kGrid.mode_index(std::vector<int>{3});
    const auto mm = kGrid.mode_index(std::vector<int>{-3});
    for (std::size_t j = 0; j < kGrid.row_size(); ++j) CHECK(r.at(m, j) == s.at(mm, j));
}

TEST_CASE("vacuum operators are the identity", "[scattering]") {
    const auto eq = EquilibriumSpec::vacuum(1);
    const auto opt = linear_options();
    const auto x = two_modes(0.2);
    for (auto kind : {OperatorKind::final_state, OperatorKind::wave, OperatorKind::scattering}) {
        INFO(to_string(kind));
        const auto op = make_operator(kind, eq, kHorizons, 0.05, opt);
        CHECK(op(x).ghat == x.ghat);
    }
    const auto w = wave_operator(x, eq, kHorizons, 0.05, opt);
    for (double gap : w.cauchy_gaps) CHECK(gap == 0.0);
    for (const auto& s : w.solutions) CHECK(s.ghat == x.ghat);
    const auto f = final_state_forward(x, eq, 4.0, 0.05, opt);
    for (double inc : f.increments) CHECK(inc == 0.0);
    CHECK(std::isinf(f.fitted_exponent));
}

TEST_CASE("zero data maps to zero", "[scattering]") {
    const auto eq = EquilibriumSpec::maxwellian(1);
    const GlideState z(kGrid, 0.0);
    for (auto kind : {OperatorKind::final_state, OperatorKind::wave, OperatorKind::scattering}) {
        const auto out = make_operator(kind, eq, kHorizons, 0.05)(z);
        for (const auto& v : out.ghat) CHECK(v == cplx(0.0));
    }
    for (double gap : wave_operator(z, eq, kHorizons, 0.05).cauchy_gaps) CHECK(gap == 0.0);
}

TEST_CASE("wave-operator gaps shrink with the horizon", "[scattering]") {
    const auto eq = EquilibriumSpec::maxwellian(1, 1.0, 0.9);
    const auto g_inf = cosine_mode_glide(kGrid, 1e-3, {1});
    OperatorOptions opt;
    const auto run = wave_operator(g_inf, eq, kHorizons, 0.01, opt);
    REQUIRE(run.cauchy_gaps.size() == 2);
    CHECK(run.cauchy_gaps[1] < run.cauchy_gaps[0]);
    CHECK(run.output.ghat == run.solutions.back().ghat);
    CHECK(run.output.t == Approx(0.0).margin(1e-12));
    CHECK_FALSE(run.invalidated);
}

TEST_CASE("final-state tail increments decay", "[scattering]") {
    const auto eq = EquilibriumSpec::maxwellian(1, 1.0, 0.9);
    const auto res = final_state_forward(cosine_mode_glide(kGrid, 1e-3, {1}), eq, 4.0, 0.01);
    REQUIRE(res.ladder.size() == 5);
    CHECK(res.ladder.back() == 4.0);
    CHECK(res.g_inf.t == Approx(4.0));
    INFO("increments " << res.increments[0] << " " << res.increments[1] << " " << res.increments[2] << " "
                       << res.increments[3] << ", fitted " << res.fitted_exponent);
    CHECK(std::isfinite(res.fitted_exponent));
    CHECK(res.fitted_exponent >= 0.28 * 0.9 * 0.8);
}

TEST_CASE("operator argument checks", "[scattering]") {
    const auto eq = EquilibriumSpec::maxwellian(1);
    auto charged = cosine_mode_glide(kGrid, 1e-3, {1});
    charged.at(kGrid.zero_mode(), kGrid.zero_node()) = 1e-3;
    CHECK_THROWS_AS(wave_operator(charged, eq, kHorizons, 0.05), ArgumentError);
    const auto g = cosine_mode_glide(kGrid, 1e-3, {1});
    CHECK_THROWS_AS(wave_operator(g, eq, {1.0, 8.0}, 0.05), HorizonError);
    CHECK_THROWS_AS(final_state_forward(g, eq, 8.0, 0.05), HorizonError);
    CHECK_THROWS_AS(wave_operator(g, eq, {2.0, 1.0}, 0.05), ArgumentError);
    CHECK_THROWS_AS(wave_operator(g, eq, {}, 0.05), ArgumentError);
    CHECK(parse_operator_kind("W+") == OperatorKind::wave);
    CHECK_THROWS_AS(parse_operator_kind("nope"), ArgumentError);
}

TEST_CASE("Lipschitz probe", "[scattering]") {
    const auto a = two_modes(1e-3);
    auto b = a;
    const auto d = cosine_mode_glide(kGrid, 1e-4, {1});
    for (std::size_t i = 0; i < b.ghat.size(); ++i) b.ghat[i] += d.ghat[i];

    const auto vac = EquilibriumSpec::vacuum(1);
    const auto id = make_operator(OperatorKind::scattering, vac, kHorizons, 0.05, linear_options());
    const auto same = lipschitz_probe(id, a, a, 0.45, 0.225);
    CHECK(same.degenerate);
    const auto matched = lipschitz_probe(id, a, b, 0.45, 0.45);
    CHECK(matched.upper_ratio == 1.0);
    CHECK(matched.lower_ratio == 1.0);

    const auto eq = EquilibriumSpec::maxwellian(1, 1.0, 0.9);
    for (auto kind : {OperatorKind::final_state, OperatorKind::wave}) {
        const auto rep = lipschitz_probe(make_operator(kind, eq, kHorizons, 0.02), a, b, 0.45, 0.225);
        INFO(to_string(kind) << " upper " << rep.upper_ratio << " lower " << rep.lower_ratio);
        CHECK_FALSE(rep.degenerate);
        CHECK(std::isfinite(rep.upper_ratio));
        CHECK(rep.lower_ratio > 0.0);
    }
}
