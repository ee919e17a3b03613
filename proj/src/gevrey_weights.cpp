#include "landau/gevrey_weights.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "landau/common.hpp"

namespace landau {

WeightParams WeightParams::make(double lambda0, double lambda1_fraction, WeightDirection direction) {
    WeightParams p;
    p.lambda0 = lambda0;
    p.lambda1 = lambda1_fraction * lambda0;
    p.delta = lambda0 / 200.0;
    p.direction = direction;
    p.validate();
    return p;
}

void WeightParams::validate() const {
    if (!(lambda0 > 0.0 && lambda0 <= 1.0)) throw ArgumentError("weights: lambda0 must lie in (0,1]");
    const double frac = lambda1 / lambda0;
    if (frac < 0.5 - 1e-12 || frac > 0.9 + 1e-12)
        throw ArgumentError("weights: lambda1/lambda0 must lie in [0.5, 0.9]");
    if (delta != lambda0 / 200.0) throw ArgumentError("weights: delta must equal lambda0/200");
}

MollifierLevel MollifierLevel::level(int L) {
    if (L < 4) throw ArgumentError("mollifier level must be >= 4");
    MollifierLevel m;
    m.L = L;
    return m;
}

double lambda_exponent(const WeightParams& p, double t, double r) {
    const double br = bracket(r);
    const double c = std::cbrt(br);
    const double sgn = p.direction == WeightDirection::decreasing ? 1.0 : -1.0;
    const double a = std::pow(1.0 + t, -p.delta);
    const double b = std::pow(1.0 + t / (c * c), -p.delta);
    return p.lambda1 * c + sgn * p.delta * (a + b) * c;
}

double log_weight_r(const WeightParams& p, double t, double r, MollifierLevel m) {
    double lw = lambda_exponent(p, t, r);
    if (m.L) lw -= 4.0 * std::log1p(std::ldexp(bracket(r), -*m.L));
    return lw;
}

double log_weight(const WeightParams& p, double t, std::span<const double> k, std::span<const double> xi,
                  MollifierLevel m) {
    return log_weight_r(p, t, joint_norm(k, xi), m);
}

double weight(const WeightParams& p, double t, std::span<const double> k, std::span<const double> xi,
              MollifierLevel m) {
    return std::exp(log_weight(p, t, k, xi, m));
}

double exponent_time_difference(const WeightParams& p, double a, double b, double r) {
    if (a > b) throw ArgumentError("exponent_time_difference requires a <= b");
    if (a == b) return 0.0;
    const double c = std::cbrt(bracket(r));
    const double q = 1.0 / (c * c);
    // x^{-δ} - y^{-δ} = -x^{-δ} expm1(-δ log(y/x)), well conditioned for y ≈ x.
    auto diff = [&](double x, double y) {
        return -std::pow(x, -p.delta) * std::expm1(-p.delta * std::log(y / x));
    };
    const double value = p.delta * c * (diff(1.0 + a, 1.0 + b) + diff(1.0 + a * q, 1.0 + b * q));
    // λ(a)-λ(b) for the decreasing weights; the increasing weights satisfy
    // λ♯(b)-λ♯(a) = the same quantity, so the result does not depend on direction.
    return value;
}

namespace {

struct Sampler {
    std::mt19937_64 rng;
    int dim;

    Sampler(std::uint64_t seed, int d) : rng(seed), dim(d) {}

    double time() {
        std::uniform_real_distribution<double> u(std::log(1e-2), std::log(1e4));
        return std::exp(u(rng));
    }
    std::vector<double> kvec() {
        std::uniform_int_distribution<int> u(-32, 32);
        std::vector<double> k(dim);
        for (auto& x : k) x = u(rng);
        return k;
    }
    std::vector<double> xivec() {
        std::uniform_real_distribution<double> u(-64.0, 64.0);
        std::vector<double> xi(dim);
        for (auto& x : xi) x = u(rng);
        return xi;
    }
};

}  // namespace

SubmultiplicativityReport check_submultiplicativity(const WeightParams& p, std::size_t samples, int dim,
                                                    std::uint64_t seed) {
    if (samples < 1) throw ArgumentError("samples must be >= 1");
    p.validate();
    Sampler s(seed, dim);
    SubmultiplicativityReport rep;
    rep.samples = samples;
    double worst_log = -std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < samples; ++n) {
        WeightSample w;
        w.t = s.time();
        w.k = s.kvec();
        w.xi = s.xivec();
        w.kp = s.kvec();
        w.xip = s.xivec();
        std::vector<double> ks(dim), xs(dim);
        for (int i = 0; i < dim; ++i) {
            ks[i] = w.k[i] + w.kp[i];
            xs[i] = w.xi[i] + w.xip[i];
        }
        const double r1 = joint_norm(w.k, w.xi);
        const double r2 = joint_norm(w.kp, w.xip);
        const double lr = lambda_exponent(p, w.t, joint_norm(ks, xs)) - lambda_exponent(p, w.t, r1) -
                          lambda_exponent(p, w.t, r2) +
                          0.25 * p.lambda1 * std::cbrt(std::min(bracket(r1), bracket(r2)));
        // A log-ratio above round-off level counts as a violation.
        if (lr > 1e-12) ++rep.violations;
        if (lr > worst_log) {
            worst_log = lr;
            rep.worst = w;
        }
    }
    rep.worst_ratio = std::exp(worst_log);
    rep.passes = rep.violations == 0;
    return rep;
}

CommutatorReport check_commutator(const WeightParams& p, std::size_t samples, int dim, std::uint64_t seed) {
    if (samples < 1) throw ArgumentError("samples must be >= 1");
    p.validate();
    Sampler s(seed, dim);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    CommutatorReport rep;
    rep.samples = samples;
    for (std::size_t n = 0; n < samples; ++n) {
        WeightSample w;
        w.t = s.time();
        w.k = s.kvec();
        w.xi = s.xivec();
        const double r = joint_norm(w.k, w.xi);
        std::vector<double> dir(2 * dim);
        double dn = 0.0;
        for (auto& x : dir) {
            x = gauss(s.rng);
            dn += x * x;
        }
        dn = std::sqrt(dn);
        const double radius = r / 8.0 * std::pow(unit(s.rng), 1.0 / double(2 * dim));
        w.kp.resize(dim);
        w.xip.resize(dim);
        std::vector<double> ks(dim), xs(dim);
        for (int i = 0; i < dim; ++i) {
            w.kp[i] = radius * dir[i] / dn;
            w.xip[i] = radius * dir[dim + i] / dn;
            ks[i] = w.k[i] + w.kp[i];
            xs[i] = w.xi[i] + w.xip[i];
        }
        const double rp = joint_norm(w.kp, w.xip);
        const double jump = std::abs(std::expm1(lambda_exponent(p, w.t, joint_norm(ks, xs)) - lambda_exponent(p, w.t, r)));
        const double ratio = jump * std::exp(-lambda_exponent(p, w.t, rp) + 0.25 * p.lambda1 * std::cbrt(bracket(rp)) +
                                             (2.0 / 3.0) * std::log(bracket(r)));
        if (ratio > rep.fitted_constant) {
            rep.fitted_constant = ratio;
            rep.worst = w;
        }
    }
    return rep;
}

}  // namespace landau
