#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace landau {

enum class WeightDirection { decreasing, increasing };

struct WeightParams {
    double lambda0 = 0.2;
    double lambda1 = 0.18;
    double delta = 0.001;
    WeightDirection direction = WeightDirection::decreasing;

    // lambda1 = fraction·lambda0, delta = lambda0/200.
    static WeightParams make(double lambda0, double lambda1_fraction,
                             WeightDirection direction = WeightDirection::decreasing);
    void validate() const;
};

struct MollifierLevel {
    std::optional<int> L;  // empty: no mollifier

    static MollifierLevel none() { return {}; }
    static MollifierLevel level(int L);
};

double lambda_exponent(const WeightParams& p, double t, double r);

// log of A (or A♯) times the mollifier factor.
double log_weight(const WeightParams& p, double t, std::span<const double> k, std::span<const double> xi,
                  MollifierLevel m = {});
double weight(const WeightParams& p, double t, std::span<const double> k, std::span<const double> xi,
              MollifierLevel m = {});
// Same with the joint norm |k,ξ| given directly.
double log_weight_r(const WeightParams& p, double t, double r, MollifierLevel m = {});

double exponent_time_difference(const WeightParams& p, double a, double b, double r);

struct WeightSample {
    double t = 0.0;
    std::vector<double> k, xi, kp, xip;
};

struct SubmultiplicativityReport {
    std::size_t samples = 0;
    std::size_t violations = 0;
    double worst_ratio = 0.0;
    WeightSample worst;
    bool passes = false;
};

struct CommutatorReport {
    std::size_t samples = 0;
    double fitted_constant = 0.0;
    WeightSample worst;
};

// Both checks draw t ~ logUniform[1e-2, 1e4], integer k components in
// [-32, 32] and ξ components uniform in [-64, 64] from a seeded mt19937_64.
SubmultiplicativityReport check_submultiplicativity(const WeightParams& p, std::size_t samples, int dim = 1,
                                                    std::uint64_t seed = 20240601);
// Samples (k', ξ') uniformly in the ball of radius |k,ξ|/8 around 0.
CommutatorReport check_commutator(const WeightParams& p, std::size_t samples, int dim = 1,
                                  std::uint64_t seed = 20240602);

}  // namespace landau
