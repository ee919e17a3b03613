#pragma once

#include <functional>
#include <span>

#include "landau/common.hpp"

namespace landau::quad {

struct Options {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    std::size_t max_evaluations = 4'000'000;
};

struct Result {
    cplx value{};
    double error = 0.0;
    double abs_integral = 0.0;
    std::size_t evaluations = 0;
    std::size_t intervals = 0;
};

using Integrand = std::function<cplx(double)>;

// Globally adaptive Gauss–Kronrod (7/15) over consecutive panels given by
// breakpoints. Throws NumericalError when the evaluation budget runs out.
Result adaptive(const Integrand& f, std::span<const double> breakpoints, const Options& opt = {});
Result adaptive(const Integrand& f, double a, double b, const Options& opt = {});

// ∫_a^∞ f with panels of the given width, appended until envelope(s) falls
// below truncation·|running integral| past the envelope peak, or until
// `limit` is reached; the collected panels are then refined adaptively.
Result semi_infinite(const Integrand& f, const std::function<double(double)>& envelope, double a, double width,
                     double limit, double truncation, const Options& opt = {});

}  // namespace landau::quad
