#include "landau/penrose.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace landau {

namespace {

std::vector<double> to_double(const std::vector<int>& k) { return {k.begin(), k.end()}; }

void check_query(const EquilibriumSpec& eq, const DispersionQuery& q) {
    if (int(q.k.size()) != eq.dim()) throw ArgumentError("mode k has wrong dimension");
    if (std::all_of(q.k.begin(), q.k.end(), [](int x) { return x == 0; }))
        throw ArgumentError("dispersion function needs k != 0");
    if (!(q.tau.imag() <= 0.0)) throw ArgumentError("tau must lie in the closed lower half-plane");
    if (!std::isfinite(q.tau.real()) || !std::isfinite(q.tau.imag())) throw ArgumentError("tau must be finite");
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace

DispersionFunction::DispersionFunction(const EquilibriumSpec& eq, std::vector<int> k, quad::Options opt)
    : eq_(&eq), k_(std::move(k)), knorm_(norm2(std::span<const int>(k_))), ray_(eq, to_double(k_)), opt_(opt) {}

cplx DispersionFunction::ray_integral(cplx tau, int power, bool by_parts) const {
    if (ray_.is_zero()) return 0.0;
    const double gamma = tau.imag();
    const double alpha = tau.real();
    const RayProfile& ray = ray_;
    quad::Integrand f;
    std::function<double(double)> env;
    if (!by_parts) {
        f = [&ray, alpha, gamma, power](double s) {
            const cplx osc = std::exp(gamma * s) * cplx(std::cos(alpha * s), -std::sin(alpha * s));
            cplx w = s;
            for (int i = 0; i < power; ++i) w *= cplx(0.0, -s);
            return w * ray.value(s) * osc;
        };
        env = [&ray, gamma, power](double s) {
            return std::pow(s, power + 1) * ray.tail_bound(s) * std::exp(gamma * s);
        };
    } else {
        f = [&ray, alpha, gamma](double s) {
            const cplx osc = std::exp(gamma * s) * cplx(std::cos(alpha * s), -std::sin(alpha * s));
            return (ray.value(s) + s * ray.slope(s)) * osc;
        };
        env = [&ray, gamma](double s) {
            return (ray.tail_bound(s) + s * std::abs(ray.slope(s))) * std::exp(gamma * s);
        };
    }
    double width = ray.scale();
    if (std::abs(tau) > 0.0) width = std::min(width, 2.0 * pi / std::abs(tau));
    const double limit = std::isfinite(ray.extent()) ? ray.extent() : 1e6 * ray.scale();
    const auto r = quad::semi_infinite(f, env, 0.0, width, limit, 1e-14, opt_);
    evals_ += r.evaluations;
    return r.value;
}

cplx DispersionFunction::L(cplx tau) const { return ray_integral(tau, 0, false); }

cplx DispersionFunction::L_by_parts(cplx tau) const {
    if (tau == cplx(0.0)) throw ArgumentError("integrated-by-parts route needs tau != 0");
    if (ray_.is_zero()) return 0.0;
    return ray_integral(tau, 0, true) / (cplx(0.0, 1.0) * tau);
}

cplx DispersionFunction::L_auto(cplx tau) const {
    if (std::abs(tau) * ray_.scale() > 8.0) return L_by_parts(tau);
    return L(tau);
}

cplx DispersionFunction::Lprime(cplx tau) const {
    const cplx l = L_auto(tau);
    const cplx z = 1.0 + l;
    if (std::abs(z) <= 1e-12) {
        std::ostringstream msg;
        msg << "Penrose condition violated: |1+L| = " << std::abs(z) << " at tau = " << tau;
        throw InstabilityError(msg.str());
    }
    return l / z;
}

cplx DispersionFunction::derivative(cplx tau, int a) const {
    if (a < 0) throw ArgumentError("derivative order must be >= 0");
    if (a > 6) throw UnsupportedError("dispersion derivatives are supported up to order 6");
    return ray_integral(tau, a, false);
}

cplx dispersion_L(const EquilibriumSpec& eq, const DispersionQuery& q, const quad::Options& opt) {
    check_query(eq, q);
    return DispersionFunction(eq, q.k, opt).L(q.tau);
}

cplx dispersion_L_by_parts(const EquilibriumSpec& eq, const DispersionQuery& q, const quad::Options& opt) {
    check_query(eq, q);
    return DispersionFunction(eq, q.k, opt).L_by_parts(q.tau);
}

cplx dispersion_Lprime(const EquilibriumSpec& eq, const DispersionQuery& q, const quad::Options& opt) {
    check_query(eq, q);
    return DispersionFunction(eq, q.k, opt).Lprime(q.tau);
}

DerivativeResult dispersion_derivative(const EquilibriumSpec& eq, const DispersionQuery& q, int a,
                                       const quad::Options& opt) {
    check_query(eq, q);
    DispersionFunction fn(eq, q.k, opt);
    DerivativeResult r;
    r.value = fn.derivative(q.tau, a);
    const double l0 = eq.lambda0();
    r.bound_constant = bracket(q.tau.real()) * std::abs(r.value) * std::pow(fn.knorm() * l0 * l0 * l0, a + 1) /
                       factorial(3 * a + 5);
    return r;
}

namespace {

std::vector<std::vector<int>> scan_modes(const EquilibriumSpec& eq, int k_max) {
    const int d = eq.dim();
    std::vector<std::vector<int>> all;
    std::vector<int> k(d, -k_max);
    while (true) {
        long n2 = 0;
        for (int x : k) n2 += long(x) * x;
        if (n2 > 0 && n2 <= long(k_max) * k_max) all.push_back(k);
        int a = d - 1;
        while (a >= 0 && ++k[a] > k_max) {
            k[a] = -k_max;
            --a;
        }
        if (a < 0) break;
    }
    if (!eq.radial()) return all;
    // One representative per |k|: the lexicographically largest vector.
    std::map<long, std::vector<int>> by_norm;
    for (const auto& v : all) {
        long n2 = 0;
        for (int x : v) n2 += long(x) * x;
        auto it = by_norm.find(n2);
        if (it == by_norm.end() || v > it->second) by_norm[n2] = v;
    }
    std::vector<std::vector<int>> out;
    for (auto& [n2, v] : by_norm) out.push_back(v);
    return out;
}

double golden_min(const std::function<double(double)>& f, double a, double b, double& xmin) {
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a);
    double d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 200 && (b - a) > 1e-9 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if (fc < fd) {
        xmin = c;
        return fc;
    }
    xmin = d;
    return fd;
}

struct ContourPoint {
    double u;  // arc-length parameter along the contour
    cplx value;
};

// Contour: real axis from -T to T (u in [0, 2T]), then the lower semicircle
// back to -T (u in [2T, (2+π)T]).
cplx contour_tau(double u, double T) {
    if (u <= 2.0 * T) return cplx(u - T, 0.0);
    const double th = -(u - 2.0 * T) / T;
    return T * cplx(std::cos(th), std::sin(th));
}

// Number of zeros of 1+L inside the half-disk {|τ| < T, Im τ < 0}.
int count_zeros(const DispersionFunction& fn, double T, const std::vector<ContourPoint>& real_axis,
                double step, bool& degenerate) {
    std::vector<ContourPoint> path = real_axis;
    const int arc_points = 64;
    const double u_end = (2.0 + pi) * T;
    for (int j = 1; j < arc_points; ++j) {
        const double u = 2.0 * T + pi * T * double(j) / arc_points;
        path.push_back({u, 1.0 + fn.L_auto(contour_tau(u, T))});
    }
    path.push_back({u_end, path.front().value});

    double total = 0.0;
    degenerate = false;
    std::function<void(const ContourPoint&, const ContourPoint&, int)> walk = [&](const ContourPoint& p,
                                                                                 const ContourPoint& q, int depth) {
        const double da = std::arg(q.value / p.value);
        if (std::abs(da) <= step || depth > 40) {
            if (depth > 40) degenerate = true;
            total += da;
            return;
        }
        const double um = 0.5 * (p.u + q.u);
        const ContourPoint m{um, 1.0 + fn.L_auto(contour_tau(um, T))};
        if (std::abs(m.value) < 1e-10) degenerate = true;
        walk(p, m, depth + 1);
        walk(m, q, depth + 1);
    };
    for (std::size_t i = 0; i + 1 < path.size(); ++i) walk(path[i], path[i + 1], 0);
    // The contour runs clockwise around the lower half-disk.
    return -int(std::lround(total / (2.0 * pi)));
}

}  // namespace

PenroseReport penrose_margin(const EquilibriumSpec& eq, int k_max, const TauGrid& grid, const quad::Options& opt) {
    if (k_max < 1) throw ArgumentError("k_max must be >= 1");
    if (grid.samples < 3) throw ArgumentError("tau grid needs at least 3 samples");
    const auto modes = scan_modes(eq, k_max);
    const bool symmetric = eq.real_valued();
    std::vector<PenroseModeReport> reports(modes.size());
    std::vector<std::vector<PenroseSample>> samples(modes.size());
    std::vector<char> suspect(modes.size(), 0);

    parallel_for(modes.size(), [&](std::size_t m) {
        const auto& k = modes[m];
        DispersionFunction fn(eq, k, opt);
        const double T = std::max(grid.cutoff_min, grid.cutoff_per_k * fn.knorm());
        PenroseModeReport& rep = reports[m];
        rep.k = k;
        rep.tau_cutoff = T;
        if (eq.kind() == EquilibriumKind::vacuum) {
            rep.min_modulus = 1.0;
            rep.argmin_tau = 0.0;
            rep.winding = 0;
            return;
        }
        const double lo = symmetric ? 0.0 : -T;
        const std::size_t n = grid.samples;
        std::vector<double> taus(n);
        std::vector<cplx> vals(n);
        std::vector<double> mod(n);
        for (std::size_t i = 0; i < n; ++i) {
            taus[i] = lo + (T - lo) * double(i) / double(n - 1);
            vals[i] = 1.0 + fn.L_auto(taus[i]);
            mod[i] = std::abs(vals[i]);
            samples[m].push_back({k, taus[i], mod[i]});
        }
        auto modulus = [&](double tau) { return std::abs(1.0 + fn.L_auto(tau)); };
        std::size_t best = std::min_element(mod.begin(), mod.end()) - mod.begin();
        rep.min_modulus = mod[best];
        rep.argmin_tau = taus[best];
        for (std::size_t i = 0; i < n; ++i) {
            const bool left_ok = i == 0 || mod[i] <= mod[i - 1];
            const bool right_ok = i + 1 == n || mod[i] <= mod[i + 1];
            if (!(left_ok && right_ok)) continue;
            const double a = taus[i == 0 ? 0 : i - 1];
            const double b = taus[i + 1 == n ? n - 1 : i + 1];
            double x = 0.0;
            const double v = golden_min(modulus, a, b, x);
            if (v < rep.min_modulus) {
                rep.min_modulus = v;
                rep.argmin_tau = x;
            }
        }
        // Full real segment for the contour, using L(-τ) = conj L(τ) when available.
        std::vector<ContourPoint> axis;
        if (symmetric) {
            for (std::size_t i = n - 1; i >= 1; --i) axis.push_back({T - taus[i], std::conj(vals[i])});
        }
        for (std::size_t i = 0; i < n; ++i) axis.push_back({taus[i] + T, vals[i]});
        bool degenerate = false;
        rep.winding = count_zeros(fn, T, axis, grid.winding_step, degenerate);
        suspect[m] = (rep.winding != 0 || degenerate || rep.min_modulus < 1e-10) ? 1 : 0;
    });

    PenroseReport out;
    out.modes = reports;
    std::size_t best = 0;
    for (std::size_t m = 0; m < reports.size(); ++m) {
        if (reports[m].min_modulus < reports[best].min_modulus) best = m;
        if (suspect[m]) out.zero_suspected = true;
    }
    out.margin = reports[best].min_modulus;
    out.argmin_k = reports[best].k;
    out.argmin_tau = reports[best].argmin_tau;
    if (out.zero_suspected) out.margin = 0.0;
    for (auto& s : samples) out.samples.insert(out.samples.end(), s.begin(), s.end());
    return out;
}

}  // namespace landau
