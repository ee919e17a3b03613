#include "landau/quadrature.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

namespace landau::quad {

namespace {

constexpr double xgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                           0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                           0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                           0.207784955007898467600689403773245, 0.0};
constexpr double wgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                           0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                           0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                           0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                          0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double eps = std::numeric_limits<double>::epsilon();

struct Panel {
    double a = 0, b = 0;
    cplx value{};
    double error = 0;
    double resabs = 0;
    bool frozen = false;  // error at round-off level or panel too narrow to split
};

Panel gk15(const Integrand& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const cplx fc = f(c);
    cplx rk = fc * wgk[7];
    cplx rg = fc * wg[3];
    double resabs = std::abs(fc) * wgk[7];
    cplx fv1[7], fv2[7];
    for (int j = 0; j < 7; ++j) {
        const double x = h * xgk[j];
        fv1[j] = f(c - x);
        fv2[j] = f(c + x);
        rk += wgk[j] * (fv1[j] + fv2[j]);
        resabs += wgk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
        if (j % 2 == 1) rg += wg[j / 2] * (fv1[j] + fv2[j]);
    }
    const cplx mean = rk * 0.5;
    double resasc = wgk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j) resasc += wgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));
    Panel p;
    p.a = a;
    p.b = b;
    p.value = rk * h;
    resabs *= std::abs(h);
    resasc *= std::abs(h);
    double err = std::abs((rk - rg) * h);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double floor = 50.0 * eps * resabs;
    if (err <= floor) {
        err = floor;
        p.frozen = true;
    }
    p.error = err;
    p.resabs = resabs;
    const double width_floor = 1e3 * eps * std::max(std::abs(a), std::abs(b));
    if (std::abs(b - a) <= width_floor) p.frozen = true;
    return p;
}

struct ByError {
    bool operator()(const Panel& x, const Panel& y) const { return x.error < y.error; }
};

Result refine(const Integrand& f, std::vector<Panel> panels, std::size_t evals, const Options& opt) {
    std::priority_queue<Panel, std::vector<Panel>, ByError> heap;
    std::vector<Panel> done;
    cplx total{};
    double total_err = 0.0;
    double total_abs = 0.0;
    for (auto& p : panels) {
        total += p.value;
        total_err += p.error;
        total_abs += p.resabs;
        if (p.frozen)
            done.push_back(p);
        else
            heap.push(p);
    }
    std::size_t iter = 0;
    while (!heap.empty()) {
        if (++iter % 256 == 0) {
            // Re-accumulate to keep the running sums free of drift.
            total = 0.0;
            total_err = 0.0;
            total_abs = 0.0;
            auto copy = heap;
            while (!copy.empty()) {
                total += copy.top().value;
                total_err += copy.top().error;
                total_abs += copy.top().resabs;
                copy.pop();
            }
            for (const auto& p : done) {
                total += p.value;
                total_err += p.error;
                total_abs += p.resabs;
            }
        }
        // Under heavy cancellation the relative target can sit below the
        // round-off of ∫|f|; stop at that floor instead of spinning.
        const double tol = std::max({opt.abs_tol, opt.rel_tol * std::abs(total), 50.0 * eps * total_abs});
        if (total_err <= tol) break;
        if (evals + 30 > opt.max_evaluations) {
            std::ostringstream msg;
            msg << "quadrature budget exhausted after " << evals << " evaluations: estimate " << total
                << ", error " << total_err << ", tolerance " << tol << ", worst panel [" << heap.top().a << ", "
                << heap.top().b << "]";
            throw NumericalError(msg.str());
        }
        Panel p = heap.top();
        heap.pop();
        const double m = 0.5 * (p.a + p.b);
        Panel left = gk15(f, p.a, m);
        Panel right = gk15(f, m, p.b);
        evals += 30;
        total += left.value + right.value - p.value;
        total_err += left.error + right.error - p.error;
        total_abs += left.resabs + right.resabs - p.resabs;
        for (auto* q : {&left, &right}) {
            if (q->frozen)
                done.push_back(*q);
            else
                heap.push(*q);
        }
    }
    while (!heap.empty()) {
        done.push_back(heap.top());
        heap.pop();
    }
    std::sort(done.begin(), done.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    Result r;
    for (const auto& p : done) {
        r.value += p.value;
        r.error += p.error;
        r.abs_integral += p.resabs;
    }
    r.evaluations = evals;
    r.intervals = done.size();
    return r;
}

}  // namespace

Result adaptive(const Integrand& f, std::span<const double> breakpoints, const Options& opt) {
    if (breakpoints.size() < 2) throw ArgumentError("quadrature needs at least two breakpoints");
    std::vector<Panel> panels;
    std::size_t evals = 0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (breakpoints[i + 1] == breakpoints[i]) continue;
        panels.push_back(gk15(f, breakpoints[i], breakpoints[i + 1]));
        evals += 15;
    }
    if (panels.empty()) return {};
    return refine(f, std::move(panels), evals, opt);
}

Result adaptive(const Integrand& f, double a, double b, const Options& opt) {
    const double bp[2] = {a, b};
    return adaptive(f, std::span<const double>(bp, 2), opt);
}

Result semi_infinite(const Integrand& f, const std::function<double(double)>& envelope, double a, double width,
                     double limit, double truncation, const Options& opt) {
    if (!(width > 0.0)) throw ArgumentError("panel width must be positive");
    std::vector<Panel> panels;
    std::size_t evals = 0;
    cplx running{};
    double s = a;
    double prev_env = envelope(a);
    while (s < limit) {
        const double e = std::min(limit, s + width);
        panels.push_back(gk15(f, s, e));
        evals += 15;
        running += panels.back().value;
        s = e;
        const double env = envelope(s);
        const bool past_peak = env <= prev_env;
        prev_env = env;
        if (past_peak && (env <= truncation * std::abs(running) || env < 1e-300)) break;
        if (evals > opt.max_evaluations) {
            std::ostringstream msg;
            msg << "semi-infinite quadrature did not reach its truncation point: s = " << s << ", envelope "
                << env << ", estimate " << running;
            throw NumericalError(msg.str());
        }
    }
    return refine(f, std::move(panels), evals, opt);
}

}  // namespace landau::quad
