#include "landau/equilibria.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include "landau/io.hpp"

namespace landau {

const char* to_string(EquilibriumKind kind) {
    switch (kind) {
        case EquilibriumKind::vacuum: return "vacuum";
        case EquilibriumKind::maxwellian: return "maxwellian";
        case EquilibriumKind::poisson: return "poisson";
        case EquilibriumKind::tabulated: return "tabulated";
    }
    return "unknown";
}

namespace {

void check_params(int dim, double lambda0, double theta) {
    if (dim < 1) throw ArgumentError("equilibrium dimension must be >= 1");
    if (!(lambda0 > 0.0 && lambda0 <= 1.0)) throw ArgumentError("lambda0 must lie in (0,1]");
    if (!(theta > 0.0 && theta <= 1.0)) throw ArgumentError("theta must lie in (0,1]");
}

// Cubic Hermite interpolation on a nonuniform axis with finite-difference
// slopes. The interpolant is a linear combination of at most four samples;
// fills node indices and the value/derivative weights.
struct AxisStencil {
    std::array<int, 4> idx{};
    std::array<double, 4> w{};
    std::array<double, 4> dw{};
    int count = 0;
};

// Slope at node i as weights over nodes i-1, i, i+1.
void slope_weights(const std::vector<double>& x, int i, std::array<int, 3>& nodes,
                   std::array<double, 3>& c, int& n) {
    const int last = int(x.size()) - 1;
    if (last == 0) {
        n = 0;
        return;
    }
    if (i == 0) {
        const double h = x[1] - x[0];
        nodes = {0, 1, 0};
        c = {-1.0 / h, 1.0 / h, 0.0};
        n = 2;
    } else if (i == last) {
        const double h = x[last] - x[last - 1];
        nodes = {last - 1, last, 0};
        c = {-1.0 / h, 1.0 / h, 0.0};
        n = 2;
    } else {
        const double hm = x[i] - x[i - 1];
        const double hp = x[i + 1] - x[i];
        nodes = {i - 1, i, i + 1};
        c = {-hp / (hm * (hm + hp)), (hp - hm) / (hm * hp), hm / (hp * (hm + hp))};
        n = 3;
    }
}

AxisStencil axis_stencil(const std::vector<double>& x, double q) {
    AxisStencil st;
    const int n = int(x.size());
    if (n == 1) {
        st.idx[0] = 0;
        st.w[0] = 1.0;
        st.dw[0] = 0.0;
        st.count = 1;
        return st;
    }
    int i = int(std::upper_bound(x.begin(), x.end(), q) - x.begin()) - 1;
    i = std::clamp(i, 0, n - 2);
    const double h = x[i + 1] - x[i];
    const double u = (q - x[i]) / h;
    const double h00 = 2 * u * u * u - 3 * u * u + 1;
    const double h10 = u * u * u - 2 * u * u + u;
    const double h01 = -2 * u * u * u + 3 * u * u;
    const double h11 = u * u * u - u * u;
    const double d00 = (6 * u * u - 6 * u) / h;
    const double d10 = 3 * u * u - 4 * u + 1;
    const double d01 = (-6 * u * u + 6 * u) / h;
    const double d11 = 3 * u * u - 2 * u;

    auto add = [&](int node, double w, double dw) {
        for (int j = 0; j < st.count; ++j) {
            if (st.idx[j] == node) {
                st.w[j] += w;
                st.dw[j] += dw;
                return;
            }
        }
        st.idx[st.count] = node;
        st.w[st.count] = w;
        st.dw[st.count] = dw;
        ++st.count;
    };
    add(i, h00, d00);
    add(i + 1, h01, d01);
    std::array<int, 3> nodes{};
    std::array<double, 3> c{};
    int m = 0;
    slope_weights(x, i, nodes, c, m);
    for (int j = 0; j < m; ++j) add(nodes[j], h * h10 * c[j], h * d10 * c[j] / h);
    slope_weights(x, i + 1, nodes, c, m);
    for (int j = 0; j < m; ++j) add(nodes[j], h * h11 * c[j], h * d11 * c[j] / h);
    return st;
}

bool inside(const std::vector<double>& axis, double q) { return q >= axis.front() && q <= axis.back(); }

cplx table_eval(const TabulatedData& t, std::span<const double> xi, int grad_axis) {
    const int d = int(t.axes.size());
    if (t.separable) {
        cplx prod = 1.0;
        std::size_t offset = 0;
        for (int a = 0; a < d; ++a) {
            const auto st = axis_stencil(t.axes[a], xi[a]);
            cplx v = 0.0;
            for (int j = 0; j < st.count; ++j)
                v += (a == grad_axis ? st.dw[j] : st.w[j]) * t.values[offset + st.idx[j]];
            prod *= v;
            offset += t.axes[a].size();
        }
        return prod;
    }
    std::vector<AxisStencil> st(d);
    for (int a = 0; a < d; ++a) st[a] = axis_stencil(t.axes[a], xi[a]);
    std::vector<std::size_t> stride(d, 1);
    for (int a = d - 2; a >= 0; --a) stride[a] = stride[a + 1] * t.axes[a + 1].size();
    std::vector<int> pos(d, 0);
    cplx sum = 0.0;
    while (true) {
        double w = 1.0;
        std::size_t flat = 0;
        for (int a = 0; a < d; ++a) {
            w *= (a == grad_axis ? st[a].dw[pos[a]] : st[a].w[pos[a]]);
            flat += stride[a] * std::size_t(st[a].idx[pos[a]]);
        }
        sum += w * t.values[flat];
        int a = d - 1;
        while (a >= 0 && ++pos[a] == st[a].count) {
            pos[a] = 0;
            --a;
        }
        if (a < 0) break;
    }
    return sum;
}

}  // namespace

EquilibriumSpec EquilibriumSpec::vacuum(int dim, double lambda0, double theta) {
    check_params(dim, lambda0, theta);
    EquilibriumSpec e;
    e.kind_ = EquilibriumKind::vacuum;
    e.dim_ = dim;
    e.lambda0_ = lambda0;
    e.theta_ = theta;
    return e;
}

EquilibriumSpec EquilibriumSpec::maxwellian(int dim, double sigma, double lambda0, double theta) {
    check_params(dim, lambda0, theta);
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ArgumentError("maxwellian sigma must be positive");
    EquilibriumSpec e;
    e.kind_ = EquilibriumKind::maxwellian;
    e.dim_ = dim;
    e.sigma_ = sigma;
    e.lambda0_ = lambda0;
    e.theta_ = theta;
    return e;
}

EquilibriumSpec EquilibriumSpec::poisson(int dim, double lambda0, double theta) {
    check_params(dim, lambda0, theta);
    EquilibriumSpec e;
    e.kind_ = EquilibriumKind::poisson;
    e.dim_ = dim;
    e.lambda0_ = lambda0;
    e.theta_ = theta;
    return e;
}

EquilibriumSpec EquilibriumSpec::tabulated(TabulatedData data, double lambda0, double theta) {
    const int dim = int(data.axes.size());
    check_params(dim, lambda0, theta);
    std::size_t expected = data.separable ? 0 : 1;
    for (const auto& axis : data.axes) {
        if (axis.size() < 2) throw ArgumentError("tabulated axis needs at least two nodes");
        for (std::size_t i = 0; i < axis.size(); ++i) {
            if (!std::isfinite(axis[i])) throw ArgumentError("tabulated grid has non-finite node");
            if (i > 0 && !(axis[i] > axis[i - 1]))
                throw ArgumentError("tabulated grid must be strictly increasing");
        }
        if (data.separable)
            expected += axis.size();
        else
            expected *= axis.size();
    }
    if (data.values.size() != expected) throw ArgumentError("tabulated values do not match grid shape");
    bool real = true;
    for (const auto& v : data.values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw ArgumentError("tabulated values must be finite");
        if (v.imag() != 0.0) real = false;
    }
    EquilibriumSpec e;
    e.kind_ = EquilibriumKind::tabulated;
    e.dim_ = dim;
    e.lambda0_ = lambda0;
    e.theta_ = theta;
    e.real_valued_ = real;
    e.table_ = std::make_shared<const TabulatedData>(std::move(data));
    return e;
}

void EquilibriumSpec::check_point(std::span<const double> xi) const {
    if (int(xi.size()) != dim_) throw ArgumentError("frequency vector has wrong dimension");
    for (double x : xi)
        if (!std::isfinite(x)) throw DomainError("frequency vector is not finite");
    if (kind_ == EquilibriumKind::tabulated) {
        for (int a = 0; a < dim_; ++a)
            if (!inside(table_->axes[a], xi[a]))
                throw DomainError("frequency outside the tabulated grid hull");
    }
}

cplx EquilibriumSpec::fourier_value(std::span<const double> xi) const {
    check_point(xi);
    switch (kind_) {
        case EquilibriumKind::vacuum: return 0.0;
        case EquilibriumKind::maxwellian: {
            double r2 = 0.0;
            for (double x : xi) r2 += x * x;
            return std::exp(-0.5 * sigma_ * sigma_ * r2);
        }
        case EquilibriumKind::poisson: return std::exp(-norm2(xi));
        case EquilibriumKind::tabulated: return table_eval(*table_, xi, -1);
    }
    return 0.0;
}

cplx EquilibriumSpec::fourier_value_or_zero(std::span<const double> xi) const {
    if (kind_ == EquilibriumKind::tabulated) {
        for (int a = 0; a < dim_ && a < int(xi.size()); ++a)
            if (!inside(table_->axes[a], xi[a])) return 0.0;
    }
    return fourier_value(xi);
}

std::vector<cplx> EquilibriumSpec::grad_fourier_value(std::span<const double> xi) const {
    check_point(xi);
    std::vector<cplx> g(dim_, 0.0);
    switch (kind_) {
        case EquilibriumKind::vacuum: break;
        case EquilibriumKind::maxwellian: {
            double r2 = 0.0;
            for (double x : xi) r2 += x * x;
            const double s2 = sigma_ * sigma_;
            const double e = std::exp(-0.5 * s2 * r2);
            for (int i = 0; i < dim_; ++i) g[i] = -s2 * xi[i] * e;
            break;
        }
        case EquilibriumKind::poisson: {
            const double r = norm2(xi);
            if (r == 0.0) break;
            const double e = std::exp(-r);
            for (int i = 0; i < dim_; ++i) g[i] = -xi[i] / r * e;
            break;
        }
        case EquilibriumKind::tabulated:
            for (int i = 0; i < dim_; ++i) g[i] = table_eval(*table_, xi, i);
            break;
    }
    return g;
}

double EquilibriumSpec::ray_extent(std::span<const double> k) const {
    if (kind_ != EquilibriumKind::tabulated) return std::numeric_limits<double>::infinity();
    double ext = std::numeric_limits<double>::infinity();
    for (int a = 0; a < dim_; ++a) {
        if (k[a] > 0)
            ext = std::min(ext, table_->axes[a].back() / k[a]);
        else if (k[a] < 0)
            ext = std::min(ext, table_->axes[a].front() / k[a]);
    }
    return std::max(ext, 0.0);
}

RayProfile::RayProfile(const EquilibriumSpec& eq, std::span<const double> k)
    : eq_(&eq), kind_(eq.kind()), k_(k.begin(), k.end()) {
    if (int(k.size()) != eq.dim()) throw ArgumentError("ray direction has wrong dimension");
    knorm_ = norm2(k);
    if (knorm_ == 0.0) throw ArgumentError("ray direction must be nonzero");
    switch (kind_) {
        case EquilibriumKind::vacuum:
            scale_ = 1.0 / knorm_;
            break;
        case EquilibriumKind::maxwellian:
            scale_ = 1.0 / (eq.sigma() * knorm_);
            d0_ = 1.0;
            d1_ = 0.0;
            d2_ = -eq.sigma() * eq.sigma() * knorm_ * knorm_;
            break;
        case EquilibriumKind::poisson:
            scale_ = 1.0 / knorm_;
            d0_ = 1.0;
            d1_ = -knorm_;
            d2_ = knorm_ * knorm_;
            break;
        case EquilibriumKind::tabulated: {
            extent_ = eq.ray_extent(k);
            scale_ = std::max(extent_ / 16.0, 1e-12);
            const double h = std::min(1e-3 * scale_, extent_ / 4.0);
            const cplx f0 = value(0.0), f1 = value(h), f2 = value(2 * h), f3 = value(3 * h);
            d0_ = f0;
            d1_ = (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h);
            d2_ = (2.0 * f0 - 5.0 * f1 + 4.0 * f2 - f3) / (h * h);
            break;
        }
    }
}

cplx RayProfile::value(double s) const {
    switch (kind_) {
        case EquilibriumKind::vacuum: return 0.0;
        case EquilibriumKind::maxwellian: {
            const double a = eq_->sigma() * knorm_ * s;
            return std::exp(-0.5 * a * a);
        }
        case EquilibriumKind::poisson: return std::exp(-knorm_ * std::abs(s));
        case EquilibriumKind::tabulated: {
            std::array<double, 8> buf{};
            std::vector<double> big;
            double* p = buf.data();
            if (k_.size() > buf.size()) {
                big.resize(k_.size());
                p = big.data();
            }
            for (std::size_t i = 0; i < k_.size(); ++i) p[i] = s * k_[i];
            return eq_->fourier_value(std::span<const double>(p, k_.size()));
        }
    }
    return 0.0;
}

cplx RayProfile::slope(double s) const {
    switch (kind_) {
        case EquilibriumKind::vacuum: return 0.0;
        case EquilibriumKind::maxwellian: {
            const double c = eq_->sigma() * knorm_;
            return -c * c * s * std::exp(-0.5 * c * c * s * s);
        }
        case EquilibriumKind::poisson:
            if (s == 0.0) return 0.0;
            return -knorm_ * (s > 0 ? 1.0 : -1.0) * std::exp(-knorm_ * std::abs(s));
        case EquilibriumKind::tabulated: {
            std::vector<double> p(k_.size());
            for (std::size_t i = 0; i < k_.size(); ++i) p[i] = s * k_[i];
            const auto g = eq_->grad_fourier_value(p);
            cplx out = 0.0;
            for (std::size_t i = 0; i < k_.size(); ++i) out += k_[i] * g[i];
            return out;
        }
    }
    return 0.0;
}

double RayProfile::tail_bound(double s) const {
    switch (kind_) {
        case EquilibriumKind::vacuum: return 0.0;
        case EquilibriumKind::maxwellian:
        case EquilibriumKind::poisson: return std::abs(value(s));
        case EquilibriumKind::tabulated: return s >= extent_ ? 0.0 : std::abs(value(s));
    }
    return 0.0;
}

M01Report verify_m01(const EquilibriumSpec& eq, double xi_max, std::size_t n_samples) {
    if (!(xi_max > 0.0)) throw ArgumentError("xi_max must be positive");
    if (n_samples < 2) throw ArgumentError("n_samples must be >= 2");
    M01Report rep;
    const int d = eq.dim();
    auto profile = [&](std::span<const double> xi) {
        const double r = norm2(xi);
        const auto g = eq.grad_fourier_value(xi);
        double gn = 0.0;
        for (const auto& c : g) gn += std::norm(c);
        return std::exp(eq.lambda0() * std::cbrt(bracket(r))) *
               (std::abs(eq.fourier_value(xi)) + r * std::sqrt(gn));
    };
    std::vector<double> xi(d, 0.0);
    if (eq.radial()) {
        // Built-ins are radial: scanning one axis covers every |ξ| ≤ ξ_max.
        for (std::size_t i = 0; i < n_samples; ++i) {
            xi[0] = xi_max * double(i) / double(n_samples - 1);
            const double v = profile(xi);
            if (v > rep.sup_value || rep.worst_xi.empty()) {
                rep.sup_value = v;
                rep.worst_xi = xi;
            }
        }
    } else {
        std::vector<double> lo(d), hi(d);
        for (int a = 0; a < d; ++a) {
            lo[a] = std::max(-xi_max, eq.table()->axes[a].front());
            hi[a] = std::min(xi_max, eq.table()->axes[a].back());
        }
        std::vector<std::size_t> pos(d, 0);
        while (true) {
            for (int a = 0; a < d; ++a)
                xi[a] = lo[a] + (hi[a] - lo[a]) * double(pos[a]) / double(n_samples - 1);
            const double v = profile(xi);
            if (v > rep.sup_value || rep.worst_xi.empty()) {
                rep.sup_value = v;
                rep.worst_xi = xi;
            }
            int a = d - 1;
            while (a >= 0 && ++pos[a] == n_samples) {
                pos[a] = 0;
                --a;
            }
            if (a < 0) break;
        }
    }
    rep.passes = rep.sup_value <= 1.0 / eq.theta();
    return rep;
}

EquilibriumSpec load_tabulated_csv(const std::vector<std::string>& axis_files, double lambda0,
                                   double theta) {
    TabulatedData data;
    data.separable = true;
    for (const auto& path : axis_files) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot open tabulated equilibrium file " + path);
        std::vector<double> axis;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            for (auto& c : line)
                if (c == ',') c = ' ';
            std::istringstream ls(line);
            double x = 0, re = 0, im = 0;
            if (!(ls >> x)) continue;  // header row
            if (!(ls >> re)) throw IoError("malformed row in " + path);
            if (!(ls >> im)) im = 0.0;
            axis.push_back(x);
            data.values.emplace_back(re, im);
        }
        data.axes.push_back(std::move(axis));
    }
    return EquilibriumSpec::tabulated(std::move(data), lambda0, theta);
}

EquilibriumSpec load_tabulated_array(const std::string& path, double lambda0, double theta) {
    const ArrayFile file = read_array_file(path);
    const auto& h = file.header;
    if (!h.contains("axes")) throw IoError("tabulated array header lacks 'axes'");
    TabulatedData data;
    data.separable = false;
    for (const auto& axis : h.at("axes")) data.axes.push_back(axis.get<std::vector<double>>());
    data.values = file.complex_values();
    return EquilibriumSpec::tabulated(std::move(data), lambda0, theta);
}

}  // namespace landau
