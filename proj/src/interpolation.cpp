#include "landau/interpolation.hpp"

#include <cmath>

namespace landau {

const char* to_string(InterpRule r) { return r == InterpRule::cubic ? "cubic" : "bandlimited"; }

InterpRule parse_interp_rule(const std::string& s) {
    if (s == "cubic") return InterpRule::cubic;
    if (s == "bandlimited") return InterpRule::bandlimited;
    throw ArgumentError("unknown interpolation rule '" + s + "'");
}

namespace {

void lagrange4(double u, double* w) {
    w[0] = -u * (u - 1.0) * (u - 2.0) / 6.0;
    w[1] = (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0;
    w[2] = -(u + 1.0) * u * (u - 2.0) / 2.0;
    w[3] = (u + 1.0) * u * (u - 1.0) / 6.0;
}

double sinc_pi(double x) {
    if (x == 0.0) return 1.0;
    const double px = pi * x;
    return std::sin(px) / px;
}

struct Tap {
    int idx;
    double w;
};

}  // namespace

XiInterpolator::XiInterpolator(const FourierGrid& grid, InterpRule rule) : grid_(grid), rule_(rule) {
    grid_.validate();
}

cplx XiInterpolator::point(const cplx* row, std::span<const double> xi) const {
    if (!grid_.in_hull(xi)) return 0.0;
    const int d = grid_.d;
    const int N = grid_.n_xi;
    const double h = grid_.dxi();
    std::vector<std::vector<Tap>> taps(d);
    for (int a = 0; a < d; ++a) {
        const double p = (xi[a] + grid_.xi_max) / h;
        const double b = std::floor(p);
        const double u = p - b;
        if (u == 0.0) {
            taps[a].push_back({int(b), 1.0});
            continue;
        }
        if (rule_ == InterpRule::cubic) {
            double w[4];
            lagrange4(u, w);
            for (int s = 0; s < 4; ++s) {
                const int idx = int(b) - 1 + s;
                if (idx >= 0 && idx < N) taps[a].push_back({idx, w[s]});
            }
        } else {
            // sin(π(p - j)) = (-1)^j sin(πp): one sine per axis.
            const double sp = std::sin(pi * u);
            const int ib = int(b);
            for (int j = 0; j < N; ++j) {
                const double x = p - j;
                const double sgn = ((ib - j) % 2 == 0) ? 1.0 : -1.0;
                taps[a].push_back({j, sgn * sp / (pi * x)});
            }
        }
    }
    if (d == 1) {
        cplx acc = 0.0;
        for (const auto& t : taps[0]) acc += t.w * row[t.idx];
        return acc;
    }
    std::vector<std::size_t> pos(d, 0);
    cplx acc = 0.0;
    while (true) {
        double w = 1.0;
        std::size_t flat = 0;
        for (int a = 0; a < d; ++a) {
            w *= taps[a][pos[a]].w;
            flat = flat * std::size_t(N) + std::size_t(taps[a][pos[a]].idx);
        }
        acc += w * row[flat];
        int a = d - 1;
        while (a >= 0 && ++pos[a] == taps[a].size()) {
            pos[a] = 0;
            --a;
        }
        if (a < 0) break;
    }
    return acc;
}

XiInterpolator::Shift XiInterpolator::prepare_shift(std::span<const double> a) const {
    Shift s;
    const int N = grid_.n_xi;
    const double h = grid_.dxi();
    for (int ax = 0; ax < grid_.d; ++ax) {
        AxisShift as;
        as.amount = a[ax];
        const double q = -a[ax] / h;
        const double b = std::floor(q);
        const double u = q - b;
        if (u == 0.0) {
            as.exact = true;
            as.offset = int(b);
        } else if (rule_ == InterpRule::cubic) {
            as.base = int(b) - 1;
            lagrange4(u, as.w);
        } else {
            as.kernel.resize(std::size_t(2 * N - 1));
            for (int m = -(N - 1); m <= N - 1; ++m) as.kernel[std::size_t(m + N - 1)] = sinc_pi(m + q);
        }
        s.axes.push_back(std::move(as));
    }
    return s;
}

void XiInterpolator::apply_axis(const AxisShift& s, int axis, const cplx* in, cplx* out) const {
    const int N = grid_.n_xi;
    const int d = grid_.d;
    std::size_t stride = 1;
    for (int a = axis + 1; a < d; ++a) stride *= std::size_t(N);
    std::size_t outer = 1;
    for (int a = 0; a < axis; ++a) outer *= std::size_t(N);
    const double hull = grid_.hull() * (1.0 + 1e-12);
    // Output nodes whose source point ξ_j - a lies inside the hull.
    int jlo = N, jhi = -1;
    for (int j = 0; j < N; ++j) {
        if (std::abs(grid_.xi(j) - s.amount) <= hull) {
            jlo = std::min(jlo, j);
            jhi = std::max(jhi, j);
        }
    }
    for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t inner = 0; inner < stride; ++inner) {
            const cplx* src = in + o * stride * std::size_t(N) + inner;
            cplx* dst = out + o * stride * std::size_t(N) + inner;
            for (int j = 0; j < N; ++j) {
                cplx v = 0.0;
                if (j >= jlo && j <= jhi) {
                    if (s.exact) {
                        const int i = j + s.offset;
                        if (i >= 0 && i < N) v = src[std::size_t(i) * stride];
                    } else if (rule_ == InterpRule::cubic) {
                        const int b = j + s.base;
                        if (b >= 0 && b + 3 < N) {
                            v = s.w[0] * src[std::size_t(b) * stride] + s.w[1] * src[std::size_t(b + 1) * stride] +
                                s.w[2] * src[std::size_t(b + 2) * stride] + s.w[3] * src[std::size_t(b + 3) * stride];
                        } else {
                            for (int t = 0; t < 4; ++t) {
                                const int i = b + t;
                                if (i >= 0 && i < N) v += s.w[t] * src[std::size_t(i) * stride];
                            }
                        }
                    } else {
                        const double* k = s.kernel.data() + (N - 1) + j;
                        for (int i = 0; i < N; ++i) v += k[-i] * src[std::size_t(i) * stride];
                    }
                }
                dst[std::size_t(j) * stride] = v;
            }
        }
    }
}

void XiInterpolator::apply_shift(const Shift& s, const cplx* row, cplx* out, cplx* scratch) const {
    const int d = grid_.d;
    if (d == 1) {
        apply_axis(s.axes[0], 0, row, out);
        return;
    }
    // Alternate between out and scratch so the final axis lands in out.
    const cplx* src = row;
    for (int a = 0; a < d; ++a) {
        cplx* dst = ((d - 1 - a) % 2 == 0) ? out : scratch;
        apply_axis(s.axes[a], a, src, dst);
        src = dst;
    }
}

}  // namespace landau
