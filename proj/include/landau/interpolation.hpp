#pragma once

#include <string>
#include <vector>

#include "landau/fourier_grid.hpp"

namespace landau {

// cubic: 4-point Lagrange per axis. bandlimited: Whittaker–Shannon (sinc)
// sum over all nodes of the axis, O(N) per axis and point.
enum class InterpRule { cubic, bandlimited };

const char* to_string(InterpRule r);
InterpRule parse_interp_rule(const std::string& s);

// Evaluates a ξ-row of a GlideState off-grid. Points outside the hull (see
// FourierGrid::in_hull) evaluate to 0; stencil nodes beyond the grid count as 0.
class XiInterpolator {
public:
    XiInterpolator(const FourierGrid& grid, InterpRule rule);

    cplx point(const cplx* row, std::span<const double> xi) const;

    struct AxisShift {
        double amount = 0.0;
        int base = 0;               // cubic: stencil origin offset
        double w[4] = {0, 0, 0, 0};
        bool exact = false;         // integer shift in node units
        int offset = 0;
        std::vector<double> kernel; // bandlimited: sinc weights indexed by (j - i) + N - 1
    };
    struct Shift {
        std::vector<AxisShift> axes;
    };

    // Prepares out_j = row(ξ_j - a) for a fixed vector a.
    Shift prepare_shift(std::span<const double> a) const;
    // scratch must hold row_size() values (used when d > 1).
    void apply_shift(const Shift& s, const cplx* row, cplx* out, cplx* scratch) const;

    InterpRule rule() const { return rule_; }
    const FourierGrid& grid() const { return grid_; }

private:
    void apply_axis(const AxisShift& s, int axis, const cplx* in, cplx* out) const;

    FourierGrid grid_;
    InterpRule rule_;
};

}  // namespace landau
