#pragma once

#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "landau/common.hpp"

namespace landau {

enum class EquilibriumKind { vacuum, maxwellian, poisson, tabulated };

const char* to_string(EquilibriumKind kind);

// Samples of M̂0 on a tensor grid. With separable = true the table holds one
// factor per axis (concatenated in axis order) and M̂0(ξ) = Π_i m_i(ξ_i);
// otherwise values are row-major over the full tensor grid.
struct TabulatedData {
    std::vector<std::vector<double>> axes;
    std::vector<cplx> values;
    bool separable = false;
};

class EquilibriumSpec {
public:
    static EquilibriumSpec vacuum(int dim, double lambda0 = 1.0, double theta = 1.0);
    static EquilibriumSpec maxwellian(int dim, double sigma = 1.0, double lambda0 = 1.0,
                                      double theta = 1.0);
    static EquilibriumSpec poisson(int dim, double lambda0 = 1.0, double theta = 1.0);
    static EquilibriumSpec tabulated(TabulatedData data, double lambda0 = 1.0, double theta = 1.0);

    EquilibriumKind kind() const { return kind_; }
    int dim() const { return dim_; }
    double lambda0() const { return lambda0_; }
    double theta() const { return theta_; }
    double sigma() const { return sigma_; }
    bool radial() const { return kind_ != EquilibriumKind::tabulated; }
    // True when M̂0 is real-valued everywhere (all built-ins; tables with zero imaginary parts).
    bool real_valued() const { return real_valued_; }
    const TabulatedData* table() const { return table_.get(); }

    cplx fourier_value(std::span<const double> xi) const;
    std::vector<cplx> grad_fourier_value(std::span<const double> xi) const;
    // As fourier_value, but 0 outside a tabulated hull instead of DomainError.
    cplx fourier_value_or_zero(std::span<const double> xi) const;

    // Largest s for which s·k stays inside the tabulated hull (infinity otherwise).
    double ray_extent(std::span<const double> k) const;

private:
    EquilibriumSpec() = default;
    void check_point(std::span<const double> xi) const;

    EquilibriumKind kind_ = EquilibriumKind::vacuum;
    int dim_ = 1;
    double lambda0_ = 1.0;
    double theta_ = 1.0;
    double sigma_ = 1.0;
    bool real_valued_ = true;
    std::shared_ptr<const TabulatedData> table_;
};

// M̂0 restricted to the ray s ↦ s·k, with d/ds derivatives.
class RayProfile {
public:
    RayProfile(const EquilibriumSpec& eq, std::span<const double> k);

    cplx value(double s) const;
    // d/ds M̂0(sk) = k·∇M̂0(sk)
    cplx slope(double s) const;
    double extent() const { return extent_; }
    // Characteristic decay length of |M̂0(sk)| in s.
    double scale() const { return scale_; }
    // One-sided derivatives at s = 0+: M̂0(0), d/ds, d²/ds².
    cplx d0() const { return d0_; }
    cplx d1() const { return d1_; }
    cplx d2() const { return d2_; }
    // Upper bound for |M̂0(s'k)| over s' ≥ s, used to truncate ray integrals.
    double tail_bound(double s) const;
    bool is_zero() const { return kind_ == EquilibriumKind::vacuum; }

private:
    const EquilibriumSpec* eq_;
    EquilibriumKind kind_;
    std::vector<double> k_;
    double knorm_ = 0.0;
    double extent_ = std::numeric_limits<double>::infinity();
    double scale_ = 1.0;
    cplx d0_{}, d1_{}, d2_{};
};

struct M01Report {
    double sup_value = 0.0;
    std::vector<double> worst_xi;
    bool passes = false;
};

M01Report verify_m01(const EquilibriumSpec& eq, double xi_max, std::size_t n_samples);

// Tabulated equilibria from files: one two-column CSV (xi, value[, imag]) per
// axis (separable product), or a binary array container with a JSON header.
EquilibriumSpec load_tabulated_csv(const std::vector<std::string>& axis_files, double lambda0,
                                   double theta);
EquilibriumSpec load_tabulated_array(const std::string& path, double lambda0, double theta);

}  // namespace landau
