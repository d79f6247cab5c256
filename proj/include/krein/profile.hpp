#ifndef KREIN_PROFILE_HPP
#define KREIN_PROFILE_HPP

#include <string>
#include <vector>

#include "krein/errors.hpp"
#include "krein/types.hpp"

namespace krein {

// Smooth 1-D equilibrium distribution f0(p) with its derivatives, for
// Nyquist/Penrose analysis.  Analytic kinds use exact derivatives; tabulated
// profiles use centered differences at the nodes with cubic interpolation
// between them.
class DistributionProfile {
public:
    enum class Kind { Maxwellian, BiMaxwellian, Tabulated };

    static DistributionProfile maxwellian();                    // f0 = exp(-p^2)
    static DistributionProfile bi_maxwellian(double separation);  // exp(-(p+c)^2)+exp(-(p-c)^2)
    static DistributionProfile tabulated(std::vector<double> p_grid, std::vector<double> values);

    Kind kind() const { return kind_; }
    double separation() const { return separation_; }
    bool analytic() const { return kind_ != Kind::Tabulated; }

    double f0(double p) const;
    double f0_prime(double p) const;
    double f0_second(double p) const;

    // Analytic continuation of the derivatives (analytic kinds only).
    Complex f0_prime(Complex p) const;
    Complex f0_second(Complex p) const;

    double decay_scale() const { return decay_scale_; }
    // Integration window outside which f0 is negligible (identically zero for
    // tabulated profiles).
    double support_lo() const { return support_lo_; }
    double support_hi() const { return support_hi_; }

    double max_f0(std::pair<double, double> p_range, int scan_points = 4096) const;

    const std::vector<double>& grid() const { return p_grid_; }
    const std::vector<double>& values() const { return values_; }

private:
    DistributionProfile() = default;

    Kind kind_ = Kind::Maxwellian;
    double separation_ = 0.0;
    double decay_scale_ = 1.0;
    double support_lo_ = -8.0;
    double support_hi_ = 8.0;

    // Tabulated data and spline second-derivative tables.
    std::vector<double> p_grid_, values_, deriv_nodes_, second_nodes_;
    std::vector<double> spline_f_, spline_d_, spline_s_;

    double eval_spline(const std::vector<double>& y, const std::vector<double>& y2,
                       double p) const;
};

}  // namespace krein

#endif
