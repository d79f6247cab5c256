#ifndef KREIN_WATERBAG_HPP
#define KREIN_WATERBAG_HPP

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "krein/errors.hpp"
#include "krein/multifluid.hpp"
#include "krein/tolerances.hpp"
#include "krein/types.hpp"

namespace krein {

class DistributionProfile;

// Piecewise-constant kinetic equilibrium: M contour momenta p0[i] (strictly
// increasing) separating M+1 constant levels of f, with f = 0 below the lowest
// and above the highest contour.  jump[i] = level above contour i minus level
// below it, i.e. the delta-function weight of f0' at p0[i]; sum of jumps = 0.
class WaterbagEquilibrium {
public:
    // levels has size contours.size() + 1 and must start and end with 0.
    // merge_equal: contours closer than merge_tol are coalesced (jumps add).
    WaterbagEquilibrium(std::vector<double> contours, std::vector<double> levels,
                        bool merge_equal = false, double merge_tol = 0.0);

    // Construct directly from (p0, jump) pairs; the implied levels must be
    // nonnegative and telescope back to zero.
    static WaterbagEquilibrium from_jumps(const std::vector<std::pair<double, double>>& pairs,
                                          bool merge_equal = false, double merge_tol = 0.0);

    const std::vector<double>& contours() const { return contours_; }
    const std::vector<double>& levels() const { return levels_; }
    const std::vector<double>& jumps() const { return jumps_; }
    std::size_t size() const { return contours_.size(); }

    // Level of f on the open interval (contours[i-1], contours[i]); i = 0 is
    // the region below the lowest contour.
    double level_below(std::size_t i) const { return levels_[i]; }

private:
    std::vector<double> contours_;
    std::vector<double> levels_;
    std::vector<double> jumps_;
};

// Per-layer fluid image of a waterbag (vacuum layers excluded).
struct WaterbagFluidLayer {
    double rho = 0.0;      // f * layer width
    double u = 0.0;        // mid-momentum of the layer
    double pressure = 0.0; // rho^3 / (12 f^2), the exact second moment
    double u_theta = 0.0;  // rho / (2 f) = half layer width (thermal speed)
    double f = 0.0;        // level inside the layer
};

struct WaterbagFluidView {
    std::vector<WaterbagFluidLayer> layers;
    // The same equilibrium expressed as a bare-Poisson multifluid system.
    MultiFluidEquilibrium as_multifluid() const;
};

// eps(u,k) = 1 + k^-2 sum_i jump[i]/(u - p0[i]); poles exactly at the contours.
Complex waterbag_dispersion(const WaterbagEquilibrium& wb, double k, Complex u,
                            const Tolerances& tol = default_tolerances());
Complex waterbag_dispersion_deriv(const WaterbagEquilibrium& wb, double k, Complex u,
                                  const Tolerances& tol = default_tolerances());

// Generator A of the linearized contour dynamics dp_k/dt = A p_k; its
// eigenvalues are -ik u over the dispersion roots u.
Eigen::MatrixXcd linear_evolution_matrix(const WaterbagEquilibrium& wb, double k);

// Real part of A/i: A = i B with B real; eig(B) = -k u over dispersion roots.
Eigen::MatrixXd evolution_generator_real(const WaterbagEquilibrium& wb, double k);

// Real roots of eps inside each open contour interval.  Index i = 0 is the
// interval below the lowest contour, i = M is the interval above the highest;
// interior interval i is (contours[i-1], contours[i]).
struct IntervalRoots {
    std::size_t interval = 0;
    std::vector<double> roots;
    bool same_sign_jumps = false;  // bracketing jumps share sign (interior only)
};
std::vector<IntervalRoots> locate_interval_roots(const WaterbagEquilibrium& wb, double k,
                                                 const Tolerances& tol = default_tolerances());

// Dielectric energy u deps/du of a neutral mode at the real root u, normalized
// to unit wave amplitude.  Throws NotARootError when eps(u) is not small.
double mode_energy(const WaterbagEquilibrium& wb, double k, double u,
                   const Tolerances& tol = default_tolerances());

// Closed-form route to the same energy: 1 - k^-2 sum jump[i] p0[i]/(u-p0[i])^2,
// valid at roots only (uses eps = 0).  Kept separate so tests can compare the
// two routes independently.
double mode_energy_closed_form(const WaterbagEquilibrium& wb, double k, double u);

// Fluid view; interior layers with f = 0 are skipped (vacuum gaps).
// strict: throw ZeroLevelLayerError instead of skipping.
WaterbagFluidView to_multifluid(const WaterbagEquilibrium& wb, bool strict = false);

// Onion discretization: slice the profile at m_levels/2 equispaced heights
// (midpoint rule between 0 and max f0) and place contours at the crossings.
WaterbagEquilibrium discretize_distribution(const DistributionProfile& profile, int m_levels,
                                            std::pair<double, double> p_range);

}  // namespace krein

#endif
