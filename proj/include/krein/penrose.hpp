#ifndef KREIN_PENROSE_HPP
#define KREIN_PENROSE_HPP

#include <functional>
#include <utility>
#include <vector>

#include "krein/profile.hpp"
#include "krein/tolerances.hpp"
#include "krein/types.hpp"

namespace krein {

// Principal-value Hilbert transform of f0', (1/pi) PV int f0'(p)/(p-u) dp,
// by singularity subtraction with Gauss-Legendre panels split at u.  The
// truncated tail is bounded analytically; TruncationError if the bound
// exceeds tolerance.
double hilbert_transform(const DistributionProfile& profile, double u,
                         const Tolerances& tol = default_tolerances());

// eps(k, u) = 1 - k^-2 int f0'/(p - u) dp on the closed upper half plane.
// On the real axis this is the boundary value from above,
// 1 - pi k^-2 H[f0'](u) - i pi k^-2 f0'(u).
Complex vlasov_dispersion(const DistributionProfile& profile, double k, Complex u,
                          const Tolerances& tol = default_tolerances());
Complex vlasov_dispersion_deriv(const DistributionProfile& profile, double k, Complex u,
                                const Tolerances& tol = default_tolerances());

struct ContourSpec {
    double half_width = 0.0;   // 0: use the profile support
    int base_points = 2001;
    double grazing_tol = 1e-4;
    int max_refine_depth = 26;
};

// Image of the real phase-velocity line under eps(k, .), sampled densely
// enough that consecutive points subtend less than pi/8 about the origin.
// grazing reports a pass within grazing_tol of the origin; angle_resolved
// drops when refinement bottomed out before meeting the angle criterion.
struct PenroseContour {
    double k = 0.0;
    std::vector<double> u;
    std::vector<Complex> eps;
    double min_abs = 0.0;
    double grazing_tol = 0.0;
    bool grazing = false;
    bool angle_resolved = true;
};

PenroseContour penrose_contour(const DistributionProfile& profile, double k,
                               const ContourSpec& spec = {},
                               const Tolerances& tol = default_tolerances());

// Wrapped-angle winding about the origin; equals the number of unstable
// point-spectrum members at this k.  Throws OriginGrazingError when the
// winding is unresolvable: the contour passes through the origin at the
// evaluation noise floor, or refinement could not meet the angle criterion.
int winding_number(const PenroseContour& contour);

// Real zeros of f0' inside the support (candidate embedded-mode velocities).
std::vector<double> profile_critical_points(const DistributionProfile& profile);

// Marginality is decided where an embedded neutral mode can actually live:
// at the critical points of f0 (f0' = 0, so Im eps vanishes structurally).
// A pass merely close to the origin away from those points is the
// exponentially damped tail of a discrete mode, not a marginal crossing.
struct StabilityResult {
    enum class Kind { Stable, Unstable, Marginal };
    Kind kind = Kind::Stable;
    int unstable_count = 0;
    double min_abs = 0.0;          // over the sampled contour
    double min_abs_critical = 0.0; // |eps| at the nearest embedded-mode candidate
};

StabilityResult classify_stability(const DistributionProfile& profile, double k,
                                   const ContourSpec& spec = {},
                                   const Tolerances& tol = default_tolerances());

// Bisection on the stability classification over a profile family; returns
// the parameter of marginality to absolute tolerance tol.param_bisect.
double critical_parameter(const std::function<DistributionProfile(double)>& family, double k,
                          std::pair<double, double> bracket, const ContourSpec& spec = {},
                          const Tolerances& tol = default_tolerances());

// Upper-half-plane Newton solve of eps(k, u) = 0 (regular quadrature): the
// independent oracle for winding counts.  Analytic profiles only.
std::vector<Complex> unstable_roots(const DistributionProfile& profile, double k,
                                    const Tolerances& tol = default_tolerances());

}  // namespace krein

#endif
