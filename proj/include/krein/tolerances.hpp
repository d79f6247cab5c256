#ifndef KREIN_TOLERANCES_HPP
#define KREIN_TOLERANCES_HPP

namespace krein {

// Every numeric threshold used anywhere in the library lives here, so a run
// can report (and override) the exact tolerance set it was computed with.
struct Tolerances {
    double root_accept      = 1e-9;   // |eps| at an accepted dispersion root, after polishing
    double pair_symmetry    = 1e-8;   // conjugate / reflection pairing of root multisets
    double marginal_energy  = 1e-9;   // |u deps/du| below which a signature is Marginal
    double near_pole        = 1e-10;  // root-to-pole distance that flags a root as suspect
    double grazing          = 1e-4;   // min |eps| on a Penrose contour before it counts as marginal
    double contour_angle    = 0.39269908169872414;  // pi/8, max angular step about the origin
    double truncation_tail  = 1e-8;   // allowed tail estimate of the truncated Hilbert integral
    double param_bisect     = 1e-6;   // bisection width for bifurcation / threshold parameters
    double collision_freq   = 1e-6;   // |omega| below which a collision counts as zero-frequency
    double axis_departure   = 1e-8;   // |Im omega| above which a mode counts as off-axis
    double eig_agreement    = 1e-8;   // matrix-vs-dispersion spectral matching
    double degenerate_gap   = 1e-7;   // eigenfrequency gap treated as a degenerate group
    double jordan_rank      = 1e-8;   // rank-test threshold for defective blocks
    double matrix_symmetry  = 1e-12;  // allowed asymmetry of quadratic-form matrices
};

inline const Tolerances& default_tolerances() {
    static const Tolerances tol{};
    return tol;
}

}  // namespace krein

#endif
