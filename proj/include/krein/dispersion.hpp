#ifndef KREIN_DISPERSION_HPP
#define KREIN_DISPERSION_HPP

#include <optional>
#include <vector>

#include "krein/multifluid.hpp"
#include "krein/polynomial.hpp"
#include "krein/tolerances.hpp"
#include "krein/types.hpp"
#include "krein/waterbag.hpp"

namespace krein {

// A dispersion function tied to the equilibrium it describes.
//   FluidDielectric  eps(k,w) = 1 + shield/k^2 - sum_a rho_a / D_a(w),
//                    D_a = (w - k u_a)^2 - k^2 c_a^2, shield = 1 for
//                    PlasmaShielded and 0 for PlasmaBare
//   JeansDielectric  Gamma(k,w) = 1 + sum_a rho_a / D_a(w)  (attractive sign)
//   Waterbag         eps(u,k) = 1 + k^-2 sum_i jump_i / (u - p0_i),  u = w/k
//   Acoustic         product form prod_a D_a(w): uncoupled sound branches
class DispersionFamily {
public:
    enum class Kind { FluidDielectric, JeansDielectric, Waterbag, Acoustic };

    static DispersionFamily of(const MultiFluidEquilibrium& mf);
    static DispersionFamily of(const WaterbagEquilibrium& wb);

    Kind kind() const { return kind_; }
    const MultiFluidEquilibrium& fluid() const { return *fluid_; }
    const WaterbagEquilibrium& bag() const { return *bag_; }

private:
    DispersionFamily() = default;
    Kind kind_ = Kind::FluidDielectric;
    std::optional<MultiFluidEquilibrium> fluid_;
    std::optional<WaterbagEquilibrium> bag_;
};

// eps(k, omega); analytic away from the (real) poles.  Throws
// PoleEvaluationError within near-pole distance of a pole.
Complex eval_dispersion(const DispersionFamily& family, double k, Complex omega,
                        const Tolerances& tol = default_tolerances());
// d eps / d omega, computed from the rational form.
Complex eval_dispersion_deriv(const DispersionFamily& family, double k, Complex omega,
                              const Tolerances& tol = default_tolerances());

// Real omega-locations where eps blows up (empty for Acoustic).
std::vector<double> dispersion_poles(const DispersionFamily& family, double k);

// Cleared-denominator polynomial whose roots are the discrete modes, in the
// family's natural variable (omega for fluid kinds, u = omega/k for Waterbag).
// Species with coincident poles are merged before clearing.
Poly dispersion_polynomial(const DispersionFamily& family, double k);

// All discrete modes at wavenumber k: companion-matrix roots, one Newton
// polish on eps itself, conjugate symmetrization, signatures for neutral
// modes.  Sorted by (Re omega, Im omega).
std::vector<ModeRecord> find_discrete_modes(const DispersionFamily& family, double k,
                                            const Tolerances& tol = default_tolerances());

// Closed-form frequencies of the symmetric counterstream equilibrium.
// bracket_minus < 0 marks the unstable side; omega_minus is present otherwise.
struct CounterstreamFrequencies {
    double k = 0.0;
    double omega_plus = 0.0;
    std::optional<double> omega_minus;
    double bracket_minus = 0.0;          // the slow-branch bracket; < 0 when unstable
    bool unstable() const { return !omega_minus.has_value(); }
    double growth_rate() const;          // k sqrt(-bracket) on the unstable side
};
CounterstreamFrequencies counterstream_frequencies(double u_e, double k);

// Signature and dielectric energy omega * d eps/d omega at a real root.
// Marginal when |energy| is below the marginal band.  Throws NotARootError
// when eps does not vanish at omega to tolerance.
struct SignatureResult {
    Signature signature = Signature::Marginal;
    double energy = 0.0;
};
SignatureResult mode_signature(const DispersionFamily& family, double k, double omega,
                               const Tolerances& tol = default_tolerances());

}  // namespace krein

#endif
