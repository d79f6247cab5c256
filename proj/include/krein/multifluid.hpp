#ifndef KREIN_MULTIFLUID_HPP
#define KREIN_MULTIFLUID_HPP

#include <string>
#include <vector>

#include "krein/errors.hpp"

namespace krein {

// How the fluids exchange momentum through the long-range field:
//   PlasmaShielded     -(d/dx)^2 phi + phi = sum rho   (isothermal electron background,
//                                                       adds the 1/k^2 shielding term, repulsive)
//   PlasmaBare         -(d/dx)^2 phi = sum rho          (bare Poisson, repulsive; the coupling
//                                                       of the waterbag fluid view)
//   GravitationalJeans (d/dx)^2 phi = sum rho - rho_bg  (attractive sign; neutralizing
//                                                       background density is implicit)
//   Acoustic           no coupling field                (independent sound waves)
enum class Coupling { PlasmaShielded, PlasmaBare, GravitationalJeans, Acoustic };

const char* to_string(Coupling c);

struct FluidSpecies {
    double rho = 1.0;  // equilibrium density, > 0
    double u = 0.0;    // equilibrium stream velocity
    double c_s = 0.0;  // sound speed, >= 0
};

// Homogeneous equilibrium of M coupled 1-D fluids.
class MultiFluidEquilibrium {
public:
    MultiFluidEquilibrium(std::vector<FluidSpecies> species, Coupling coupling);

    const std::vector<FluidSpecies>& species() const { return species_; }
    Coupling coupling() const { return coupling_; }
    std::size_t size() const { return species_.size(); }

    // Two equal-density cold beams at +/- u_e in a shielded background (the
    // one-parameter family of counterstreaming ion beams).
    static MultiFluidEquilibrium counterstream(double u_e);

    // Two gravitating streams with the scaled parameters (beta = density ratio,
    // c = sound-speed ratio); velocities +u_plus and -c*u_minus, densities 1/2
    // and beta/2, sound speeds 1 and c.
    static MultiFluidEquilibrium jeans(double u_plus, double u_minus, double beta, double c);

    // Single fluid at rest with no coupling: plain sound waves.
    static MultiFluidEquilibrium sound(double rho, double c_s);

private:
    std::vector<FluidSpecies> species_;
    Coupling coupling_;
};

}  // namespace krein

#endif
