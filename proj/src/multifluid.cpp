#include "krein/multifluid.hpp"

#include <cmath>

namespace krein {

const char* to_string(Coupling c) {
    switch (c) {
        case Coupling::PlasmaShielded: return "plasma_shielded";
        case Coupling::PlasmaBare: return "plasma_bare";
        case Coupling::GravitationalJeans: return "jeans";
        default: return "acoustic";
    }
}

MultiFluidEquilibrium::MultiFluidEquilibrium(std::vector<FluidSpecies> species, Coupling coupling)
    : species_(std::move(species)), coupling_(coupling) {
    if (species_.empty()) throw Error("multifluid: species list is empty");
    for (const auto& s : species_) {
        if (!(s.rho > 0.0)) throw Error("multifluid: species density must be positive");
        if (s.c_s < 0.0) throw Error("multifluid: sound speed must be nonnegative");
        if (!std::isfinite(s.rho) || !std::isfinite(s.u) || !std::isfinite(s.c_s))
            throw Error("multifluid: non-finite species parameter");
    }
}

MultiFluidEquilibrium MultiFluidEquilibrium::counterstream(double u_e) {
    if (!(u_e > 0.0)) throw Error("counterstream: stream speed must be positive");
    return MultiFluidEquilibrium({{0.5, +u_e, 0.0}, {0.5, -u_e, 0.0}}, Coupling::PlasmaShielded);
}

MultiFluidEquilibrium MultiFluidEquilibrium::jeans(double u_plus, double u_minus, double beta,
                                                   double c) {
    if (!(beta > 0.0) || !(c > 0.0)) throw Error("jeans: beta and c must be positive");
    return MultiFluidEquilibrium({{0.5, u_plus, 1.0}, {0.5 * beta, -c * u_minus, c}},
                                 Coupling::GravitationalJeans);
}

MultiFluidEquilibrium MultiFluidEquilibrium::sound(double rho, double c_s) {
    return MultiFluidEquilibrium({{rho, 0.0, c_s}}, Coupling::Acoustic);
}

}  // namespace krein
