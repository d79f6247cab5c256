#ifndef KREIN_TYPES_HPP
#define KREIN_TYPES_HPP

#include <complex>
#include <string>
#include <vector>

namespace krein {

using Complex = std::complex<double>;

// Kreĭn signature of a neutral mode: sign of its dielectric energy u deps/du,
// equivalently the sign sigma in the oscillator normal form (sigma/2) w (P^2+Q^2).
// Non-neutral modes and exact collision points carry Marginal.
enum class Signature { Positive, Negative, Marginal };

inline const char* to_string(Signature s) {
    switch (s) {
        case Signature::Positive: return "positive";
        case Signature::Negative: return "negative";
        default: return "marginal";
    }
}

// One discrete mode of a dispersion family at fixed wavenumber.
struct ModeRecord {
    double k = 0.0;
    Complex omega{0.0, 0.0};
    Signature signature = Signature::Marginal;
    double energy = 0.0;   // u deps/du at the root; 0 for non-neutral modes
    bool suspect = false;  // root within near-pole tolerance of a pole

    double phase_velocity() const { return omega.real() / k; }
    bool neutral(double axis_tol) const { return std::abs(omega.imag()) <= axis_tol; }
};

// Sort key used everywhere a mode list is emitted: by Re, then Im.
inline bool mode_order(const ModeRecord& a, const ModeRecord& b) {
    if (a.omega.real() != b.omega.real()) return a.omega.real() < b.omega.real();
    return a.omega.imag() < b.omega.imag();
}

inline bool complex_order(const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

}  // namespace krein

#endif
