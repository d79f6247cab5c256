#ifndef KREIN_NORMALFORM_HPP
#define KREIN_NORMALFORM_HPP

#include <Eigen/Core>
#include <vector>

#include "krein/multifluid.hpp"
#include "krein/tolerances.hpp"
#include "krein/types.hpp"

namespace krein {

// Per-wavenumber quadratic Hamiltonian H = 1/2 (p^T M p + q^T V q) with the
// canonical bracket; one (q, p) pair per canonical field, two per species.
struct QuadraticBlock {
    double k = 0.0;
    Eigen::MatrixXd momentum_matrix;  // M, symmetric
    Eigen::MatrixXd position_matrix;  // V, symmetric
    int dof() const { return static_cast<int>(position_matrix.rows()); }
};

// Canonization scheme.  Standard uses parameter-independent per-species
// variables (valid for any equilibrium, including fluids at rest).
// CounterstreamScaled uses the sqrt(u_e)-scaled variables under which the
// symmetric cold two-beam block takes its familiar displayed 4x4 form; Auto
// picks it whenever that equilibrium shape is detected.
enum class BlockScheme { Auto, Standard, CounterstreamScaled };

QuadraticBlock build_block(const MultiFluidEquilibrium& eq, double k,
                           BlockScheme scheme = BlockScheme::Auto,
                           const Tolerances& tol = default_tolerances());

bool counterstream_scheme_applies(const MultiFluidEquilibrium& eq);

// One eigenvalue of the linear flow z' = J grad H.  omega = i * lambda is the
// matching frequency (real for neutral modes, positive-imaginary = growth).
struct SpectrumEntry {
    Complex lambda;
    Complex omega;
    Signature signature = Signature::Marginal;  // set for neutral semisimple pairs
};

struct SymplecticSpectrum {
    std::vector<SpectrumEntry> entries;  // all 2*dof eigenvalues, sorted by omega
    bool defective = false;              // a Jordan block was detected
    int unstable_count = 0;              // eigenvalues with Re lambda > tolerance
    int zero_count = 0;                  // eigenvalues at the origin
};

SymplecticSpectrum symplectic_spectrum(const QuadraticBlock& block,
                                       const Tolerances& tol = default_tolerances());

enum class BlockClass { AllStable, UnstablePairs, Degenerate };

struct NormalMode {
    double omega = 0.0;  // signed after a frame shift; > 0 as constructed
    int sigma = 0;       // +1 / -1
};

// Result of the transformation to sum sigma omega (P^2 + Q^2) / 2.
struct NormalFormReport {
    BlockClass classification = BlockClass::AllStable;
    int unstable_pairs = 0;
    bool defective = false;
    std::vector<NormalMode> modes;   // one entry per degree of freedom
    Eigen::MatrixXd transform;       // z = T Z with Z = (Q_1..Q_n, P_1..P_n); AllStable only
    double congruence_residual = 0;  // max |H(z) - NF(T^-1 z)| over unit probe states
};

NormalFormReport normal_form(const QuadraticBlock& block,
                             const Tolerances& tol = default_tolerances());

// Rotating-frame shift: every frequency becomes omega - omega_star, signatures
// are untouched, and a mode shifted onto zero reclassifies the block Degenerate.
NormalFormReport galilean_shift(const NormalFormReport& report, double omega_star,
                                const Tolerances& tol = default_tolerances());

// Block energy 1/2 (q^T V q + p^T M p) of a state z = (q, p).
double block_energy(const QuadraticBlock& block, const Eigen::VectorXd& z);

}  // namespace krein

#endif
