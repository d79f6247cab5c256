#ifndef KREIN_BIFURCATION_HPP
#define KREIN_BIFURCATION_HPP

#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "krein/dispersion.hpp"
#include "krein/tolerances.hpp"
#include "krein/types.hpp"

namespace krein {

// A system a sweep can drive through a named scalar control.
struct SweepSystem {
    enum class Kind { MultiFluid, Waterbag };
    Kind kind = Kind::MultiFluid;
    std::optional<MultiFluidEquilibrium> fluid;
    std::optional<WaterbagEquilibrium> bag;

    static SweepSystem of(const MultiFluidEquilibrium& mf);
    static SweepSystem of(const WaterbagEquilibrium& wb);
};

// Controls: "k" (any system), "stream_speed" (multifluid: stream magnitudes,
// signs kept), "separation" (waterbag: rigid shift of the last vacuum-
// separated contour group so the group-center distance equals the value).
struct SweepSpec {
    SweepSystem system;
    std::string control;
    std::vector<double> grid;  // strictly monotone, at least 3 points
    double k = 1.0;            // fixed wavenumber unless control == "k"
};

// The family/wavenumber the spec describes at one control value.
std::pair<DispersionFamily, double> realize(const SweepSpec& spec, double value);

struct BifurcationEvent {
    enum class Kind { SS, HH };
    enum class Post { Doublet, Quartet };
    double param = 0.0;               // refined onset location
    Kind kind = Kind::SS;
    double colliding_frequency = 0.0; // 0 for SS
    Signature pre_signatures[2] = {Signature::Marginal, Signature::Marginal};
    Post post_structure = Post::Doublet;
    int multiplicity = 1;             // conjugate pairs leaving the axis
    bool signature_unavailable = false;
    bool krein_violation = false;     // nonzero-frequency onset with equal signatures
    double bracket_lo = 0.0, bracket_hi = 0.0;
};

struct SweepResult {
    std::vector<double> params;
    std::vector<std::vector<ModeRecord>> loci;  // per parameter, sorted mode lists
    // pairing[i][j] = index in loci[i+1] continuing mode j of loci[i]
    std::vector<std::vector<int>> pairing;
    std::vector<BifurcationEvent> events;
    std::vector<std::string> warnings;
};

// threads parallelizes the grid-point solves; the result is independent of
// the thread count (refinement and assembly are sequential).
SweepResult sweep(const SweepSpec& spec, const Tolerances& tol = default_tolerances(),
                  int threads = 1);

// Pure classification of a bracketed collision.  nullopt = avoided crossing
// (equal signatures at nonzero frequency with no instability implied).
std::optional<BifurcationEvent> classify_event(const std::vector<ModeRecord>& pre_modes,
                                               const std::vector<ModeRecord>& post_modes,
                                               double collision_frequency,
                                               const Tolerances& tol = default_tolerances());

// Optimal assignment between two complex spectra (used for locus pairing).
std::vector<int> match_spectra(const std::vector<Complex>& from, const std::vector<Complex>& to);

struct KreinAuditReport {
    int systems = 0;
    int onsets = 0;
    int violations = 0;
    int signature_unavailable = 0;
    std::vector<std::string> details;
};

// Randomized audit of the opposite-signature necessary condition: sweep each
// generated system over the control range and check every detected onset.
KreinAuditReport krein_audit(const std::function<SweepSystem(std::mt19937&)>& generator,
                             const std::string& control, std::pair<double, double> param_range,
                             int grid_points, int samples, unsigned seed, double fixed_k = 1.0,
                             const Tolerances& tol = default_tolerances());

}  // namespace krein

#endif
