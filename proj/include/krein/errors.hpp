#ifndef KREIN_ERRORS_HPP
#define KREIN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace krein {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Evaluation requested too close to a pole of a dispersion function.
struct PoleEvaluationError : Error { using Error::Error; };

// The cleared-denominator polynomial vanished identically.
struct DegenerateSystemError : Error { using Error::Error; };

// A signature/energy was requested at a point that does not solve eps = 0.
struct NotARootError : Error { using Error::Error; };

// Estimated tail of a truncated principal-value integral exceeds tolerance.
struct TruncationError : Error { using Error::Error; };

// A Penrose contour passes within grazing tolerance of the origin.
struct OriginGrazingError : Error { using Error::Error; };

// Bisection bracket ends classify identically.
struct NoSignChangeError : Error { using Error::Error; };

// Level slicing of a profile could not be bracketed inside p_range.
struct NonResolvableProfileError : Error { using Error::Error; };

// Fluid view requested for an interior layer with f = 0.
struct ZeroLevelLayerError : Error { using Error::Error; };

// Configuration / usage problems (CLI surface).
struct ConfigError : Error { using Error::Error; };

// A colliding mode was already Marginal before the collision.
struct SignatureUnavailableError : Error { using Error::Error; };

}  // namespace krein

#endif
