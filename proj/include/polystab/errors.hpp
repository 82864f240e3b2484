#pragma once

#include <stdexcept>
#include <string>

namespace polystab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// operator construction / evaluation
struct SpectrumViolation : Error { using Error::Error; };
struct NotStable : Error { using Error::Error; };
struct IllConditionedEigenbasis : Error { using Error::Error; };
struct NotDiagonalizable : Error { using Error::Error; };
struct SpectrumHit : Error { using Error::Error; };
struct InsufficientPoints : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct NonDiagonal : Error { using Error::Error; };

// numerics
struct NoConvergence : Error { using Error::Error; };
struct DegenerateWindow : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct HorizonExceeded : Error { using Error::Error; };

// lyapunov / cayley checks
struct SingularSystem : Error { using Error::Error; };
struct MismatchedXi : Error { using Error::Error; };

// reporting front end
struct ConfigError : Error { using Error::Error; };

} // namespace polystab
