#ifndef MZLAB_CORE_HPP_
#define MZLAB_CORE_HPP_

#include <complex>
#include <stdexcept>
#include <string>

// Shared numeric conventions and the error taxonomy.
//
// Everything in this library is double precision.  kEps is the tolerance for
// *exact* mathematical identities (normalization, unitarity, Hermiticity,
// completeness): quantities that algebra says are zero must come out below
// kEps or we throw.  Statistical tolerances are never kEps — they are derived
// from propagated standard errors at the call site.

namespace mzlab {

using Complex = std::complex<double>;

inline constexpr double kEps = 1e-12;

// Base class so callers can catch everything from this library in one place.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct ZeroVector : Error { using Error::Error; };
struct BadDimension : Error { using Error::Error; };
struct NotHermitian : Error { using Error::Error; };
struct NotUnitary : Error { using Error::Error; };
struct NotProjector : Error { using Error::Error; };
struct NotNormalized : Error { using Error::Error; };
struct InvalidModel : Error { using Error::Error; };
struct IncompleteFamily : Error { using Error::Error; };
struct OrthogonalPostselection : Error { using Error::Error; };
struct OutOfRange : Error { using Error::Error; };
struct NegativeMean : Error { using Error::Error; };
struct DegenerateDesign : Error { using Error::Error; };
struct AmplitudeZero : Error { using Error::Error; };
struct IOFailure : Error { using Error::Error; };

}  // namespace mzlab

#endif  // MZLAB_CORE_HPP_
