#pragma once

// Shared value types, tuning constants and error taxonomy for the tandyn
// library: dynamics of the one-parameter family f_lambda(z) = lambda * tan z.

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace tandyn {

using Cx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr const char* kVersion = "1.0.0";

// ---------------------------------------------------------------------------
// Numerical policy. These are deliberate, coupled choices; change with care.
// ---------------------------------------------------------------------------

// Distance to the nearest pole s_n = (n+1/2)pi below which evaluation is
// refused / an orbit is declared to have hit a prepole. sec^2 grows like
// 1/d^2, so below 1e-9 a double carries no usable significand.
inline constexpr double kPoleTol = 1e-9;

// |Im z| beyond which tan switches to the exp(-2|y|)-scaled form; cosh(2y)
// dwarfs cos(2x) by more than 17 digits past this point.
inline constexpr double kYSwitch = 20.0;

// Near-return threshold for the orbit scanner. Loose on purpose: every hit is
// confirmed (or rejected) by Newton refinement before anything is reported.
inline constexpr double kCycleTol = 1e-8;

// Longest period the near-return ring buffer probes.
inline constexpr int kMaxPeriod = 64;

// Guard band around |multiplier| = 1 for the attracting/neutral/repelling
// trichotomy: "attracted" means |m| < 1 - kClassTol.
inline constexpr double kClassTol = 1e-6;

// Distance to an asymptotic value +-lambda*i below which inverse branches are
// refused (the log argument degenerates there).
inline constexpr double kBranchTol = 1e-9;

// |Im z| past which an orbit is clamped to the asymptotic value on the next
// step instead of being evaluated (tan is +-i to far below double epsilon).
inline constexpr double kImClamp = 1e8;

// |Im z| treated as "escaped towards an asymptotic value" when diagnosing a
// transcendental degeneration of a continued cycle.
inline constexpr double kEscapeThreshold = 50.0;

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

// A point of the extended plane: a finite complex value, or infinity (which
// carries no coordinates).
struct ComplexPoint {
  Cx value{0.0, 0.0};
  bool at_infinity = false;

  ComplexPoint() = default;
  ComplexPoint(Cx v) : value(v) {}  // finite points convert implicitly
  ComplexPoint(double re, double im) : value(re, im) {}

  static ComplexPoint infinity() {
    ComplexPoint p;
    p.at_infinity = true;
    return p;
  }
  bool finite() const { return !at_infinity; }
};

// The family parameter; lambda = 0 degenerates the whole family and is
// rejected at construction.
struct Parameter {
  Cx lambda;

  Parameter(Cx l) : lambda(l) {
    if (lambda == Cx(0.0, 0.0))
      throw std::invalid_argument("parameter lambda must be nonzero");
  }
  Parameter(double re, double im = 0.0) : Parameter(Cx(re, im)) {}
};

// A finite sequence of inverse-branch indices (n_1, ..., n_p); n_1 names the
// pole s_{n_1} a backward orbit ends on, the rest pick strips on the way.
using Itinerary = std::vector<long long>;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Evaluation requested within kPoleTol of a pole of tan.
struct PoleProximityError : Error {
  using Error::Error;
};

// A finite-input-only operation was handed the point at infinity.
struct InfinityInputError : Error {
  using Error::Error;
};

// An inverse branch was applied to a point within kBranchTol of an asymptotic
// value +-lambda*i. `depth` reports which application failed (0-based) when
// the branch was part of a composition, else -1.
struct AsymptoticValueError : Error {
  int depth = -1;
  explicit AsymptoticValueError(const std::string& msg, int d = -1)
      : Error(msg), depth(d) {}
};

// An iterative solve did not meet its tolerance within its step budget.
struct NoConvergenceError : Error {
  using Error::Error;
};

// Newton refinement stepped onto a pole.
struct PoleCollisionError : Error {
  using Error::Error;
};

// The backward-orbit contraction near a prepole failed to contract.
struct ContractionFailureError : Error {
  using Error::Error;
};

// Path/ray continuation stalled; carries the last parameter that still worked.
struct ContinuationError : Error {
  Cx last_good{0.0, 0.0};
  explicit ContinuationError(const std::string& msg, Cx lg = Cx(0.0, 0.0))
      : Error(msg), last_good(lg) {}
};

// The parameter could not be certified hyperbolic, so it has no eigenvalue.
struct NotHyperbolicError : Error {
  using Error::Error;
};

}  // namespace tandyn
