#pragma once

#include <vector>

#include "tandyn/types.hpp"

namespace tandyn {

enum class Stability { Attracting, Repelling, Neutral };

// A periodic orbit: points[(i+1) mod period] = f(points[i]) to 1e-8, period
// is primitive, multiplier is the product of f' over the orbit.  symmetric
// is true iff the point set is invariant under z -> -z, in which case the
// period is even and points[(i + period/2) mod period] = -points[i].
struct Cycle {
  std::vector<Cx> points;
  int period = 0;
  Cx multiplier;
  Stability stability = Stability::Neutral;
  bool symmetric = false;
};

// |m| < 1 - kClassTol attracting, |m| > 1 + kClassTol repelling, else
// neutral (the band absorbs double-precision multiplier noise).
Stability classify_cycle(Cx m);

// Multiplier of an orbit: product of lambda * sec^2(points[i]).
Cx multiplier(const Parameter& lam, const std::vector<Cx>& points);

// The same multiplier through the identity f'(z) = 2 f(z) / sin(2z)
// = 2*points[i+1] / sin(2*points[i]).  Undefined when a cycle point is 0
// (then f(z)=0 too and the quotient degenerates); used as an independent
// cross-check of `multiplier`.
Cx multiplier_via_sine(const Parameter& lam, const std::vector<Cx>& points);

// Newton's method on F(z) = f^p(z) - z with F' = prod f'(z_j) - 1, from
// z_guess, until |F| < 1e-12.  The period is then reduced to the primitive
// one (divisor check at 1e-8) and the full Cycle record is assembled.
// Throws NoConvergenceError after 50 steps, PoleCollisionError if an orbit
// point lands within kPoleTol of a pole, InfinityInputError for an infinite
// guess.
Cycle refine_cycle_newton(const Parameter& lam, ComplexPoint z_guess, int p);

// The repelling period-p cycles z_k accumulating on the prepole
// v = prepole(prepole_itin, lam), for k = k_begin..k_end: each is the
// attracting fixed point of the composed inverse branch with itinerary
// (k, n_1, ..., n_{p-1}), found by iterating that contraction from v and
// polishing with refine_cycle_newton.  Over the returned range |z_k - v|
// decreases and |m_k| increases.  Throws ContractionFailureError when the
// composition fails to contract to a primitive period-p cycle for some
// requested k (|k| too small), AsymptoticValueError if v is within
// 2*kBranchTol of +-lambda*i.
std::vector<Cycle> repelling_cycles_near_prepole(const Parameter& lam,
                                                 const Itinerary& prepole_itin,
                                                 long long k_begin,
                                                 long long k_end);

// What happened to a cycle continued to the end of a parameter path.
struct PathSingularityReport {
  enum class Kind { Algebraic, Transcendental, None };
  Kind kind = Kind::None;
  Cx final_multiplier;
  double max_abs_im = 0.0;      // over the final cycle's points
  long long predecessor_pole_index = 0;  // nearest pole of the escaping
  double predecessor_pole_distance = 0.0;  // point's predecessor
};

struct ContinuationResult {
  std::vector<Cycle> cycles;  // one per sample, same order
  PathSingularityReport report;
};

// Continues cycle0 (valid at lambda_samples[0]) along the sample path by
// Newton refinement seeded from the previous cycle, recursively bisecting
// any step Newton cannot cross.  The report diagnoses the path end:
// Transcendental when a cycle point escaped (max |Im| > kEscapeThreshold)
// with |m| < 1e-3, Algebraic when |m - 1| <= 1.1e-3, otherwise None.
// Throws ContinuationError (carrying the last good lambda) if a step fails
// at the bisection depth limit.
ContinuationResult continue_cycle_along_path(
    const std::vector<Parameter>& lambda_samples, const Cycle& cycle0);

}  // namespace tandyn
