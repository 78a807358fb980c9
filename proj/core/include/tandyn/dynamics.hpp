#pragma once

// Forward dynamics of f_lambda(z) = lambda * tan z on C - {0}.
//
// The family has no critical points; its two asymptotic values are
// +-lambda*i (limits of f along Im z -> +-inf). Poles of f sit at
// s_n = (n + 1/2)*pi and are the only preimages of infinity.

#include <vector>

#include "tandyn/types.hpp"

namespace tandyn {

// s_n = (n + 1/2) * pi.
double pole(long long n);

struct NearestPole {
  long long index;  // n of the closest pole s_n
  double distance;  // full complex distance |z - s_n|
};

// Closest pole to a finite point. Only Re z matters for the argmin; ties at
// exact midpoints resolve to the smaller |n|, then the smaller n.
NearestPole nearest_pole(ComplexPoint z);

// tan z evaluated so that
//   * no intermediate overflows for any finite z,
//   * tan(-z) == -tan(z) and tan(conj z) == conj(tan z) hold bit-exactly
//     (signs are folded out of sin/sinh and restored explicitly).
// For |Im z| > kYSwitch the quotient is rescaled by 2*exp(-2|Im z|):
//   num = 2t*sin2x + i*(1-t^2), den = 2t*cos2x + (1+t^2), t = exp(-2|y|),
// which tends to +-i with error ~2*exp(-2|y|).
Cx tan_stable(Cx z);

// sec^2 z = 1 + tan^2 z, computed as 2/(1 + cos 2z) in components:
//   2 / ((1 + cos2x*cosh2y) - i*sin2x*sinh2y),
// again with the 2t-scaled variant past kYSwitch. Avoids the catastrophic
// cancellation of forming 1 + tan^2 z when tan z ~ +-i. Bit-exactly even:
// sec2(-z) == sec2(z), and conj-symmetric.
Cx sec2_stable(Cx z);

// f(z) = lambda * tan z. Throws InfinityInputError for the point at infinity
// and PoleProximityError within kPoleTol of a pole.
Cx eval_f(const Parameter& lam, ComplexPoint z);

// f'(z) = lambda * (1 + tan^2 z) = lambda * sec^2 z. Same guards as eval_f.
Cx eval_f_prime(const Parameter& lam, ComplexPoint z);

enum class OrbitTag { Attracted, PrepoleHit, Undetermined };

// Outcome of iterating a single forward orbit. Exactly one group of fields is
// meaningful, selected by `tag`:
//   Attracted    -> period, cycle_points, multiplier, captured_step
//   PrepoleHit   -> step, pole_index
//   Undetermined -> last_point
struct OrbitOutcome {
  OrbitTag tag = OrbitTag::Undetermined;

  // Attracted: the Newton-confirmed attracting cycle (|m| < 1 - kClassTol).
  int period = 0;
  std::vector<Cx> cycle_points;
  Cx multiplier{0.0, 0.0};
  int captured_step = 0;  // step at which the near-return was confirmed

  // PrepoleHit: the orbit landed within kPoleTol of pole s_{pole_index}.
  int step = 0;
  long long pole_index = 0;

  // Undetermined: where the orbit was when the budget ran out.
  Cx last_point{0.0, 0.0};
};

// Iterate z -> f(z) up to max_iter steps. A ring buffer of the last
// kMaxPeriod points feeds a near-return scan (threshold kCycleTol); every
// candidate is handed to Newton cycle refinement, and only a confirmed cycle
// with |m| < 1 - kClassTol yields Attracted. Points with |Im z| > kImClamp
// are clamped to the asymptotic value +-lambda*i on the next step instead of
// being evaluated. If `trace` is non-null the visited points (including z0)
// are appended to it.
OrbitOutcome iterate_orbit(const Parameter& lam, ComplexPoint z0, int max_iter,
                           std::vector<Cx>* trace = nullptr);

// d z_k / d lambda along the orbit of the asymptotic value z_0 = lambda*i,
// by the forward recurrence
//   dz_0 = i,   dz_{k+1} = tan(z_k) + lambda * sec^2(z_k) * dz_k.
// Returns entries k = 0..steps (inclusive). Throws PoleProximityError if the
// orbit meets a pole first.
std::vector<Cx> orbit_derivative_wrt_lambda(const Parameter& lam, int steps);

}  // namespace tandyn
