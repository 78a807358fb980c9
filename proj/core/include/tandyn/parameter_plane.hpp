#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tandyn/dynamics.hpp"
#include "tandyn/types.hpp"

namespace tandyn {

// Which kind of hyperbolic component a parameter sits in.
//   TwoCycles     - two attracting period-p cycles, negatives of each other
//                   (one per asymptotic value).
//   SingleDoubled - one symmetric attracting cycle of period 2p capturing
//                   both asymptotic values; the component period is p.
//   UnitDisk      - |lambda| < 1, attracting fixed point 0.
enum class ComponentKind { TwoCycles, SingleDoubled, UnitDisk };

const char* component_kind_name(ComponentKind k);

struct ComponentSample {
  Cx lambda{0.0, 0.0};
  int period = 0;      // component period p
  ComponentKind kind = ComponentKind::UnitDisk;
  Cx multiplier;       // of the full attracting cycle (period 2p for
                       // SingleDoubled) - the eigenvalue-map value
  std::vector<Cx> cycle_points;  // the captured cycle (full primitive orbit)
};

// classify_parameter outcome: either a ComponentSample or the reason no
// component could be certified within the budget.
struct Classification {
  bool determined = false;
  ComponentSample sample;            // valid iff determined
  OrbitTag undetermined_reason = OrbitTag::Undetermined;  // else: why not
  int prepole_step = 0;              // when undetermined_reason==PrepoleHit
  long long prepole_index = 0;
};

// Decides the component of lambda from the orbit of the asymptotic value
// lambda*i (the -lambda*i orbit is its exact negation, so one orbit carries
// both): a confirmed attracting cycle whose point set is self-negation-
// invariant means both asymptotic values share it (UnitDisk when the cycle
// is the fixed point 0, else SingleDoubled with period = cycle period / 2);
// otherwise the negated partner cycle captures -lambda*i and the kind is
// TwoCycles.  On an undetermined first pass the orbit is re-run once with a
// doubled budget.  Never throws on dynamical grounds; the tag records why a
// parameter stayed unclassified (budget exhausted, or the orbit hit a pole -
// a virtual-center candidate).
Classification classify_parameter(const Parameter& lam, int budget = 2000);

// The eigenvalue map: multiplier of the attracting cycle at lambda (for
// UnitDisk this is lambda itself).  Throws NotHyperbolicError when
// classification comes back undetermined.
Cx eigenvalue(const Parameter& lam, int budget = 2000);

// One accepted point of an internal ray R(alpha).
struct RayPoint {
  double r = 0.0;      // |multiplier| target, in (0, 1)
  double alpha = 0.0;  // angle fraction: target multiplier = r*e^{2*pi*i*alpha}
  Cx lambda;
  Cx multiplier;       // achieved multiplier, |multiplier - target| < 1e-8
};

// Traces the internal ray R(alpha) of the component containing `seed`:
// first walks the multiplier angle from arg m(seed) to 2*pi*alpha at
// constant radius, then follows a geometric radius schedule (ratio 0.9,
// adaptively refined on corrector failure) from |m(seed)| to r_end,
// emitting one RayPoint per accepted radius.  The corrector is Newton in
// lambda on the tracked cycle's multiplier, with dm/dlambda by central
// finite differences (step 1e-7).  Works in both directions (r_end above or
// below the seed radius).  Throws NotHyperbolicError for a non-hyperbolic
// seed and ContinuationError (with the last good lambda) when a step cannot
// be made.
std::vector<RayPoint> trace_internal_ray(const Parameter& seed, double alpha,
                                         double r_end);

// A parameter lambda* on the boundary of a component pair where all internal
// rays land: lambda* * i is a prepole of order p-1.  Concretely
// f^{p-2}(lambda* * i) = -s_{pole_index} (the orbit of lambda* * i falls
// onto the negated pole; -lambda* * i lands on +s_{pole_index}), and
// residual = |f^{p-2}(lambda* * i) + s_{pole_index}|.
struct VirtualCenter {
  Cx lambda_star;
  int order = 0;        // p - 1 = itinerary length
  Itinerary itinerary;  // (n_1, ..., n_{p-1}) as passed to the solver
  long long pole_index = 0;  // n_1
  double residual = 0.0;
};

// Solves for the virtual center of the period-p component pair with the
// given itinerary (length p-1): the fixed-point iteration
//   lambda <- i * P(lambda),
//   P(lambda) = f^{-1}_{n_{p-1}} o ... o f^{-1}_{n_2} (s_{n_1})
// (damped, using the unwrapped inverse branches so boundary knife-edges keep
// their side), then Newton polishing on g(lambda) = f^{p-2}(lambda*i) +
// s_{n_1} with the exact parameter derivative.  For p = 2 the composition is
// empty and lambda* = i*s_{n_1} exactly.  If `seed` is absent (or fails) a
// built-in seed ladder starting from i*s_{n_1} is tried.  Requires residual
// < 1e-10; throws NoConvergenceError otherwise.
VirtualCenter find_virtual_center(int p, const Itinerary& itin,
                                  std::optional<Cx> seed = std::nullopt);

struct CenterEntry {
  long long k = 0;
  bool converged = false;
  std::optional<VirtualCenter> center;  // set iff converged
  std::string error;                    // set iff !converged
};

// Order-(parent.order + 1) virtual centers with itineraries
// (k, parent.itinerary...), k = k_begin..k_end, each solved with the parent
// center as seed.  These accumulate on the parent as |k| grows.  Per-k
// failures are reported in the entry, never thrown.
std::vector<CenterEntry> centers_accumulation(const VirtualCenter& parent,
                                              long long k_begin,
                                              long long k_end);

// A point of the boundary curve of the period-1 component Omega_1 at height
// Im u = y: Newton in x on |u|^2 = |sin u|^2 (x^2 + y^2 = sin^2 x + sinh^2 y,
// monotone in x > 0), then lambda = z / tan z at z = u/2, which makes z a
// fixed point of f_lambda with |f'(z)| = |lambda sec^2 z| = 1.
Parameter omega1_boundary_point(double y, double x_guess);

// The boundary point of the seed's component where the internal ray R(j/q)
// lands with multiplier e^{2*pi*i*j/q} (a q-th root of unity): traces the
// ray with the radius ascending to 1 until |m - e^{2*pi*i*j/q}| < 1e-6.
// On the unit disk component this is exactly the root of unity itself.
Cx bud_point(const Parameter& seed, int q, int j);

}  // namespace tandyn
