#pragma once

#include <vector>

#include "tandyn/types.hpp"

namespace tandyn {

// One preimage of z under f_lambda, selected so that the real part lies in
// the half-open vertical strip L_n = [(n-1/2)*pi, (n+1/2)*pi).
//
//   Re w = atan2(2*a1*x + 2*a2*y, |lambda|^2 - |z|^2) / 2 + n*pi
//   Im w = -(1/4) * (log N1 - log N2)
//     N1 = (a1 - y)^2 + (a2 + x)^2,  N2 = (a1 + y)^2 + (a2 - x)^2
//
// (lambda = a1 + i*a2, z = x + i*y; N1*N2 equals the usual
// (|lambda|^2-|z|^2)^2 + (2*a1*x+2*a2*y)^2 exactly, but stays accurate when
// z approaches an asymptotic value.)  When the half-angle falls on the
// excluded right edge it is wrapped to the included left edge, and the
// result is clamped into the strip against the last-ulp rounding of n*pi.
//
// Throws AsymptoticValueError if z is within kBranchTol of +-lambda*i (the
// omitted values of f_lambda) and InfinityInputError for the point at
// infinity (whose preimage is the pole, see inverse_branch_at_infinity).
Cx inverse_branch(long long n, const Parameter& lam, ComplexPoint z);

// Same formula but without the edge wrap or clamp: a half-angle of exactly
// +-pi/2 (which atan2 produces on the sign of a zero numerator) is kept, so
// the result may land on the excluded right edge of L_n.  Virtual-center
// solving iterates through preimages of points sitting exactly on a strip
// boundary and needs that knife edge preserved; everything else should use
// inverse_branch.
Cx inverse_branch_unwrapped(long long n, const Parameter& lam, ComplexPoint z);

// Preimage of the point at infinity: the pole s_n = (n+1/2)*pi.
ComplexPoint inverse_branch_at_infinity(long long n);

// Applies inverse_branch with indices itin[0] first and itin[p-1] last, so
// the result w satisfies f^p(w) = z with f^{p-1-j}(w) in strip L_{itin[j]}.
// AsymptoticValueError carries the 0-based index into itin at which an
// intermediate value hit +-lambda*i.
Cx compose_inverse(const Itinerary& itin, const Parameter& lam,
                   ComplexPoint z);

// A point mapped to infinity in exactly `order` steps.  order 0 is the
// point at infinity itself (empty itinerary).
struct Prepole {
  ComplexPoint point;
  int order;
  Itinerary itinerary;
};

// The prepole of order p = itin.size() with the given itinerary: start at
// the pole s_{itin[0]} and pull back through branches itin[1], ..., itin[p-1]
// (applied in that order).  The result v satisfies f^{p-1}(v) = s_{itin[0]},
// hence f^p(v) = infinity, and v lies in strip L_{itin[p-1]} for p >= 2.
// AsymptoticValueError (depth = itinerary index) if a pull-back hits
// +-lambda*i, i.e. when lambda*i is itself a prepole in the way (the case
// that produces virtual centers).
Prepole prepole(const Itinerary& itin, const Parameter& lam);

struct PrepoleEnumeration {
  std::vector<Prepole> prepoles;   // lexicographic in itinerary
  std::vector<Itinerary> skipped;  // itineraries that hit +-lambda*i
};

// All prepoles of order p with itinerary entries |n_j| <= bound, enumerated
// lexicographically.  Itineraries whose pull-back hits an asymptotic value
// are reported in `skipped` rather than raising.
PrepoleEnumeration enumerate_prepoles(int p, long long bound,
                                      const Parameter& lam);

}  // namespace tandyn
