#include "tandyn/parameter_plane.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tandyn/cycles.hpp"
#include "tandyn/dynamics.hpp"
#include "tandyn/inverse.hpp"

namespace tandyn {

const char* component_kind_name(ComponentKind k) {
  switch (k) {
    case ComponentKind::TwoCycles:
      return "TwoCycles";
    case ComponentKind::SingleDoubled:
      return "SingleDoubled";
    case ComponentKind::UnitDisk:
      return "UnitDisk";
  }
  return "?";
}

namespace {

// Is the point set of `pts` invariant under z -> -z (tolerance tol)?
bool self_negation_invariant(const std::vector<Cx>& pts, double tol) {
  for (const Cx& a : pts) {
    bool matched = false;
    for (const Cx& b : pts)
      if (std::abs(a + b) < tol) {
        matched = true;
        break;
      }
    if (!matched) return false;
  }
  return true;
}

}  // namespace

Classification classify_parameter(const Parameter& lam, int budget) {
  Classification out;

  const Cx z0 = lam.lambda * Cx(0.0, 1.0);  // asymptotic value lambda*i
  OrbitOutcome orb = iterate_orbit(lam, ComplexPoint(z0), budget);
  if (orb.tag == OrbitTag::Undetermined)
    orb = iterate_orbit(lam, ComplexPoint(z0), 2 * budget);

  if (orb.tag == OrbitTag::PrepoleHit) {
    out.undetermined_reason = OrbitTag::PrepoleHit;
    out.prepole_step = orb.step;
    out.prepole_index = orb.pole_index;
    return out;
  }
  if (orb.tag == OrbitTag::Undetermined) {
    out.undetermined_reason = OrbitTag::Undetermined;
    return out;
  }

  // The -lambda*i orbit is the exact negation of this one, so its limit
  // cycle is the negated point set: the two limit cycles coincide exactly
  // when the captured cycle is self-negation-invariant.
  const std::vector<Cx>& pts = orb.cycle_points;
  const bool symmetric = self_negation_invariant(pts, kClassTol);

  ComponentSample& s = out.sample;
  s.lambda = lam.lambda;
  s.multiplier = orb.multiplier;
  s.cycle_points = pts;

  if (symmetric) {
    if (orb.period == 1 && std::abs(pts[0]) < kClassTol) {
      s.kind = ComponentKind::UnitDisk;
      s.period = 1;
      // The fixed point is exactly 0 and f'(0) = lambda identically; snap
      // away the ~1e-12 Newton residue so the eigenvalue map is exact here.
      s.cycle_points = {Cx(0.0, 0.0)};
      s.multiplier = lam.lambda;
    } else if (orb.period % 2 == 0) {
      s.kind = ComponentKind::SingleDoubled;
      s.period = orb.period / 2;
    } else {
      // A self-negation-invariant cycle of odd period contains 0 and must be
      // the fixed point; anything else is numerical confusion near a
      // boundary, which we refuse to certify.
      out.undetermined_reason = OrbitTag::Undetermined;
      return out;
    }
  } else {
    s.kind = ComponentKind::TwoCycles;
    s.period = orb.period;
  }
  out.determined = true;
  return out;
}

Cx eigenvalue(const Parameter& lam, int budget) {
  const Classification c = classify_parameter(lam, budget);
  if (!c.determined)
    throw NotHyperbolicError(
        "eigenvalue: no attracting cycle certified for lambda");
  return c.sample.multiplier;
}

// ---------------------------------------------------------------------------
// Internal rays
// ---------------------------------------------------------------------------

namespace {

// A cycle followed through parameter space; re-solved by Newton at each new
// lambda from its previous points so the multiplier stays on one branch of
// the (infinite-degree) eigenvalue covering.
struct TrackedCycle {
  Cx lambda;
  std::vector<Cx> points;
  int period = 0;
  Cx multiplier;
};

bool retarget(TrackedCycle& tc, Cx lambda_new) {
  try {
    const Cycle c =
        refine_cycle_newton(Parameter(lambda_new), ComplexPoint(tc.points[0]),
                            tc.period);
    if (c.period != tc.period) return false;
    if (std::abs(c.points[0] - tc.points[0]) > 0.8) return false;
    tc.lambda = lambda_new;
    tc.points = c.points;
    tc.multiplier = c.multiplier;
    return true;
  } catch (const std::exception&) {
    // Includes Parameter rejecting an exact-zero Newton step in lambda.
    return false;
  }
}

// Newton in lambda on m(lambda) = m_target along the tracked cycle, with
// dm/dlambda by central finite differences.
bool solve_multiplier_target(TrackedCycle& tc, Cx m_target) {
  const double tol = 1e-10 + 1e-9 * std::abs(m_target);
  for (int it = 0; it < 40; ++it) {
    if (std::abs(tc.multiplier - m_target) < tol) return true;
    const double h = 1e-7;
    TrackedCycle plus = tc, minus = tc;
    if (!retarget(plus, tc.lambda + h) || !retarget(minus, tc.lambda - h))
      return false;
    const Cx dm = (plus.multiplier - minus.multiplier) / (2.0 * h);
    if (std::abs(dm) < 1e-300) return false;
    const Cx lambda_next = tc.lambda - (tc.multiplier - m_target) / dm;
    if (!(std::isfinite(lambda_next.real()) &&
          std::isfinite(lambda_next.imag())))
      return false;
    if (!retarget(tc, lambda_next)) return false;
  }
  return std::abs(tc.multiplier - m_target) < tol;
}

TrackedCycle seed_tracked_cycle(const Parameter& seed) {
  const Classification c = classify_parameter(seed);
  if (!c.determined)
    throw NotHyperbolicError("ray tracing: seed parameter not hyperbolic");
  TrackedCycle tc;
  tc.lambda = seed.lambda;
  tc.points = c.sample.cycle_points;
  tc.period = static_cast<int>(c.sample.cycle_points.size());
  tc.multiplier = c.sample.multiplier;
  return tc;
}

// Walk the multiplier argument from arg m(seed) to theta_target at constant
// radius, in adaptively halved steps of at most 0.1 rad.
void sweep_angle(TrackedCycle& tc, double theta_target) {
  const double r = std::abs(tc.multiplier);
  double theta = std::arg(tc.multiplier);
  double remaining = theta_target - theta;
  remaining = std::remainder(remaining, 2.0 * kPi);  // shortest direction
  double step = remaining >= 0.0 ? 0.1 : -0.1;
  while (std::fabs(remaining) > 1e-12) {
    if (std::fabs(step) > std::fabs(remaining)) step = remaining;
    const double theta_next = theta + step;
    TrackedCycle attempt = tc;
    if (solve_multiplier_target(attempt,
                                std::polar(r, theta_next))) {
      tc = attempt;
      theta = theta_next;
      remaining -= step;
      // Recover the nominal step after successful moves.
      if (std::fabs(step) < 0.1) step *= 2.0;
    } else {
      step *= 0.5;
      if (std::fabs(step) < 1e-9)
        throw ContinuationError(
            "ray tracing: angular sweep stalled at multiplier angle " +
                std::to_string(theta),
            tc.lambda);
    }
  }
}

// Move the multiplier radius from |m(tc)| to r_end at fixed angle, calling
// `emit` at every accepted radius (including the endpoints).
template <typename Emit>
void sweep_radius(TrackedCycle& tc, double theta, double r_end, Emit emit) {
  double r = std::abs(tc.multiplier);
  emit(tc, r);
  if (r == r_end) return;
  const bool descending = r_end < r;
  double ratio = 0.9;  // per-step factor applied toward r_end
  int failures = 0;
  while (descending ? r > r_end : r < r_end) {
    double r_next = descending ? r * ratio : r / ratio;
    if (descending ? r_next < r_end : r_next > r_end) r_next = r_end;
    TrackedCycle attempt = tc;
    if (solve_multiplier_target(attempt, std::polar(r_next, theta))) {
      tc = attempt;
      r = r_next;
      emit(tc, r);
      if (ratio < 0.9) ratio = std::min(0.9, std::sqrt(ratio * 0.9));
    } else {
      ratio = std::sqrt(ratio);  // weaker step toward 1
      if (++failures > 200 || ratio > 1.0 - 1e-9)
        throw ContinuationError(
            "ray tracing: radial continuation stalled at r = " +
                std::to_string(r),
            tc.lambda);
    }
  }
}

}  // namespace

std::vector<RayPoint> trace_internal_ray(const Parameter& seed, double alpha,
                                         double r_end) {
  if (!(r_end > 0.0) || r_end >= 1.0)
    throw std::invalid_argument("trace_internal_ray: r_end must be in (0,1)");

  TrackedCycle tc = seed_tracked_cycle(seed);
  const double theta = 2.0 * kPi * alpha;

  // Phase A: get onto the ray R(alpha) at the seed's radius.
  sweep_angle(tc, theta);

  // Phase B: follow the ray to r_end, recording points.
  std::vector<RayPoint> ray;
  sweep_radius(tc, theta, r_end, [&](const TrackedCycle& at, double r) {
    RayPoint p;
    p.r = r;
    p.alpha = alpha;
    p.lambda = at.lambda;
    p.multiplier = at.multiplier;
    ray.push_back(p);
  });
  return ray;
}

Cx bud_point(const Parameter& seed, int q, int j) {
  if (q < 1) throw std::invalid_argument("bud_point: q must be >= 1");

  TrackedCycle tc = seed_tracked_cycle(seed);
  const double theta = 2.0 * kPi * static_cast<double>(j) /
                       static_cast<double>(q);
  const Cx root = std::polar(1.0, theta);

  sweep_angle(tc, theta);

  // Ascend the radius toward 1 by shrinking 1 - r geometrically; since the
  // achieved multiplier sits on the ray, |m - root| = 1 - r + O(corrector
  // tolerance).
  double r = std::abs(tc.multiplier);
  int failures = 0;
  double shrink = 0.9;
  while (std::abs(tc.multiplier - root) >= 1e-6) {
    double r_next = 1.0 - shrink * (1.0 - r);
    if (r_next <= r)
      r_next = 1.0 - 0.5 * (1.0 - r);  // guard against a stalled schedule
    TrackedCycle attempt = tc;
    if (solve_multiplier_target(attempt, std::polar(r_next, theta))) {
      tc = attempt;
      r = r_next;
      if (shrink < 0.9) shrink = std::min(0.9, std::sqrt(shrink * 0.9));
    } else {
      shrink = std::sqrt(shrink);
      if (++failures > 200 || shrink > 1.0 - 1e-9)
        throw ContinuationError(
            "bud_point: continuation toward the boundary stalled at r = " +
                std::to_string(r),
            tc.lambda);
    }
  }
  return tc.lambda;
}

// ---------------------------------------------------------------------------
// Virtual centers
// ---------------------------------------------------------------------------

namespace {

// P(lambda) = f^{-1}_{n_{p-1}} o ... o f^{-1}_{n_2} (s_{n_1}), with the
// unwrapped branches: the pull-back of a pole starts exactly on a strip
// boundary, and the wrapped branch would fold the boundary itself onto the
// opposite edge of the strip (changing which center the iteration finds).
Cx center_pullback(const Itinerary& itin, const Parameter& lam) {
  Cx w(pole(itin[0]), 0.0);
  for (size_t j = 1; j < itin.size(); ++j)
    w = inverse_branch_unwrapped(itin[j], lam, ComplexPoint(w));
  return w;
}

// g(lambda) = f^{p-2}(lambda*i) + s_{n_1}; the center is a root of g.
// Throws (PoleProximityError) when the orbit strays onto a pole.
Cx center_residual(int p, long long n1, Cx lambda) {
  const Parameter lam(lambda);
  Cx z = lambda * Cx(0.0, 1.0);
  for (int k = 0; k < p - 2; ++k) z = eval_f(lam, ComplexPoint(z));
  return z + Cx(pole(n1), 0.0);
}

struct CenterAttempt {
  bool ok = false;
  Cx lambda;
  double residual = 0.0;
};

CenterAttempt attempt_center(int p, const Itinerary& itin, Cx seed) {
  CenterAttempt res;
  Cx lambda = seed;

  // Damped fixed-point stage: lambda <- (1-beta)*lambda + beta*i*P(lambda).
  // The pull-back contracts strongly near the center, so this mostly serves
  // to walk the seed into Newton's basin while keeping the itinerary.
  const double beta = 0.7;
  try {
    for (int it = 0; it < 80; ++it) {
      if (lambda == Cx(0.0, 0.0)) return res;
      const Cx target = Cx(0.0, 1.0) * center_pullback(itin, Parameter(lambda));
      const Cx next = (1.0 - beta) * lambda + beta * target;
      if (!(std::isfinite(next.real()) && std::isfinite(next.imag())))
        return res;
      const double moved = std::abs(next - lambda);
      lambda = next;
      if (moved < 1e-13) break;
    }
  } catch (const std::exception&) {
    return res;  // pull-back failed from this seed
  }

  // Newton polish on the forward residual with the exact derivative
  // d/dlambda f^{p-2}(lambda*i) from the orbit recurrence.
  try {
    for (int it = 0; it < 40; ++it) {
      const Cx g = center_residual(p, itin[0], lambda);
      if (std::abs(g) < 1e-12) break;
      const Cx dg = orbit_derivative_wrt_lambda(Parameter(lambda), p - 2).back();
      if (std::abs(dg) < 1e-300) return res;
      const Cx next = lambda - g / dg;
      if (!(std::isfinite(next.real()) && std::isfinite(next.imag())))
        return res;
      lambda = next;
    }
    res.residual = std::abs(center_residual(p, itin[0], lambda));
  } catch (const std::exception&) {
    return res;  // includes Parameter rejecting a zero Newton step
  }

  res.ok = res.residual < 1e-10;
  res.lambda = lambda;
  return res;
}

}  // namespace

VirtualCenter find_virtual_center(int p, const Itinerary& itin,
                                  std::optional<Cx> seed) {
  if (p < 2)
    throw std::invalid_argument("find_virtual_center: period must be >= 2");
  if (itin.size() != static_cast<size_t>(p - 1))
    throw std::invalid_argument(
        "find_virtual_center: itinerary length must be period - 1");

  // p = 2: the pull-back is the bare pole and the solve is exact.
  if (p == 2) {
    VirtualCenter vc;
    vc.lambda_star = Cx(0.0, pole(itin[0]));
    vc.order = 1;
    vc.itinerary = itin;
    vc.pole_index = itin[0];
    vc.residual = 0.0;
    return vc;
  }

  std::vector<Cx> seeds;
  if (seed) seeds.push_back(*seed);
  const Cx axis_seed(0.0, pole(itin[0]));
  if (seed) seeds.push_back(*seed + Cx(0.05, 0.0));
  seeds.push_back(axis_seed);
  seeds.push_back(axis_seed + Cx(0.05, 0.0));
  seeds.push_back(Cx(0.5, 0.5));
  seeds.push_back(Cx(0.0, 2.0));

  for (const Cx& s : seeds) {
    if (s == Cx(0.0, 0.0)) continue;
    const CenterAttempt a = attempt_center(p, itin, s);
    if (a.ok) {
      VirtualCenter vc;
      vc.lambda_star = a.lambda;
      vc.order = p - 1;
      vc.itinerary = itin;
      vc.pole_index = itin[0];
      vc.residual = a.residual;
      return vc;
    }
  }
  throw NoConvergenceError(
      "find_virtual_center: no seed converged to residual < 1e-10");
}

std::vector<CenterEntry> centers_accumulation(const VirtualCenter& parent,
                                              long long k_begin,
                                              long long k_end) {
  if (k_begin > k_end)
    throw std::invalid_argument("centers_accumulation: empty k range");

  const int p_child = parent.order + 2;
  std::vector<CenterEntry> out;
  out.reserve(static_cast<size_t>(k_end - k_begin + 1));
  for (long long k = k_begin; k <= k_end; ++k) {
    CenterEntry e;
    e.k = k;
    Itinerary itin;
    itin.reserve(parent.itinerary.size() + 1);
    itin.push_back(k);
    itin.insert(itin.end(), parent.itinerary.begin(), parent.itinerary.end());
    try {
      e.center = find_virtual_center(p_child, itin, parent.lambda_star);
      e.converged = true;
    } catch (const std::exception& ex) {
      e.error = ex.what();
    }
    out.push_back(std::move(e));
  }
  return out;
}

// ---------------------------------------------------------------------------
// The Omega_1 boundary
// ---------------------------------------------------------------------------

Parameter omega1_boundary_point(double y, double x_guess) {
  if (y == 0.0)
    throw std::invalid_argument("omega1_boundary_point: y must be nonzero");

  // psi(x) = x^2 + y^2 - sin^2 x - sinh^2 y vanishes exactly on the locus
  // |u| = |sin u|; psi' = 2x - sin 2x > 0 for x > 0, so Newton from a
  // positive guess is monotone once bracketed.
  const double ay = std::fabs(y);
  const double sh = std::sinh(ay);
  const double c = y * y - sh * sh;  // <= 0
  double x = std::fabs(x_guess);
  if (x == 0.0) x = 1.0;
  bool converged = false;
  for (int it = 0; it < 80; ++it) {
    const double s = std::sin(x);
    const double psi = x * x + c - s * s;
    const double dpsi = 2.0 * x - std::sin(2.0 * x);
    if (dpsi == 0.0) break;
    const double step = psi / dpsi;
    x -= step;
    if (x <= 0.0) x = 1e-8;
    if (std::fabs(step) < 1e-15 * std::max(1.0, x)) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw NoConvergenceError(
        "omega1_boundary_point: Newton on the boundary locus stalled");

  const Cx z(0.5 * x, 0.5 * y);  // z = u/2
  const Cx lambda = z / tan_stable(z);
  return Parameter(lambda);
}

}  // namespace tandyn
