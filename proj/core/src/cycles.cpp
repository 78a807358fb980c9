#include "tandyn/cycles.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tandyn/dynamics.hpp"
#include "tandyn/inverse.hpp"

namespace tandyn {

namespace {

// Forward orbit of length p, collecting the points and the product of f'.
// Returns false (instead of throwing) when a point gets too close to a pole
// so callers can decide how to report it.
bool forward_orbit(const Parameter& lam, Cx z0, int p, std::vector<Cx>& pts,
                   Cx& deriv_prod) {
  pts.clear();
  pts.reserve(static_cast<size_t>(p));
  deriv_prod = Cx(1.0, 0.0);
  Cx z = z0;
  for (int j = 0; j < p; ++j) {
    if (nearest_pole(ComplexPoint(z)).distance < kPoleTol) return false;
    pts.push_back(z);
    deriv_prod *= lam.lambda * sec2_stable(z);
    z = lam.lambda * tan_stable(z);
  }
  pts.push_back(z);  // pts[p] = f^p(z0)
  return true;
}

bool closes_with_period(const Parameter& lam, Cx z0, int d, double tol) {
  Cx z = z0;
  for (int j = 0; j < d; ++j) {
    if (nearest_pole(ComplexPoint(z)).distance < kPoleTol) return false;
    z = lam.lambda * tan_stable(z);
  }
  return std::abs(z - z0) < tol;
}

}  // namespace

Stability classify_cycle(Cx m) {
  const double a = std::abs(m);
  if (a < 1.0 - kClassTol) return Stability::Attracting;
  if (a > 1.0 + kClassTol) return Stability::Repelling;
  return Stability::Neutral;
}

Cx multiplier(const Parameter& lam, const std::vector<Cx>& points) {
  Cx m(1.0, 0.0);
  for (const Cx& z : points) m *= lam.lambda * sec2_stable(z);
  return m;
}

Cx multiplier_via_sine(const Parameter& lam, const std::vector<Cx>& points) {
  Cx m(1.0, 0.0);
  const size_t p = points.size();
  for (size_t i = 0; i < p; ++i) {
    const Cx next = lam.lambda * tan_stable(points[i]);
    const Cx s2 = std::sin(2.0 * points[i]);
    m *= 2.0 * next / s2;
  }
  return m;
}

Cycle refine_cycle_newton(const Parameter& lam, ComplexPoint z_guess, int p) {
  if (p < 1)
    throw std::invalid_argument("refine_cycle_newton: period must be >= 1");
  if (z_guess.at_infinity)
    throw InfinityInputError("refine_cycle_newton: infinite guess");

  Cx z = z_guess.value;
  std::vector<Cx> pts;
  Cx dprod;
  bool converged = false;
  for (int it = 0; it < 50; ++it) {
    if (!forward_orbit(lam, z, p, pts, dprod))
      throw PoleCollisionError(
          "refine_cycle_newton: orbit point within kPoleTol of a pole");
    const Cx fval = pts[static_cast<size_t>(p)] - z;
    if (std::abs(fval) < 1e-12) {
      converged = true;
      break;
    }
    const Cx fprime = dprod - Cx(1.0, 0.0);
    if (std::abs(fprime) < 1e-300)
      throw NoConvergenceError(
          "refine_cycle_newton: vanishing derivative of f^p(z) - z");
    z -= fval / fprime;
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw NoConvergenceError("refine_cycle_newton: iterate left the plane");
  }
  if (!converged)
    throw NoConvergenceError(
        "refine_cycle_newton: no convergence in 50 Newton steps");

  // Reduce to the primitive period: smallest divisor d of p whose d-step
  // return lands back on z.
  int prim = p;
  for (int d = 1; d < p; ++d) {
    if (p % d != 0) continue;
    if (closes_with_period(lam, z, d, kCycleTol)) {
      prim = d;
      break;
    }
  }

  if (!forward_orbit(lam, z, prim, pts, dprod))
    throw PoleCollisionError(
        "refine_cycle_newton: refined orbit within kPoleTol of a pole");
  pts.pop_back();  // drop f^prim(z), keep the cycle points proper

  Cycle c;
  c.points = pts;
  c.period = prim;
  c.multiplier = dprod;
  c.stability = classify_cycle(c.multiplier);
  c.symmetric = false;
  if (prim % 2 == 0) {
    const size_t half = static_cast<size_t>(prim) / 2;
    bool sym = true;
    for (size_t i = 0; i < half; ++i)
      if (std::abs(pts[i + half] + pts[i]) >= kCycleTol) {
        sym = false;
        break;
      }
    c.symmetric = sym;
  }
  return c;
}

std::vector<Cycle> repelling_cycles_near_prepole(const Parameter& lam,
                                                 const Itinerary& prepole_itin,
                                                 long long k_begin,
                                                 long long k_end) {
  if (prepole_itin.empty())
    throw std::invalid_argument(
        "repelling_cycles_near_prepole: itinerary must be non-empty");
  if (k_begin > k_end)
    throw std::invalid_argument(
        "repelling_cycles_near_prepole: empty k range");

  const Prepole v = prepole(prepole_itin, lam);
  const Cx asym = lam.lambda * Cx(0.0, 1.0);
  if (std::abs(v.point.value - asym) <= 2.0 * kBranchTol ||
      std::abs(v.point.value + asym) <= 2.0 * kBranchTol)
    throw AsymptoticValueError(
        "repelling_cycles_near_prepole: prepole coincides with an "
        "asymptotic value");

  const int p = static_cast<int>(prepole_itin.size()) + 1;
  std::vector<Cycle> out;
  out.reserve(static_cast<size_t>(k_end - k_begin + 1));

  for (long long k = k_begin; k <= k_end; ++k) {
    Itinerary itin;
    itin.reserve(prepole_itin.size() + 1);
    itin.push_back(k);
    itin.insert(itin.end(), prepole_itin.begin(), prepole_itin.end());

    // The composed inverse branch with this itinerary is a contraction on a
    // neighborhood of v once |k| is large enough; its fixed point is the
    // sought cycle point.
    Cx z = v.point.value;
    bool contracted = false;
    try {
      for (int it = 0; it < 400; ++it) {
        const Cx znext = compose_inverse(itin, lam, ComplexPoint(z));
        const double step = std::abs(znext - z);
        z = znext;
        if (step < 1e-12) {
          contracted = true;
          break;
        }
      }
    } catch (const Error& e) {
      throw ContractionFailureError(
          "repelling_cycles_near_prepole: k=" + std::to_string(k) + ": " +
          e.what());
    }
    if (!contracted)
      throw ContractionFailureError(
          "repelling_cycles_near_prepole: inverse composition did not "
          "contract for k=" + std::to_string(k));

    // The contraction stops when backward steps are tiny, but the forward
    // residual |f^p(z) - z| is amplified by the (large) multiplier; Newton
    // polishing removes that amplification.
    Cycle c;
    try {
      c = refine_cycle_newton(lam, ComplexPoint(z), p);
    } catch (const Error& e) {
      throw ContractionFailureError(
          "repelling_cycles_near_prepole: polish failed for k=" +
          std::to_string(k) + ": " + e.what());
    }
    if (c.period != p)
      throw ContractionFailureError(
          "repelling_cycles_near_prepole: contraction for k=" +
          std::to_string(k) + " collapsed onto a period-" +
          std::to_string(c.period) + " cycle");
    out.push_back(std::move(c));
  }
  return out;
}

namespace {

// One continuation step: re-solve the period-p cycle at lam seeded from the
// previous cycle point.  Fails (returns false) when Newton diverges, the
// primitive period changes, or the root jumps too far to be the analytic
// continuation.
bool continuation_step(const Parameter& lam, int p, Cx seed, Cycle& out) {
  try {
    Cycle c = refine_cycle_newton(lam, ComplexPoint(seed), p);
    if (c.period != p) return false;
    if (std::abs(c.points[0] - seed) > 1.0) return false;
    out = std::move(c);
    return true;
  } catch (const Error&) {
    return false;
  }
}

bool continue_between(const Parameter& a, const Parameter& b, int p,
                      const Cycle& at_a, Cycle& at_b, int depth) {
  if (continuation_step(b, p, at_a.points[0], at_b)) return true;
  if (depth >= 24) return false;
  const Parameter mid(0.5 * (a.lambda + b.lambda));
  Cycle at_mid;
  if (!continue_between(a, mid, p, at_a, at_mid, depth + 1)) return false;
  return continue_between(mid, b, p, at_mid, at_b, depth + 1);
}

}  // namespace

ContinuationResult continue_cycle_along_path(
    const std::vector<Parameter>& lambda_samples, const Cycle& cycle0) {
  if (lambda_samples.empty())
    throw std::invalid_argument(
        "continue_cycle_along_path: need at least one sample");
  if (cycle0.points.empty())
    throw std::invalid_argument("continue_cycle_along_path: empty cycle");

  const int p = cycle0.period;
  ContinuationResult res;
  res.cycles.reserve(lambda_samples.size());

  Cycle cur;
  if (!continuation_step(lambda_samples[0], p, cycle0.points[0], cur))
    throw ContinuationError(
        "continue_cycle_along_path: cycle0 is not a cycle at samples[0]",
        lambda_samples[0].lambda);
  res.cycles.push_back(cur);

  for (size_t j = 1; j < lambda_samples.size(); ++j) {
    Cycle next;
    if (!continue_between(lambda_samples[j - 1], lambda_samples[j], p, cur,
                          next, 0))
      throw ContinuationError(
          "continue_cycle_along_path: continuation failed between samples " +
              std::to_string(j - 1) + " and " + std::to_string(j),
          lambda_samples[j - 1].lambda);
    cur = std::move(next);
    res.cycles.push_back(cur);
  }

  // Diagnose the path end on the final cycle.
  const Cycle& last = res.cycles.back();
  PathSingularityReport& rep = res.report;
  rep.final_multiplier = last.multiplier;
  size_t escape_idx = 0;
  for (size_t i = 0; i < last.points.size(); ++i) {
    const double ai = std::fabs(last.points[i].imag());
    if (ai > rep.max_abs_im) {
      rep.max_abs_im = ai;
      escape_idx = i;
    }
  }
  const size_t pred =
      (escape_idx + last.points.size() - 1) % last.points.size();
  const NearestPole np = nearest_pole(ComplexPoint(last.points[pred]));
  rep.predecessor_pole_index = np.index;
  rep.predecessor_pole_distance = np.distance;

  if (rep.max_abs_im > kEscapeThreshold &&
      std::abs(last.multiplier) < 1e-3) {
    rep.kind = PathSingularityReport::Kind::Transcendental;
  } else if (std::abs(last.multiplier - Cx(1.0, 0.0)) <= 1.1e-3) {
    // The tolerance sits just above 1e-3 so a path ending at m = 0.999
    // (away from 1 by 1e-3 plus rounding) still reads as algebraic.
    rep.kind = PathSingularityReport::Kind::Algebraic;
  } else {
    rep.kind = PathSingularityReport::Kind::None;
  }
  return res;
}

}  // namespace tandyn
