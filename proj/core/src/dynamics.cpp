#include "tandyn/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>

#include "tandyn/cycles.hpp"

namespace tandyn {

double pole(long long n) { return (static_cast<double>(n) + 0.5) * kPi; }

NearestPole nearest_pole(ComplexPoint zp) {
  if (zp.at_infinity) throw InfinityInputError("nearest_pole: infinite input");
  const double x = zp.value.real();

  // Candidate indices bracket x/pi - 1/2; clamp so the cast stays defined for
  // absurdly large coordinates (pole spacing is unresolvable there anyway).
  double k = std::floor(x / kPi - 0.5);
  k = std::min(std::max(k, -4.0e15), 4.0e15);
  const long long a = static_cast<long long>(k);
  const long long b = a + 1;

  const double da = std::fabs(x - pole(a));
  const double db = std::fabs(x - pole(b));

  long long n;
  if (da < db) {
    n = a;
  } else if (db < da) {
    n = b;
  } else {
    // Exact midpoint: prefer the smaller |n|, then the smaller n.
    if (std::llabs(a) != std::llabs(b))
      n = std::llabs(a) < std::llabs(b) ? a : b;
    else
      n = std::min(a, b);
  }
  return {n, std::hypot(x - pole(n), zp.value.imag())};
}

Cx tan_stable(Cx z) {
  const double x = z.real();
  const double y = z.imag();
  const double ax = std::fabs(x);
  const double ay = std::fabs(y);
  // Sign folding: evaluate on (|x|, |y|) and restore signs by multiplication.
  // sin/sinh are odd and cos/cosh even, so this reproduces tan exactly while
  // making tan(-z) == -tan(z) and tan(conj z) == conj(tan z) bit-exact
  // (library sin/sinh need not be sign-symmetric on their own).
  const double sx = (x >= 0.0) ? 1.0 : -1.0;
  const double sy = (y >= 0.0) ? 1.0 : -1.0;
  const double s2x = std::sin(2.0 * ax);
  const double c2x = std::cos(2.0 * ax);

  if (ay > kYSwitch) {
    // tan = (sin2x + i sinh2y) / (cos2x + cosh2y), rescaled by 2t with
    // t = exp(-2|y|) so nothing overflows: 2t*sinh2|y| = 1-t^2,
    // 2t*cosh2|y| = 1+t^2.
    const double t = std::exp(-2.0 * ay);
    const double den = 2.0 * t * c2x + (1.0 + t * t);
    return Cx(sx * (2.0 * t * s2x) / den, sy * (1.0 - t * t) / den);
  }

  const double den = c2x + std::cosh(2.0 * ay);
  return Cx(sx * s2x / den, sy * std::sinh(2.0 * ay) / den);
}

Cx sec2_stable(Cx z) {
  const double x = z.real();
  const double y = z.imag();
  const double ax = std::fabs(x);
  const double ay = std::fabs(y);
  const double sx = (x >= 0.0) ? 1.0 : -1.0;
  const double sy = (y >= 0.0) ? 1.0 : -1.0;
  const double s2x = std::sin(2.0 * ax);
  const double c2x = std::cos(2.0 * ax);
  // sec^2 z = 2 / (1 + cos 2z); cos 2z = cos2x*cosh2y - i*sin2x*sinh2y.
  // The sign product sx*sy is even under z -> -z and flips under conjugation,
  // exactly like sin2x*sinh2y itself.
  if (ay > kYSwitch) {
    const double t = std::exp(-2.0 * ay);
    const Cx den(2.0 * t + c2x * (1.0 + t * t),
                 -sx * sy * s2x * (1.0 - t * t));
    return 4.0 * t / den;
  }
  const Cx den(1.0 + c2x * std::cosh(2.0 * ay),
               -sx * sy * s2x * std::sinh(2.0 * ay));
  return 2.0 / den;
}

static void require_evaluable(ComplexPoint z, const char* who) {
  if (z.at_infinity)
    throw InfinityInputError(std::string(who) + ": infinite input");
  const NearestPole np = nearest_pole(z);
  if (np.distance < kPoleTol)
    throw PoleProximityError(std::string(who) + ": within " +
                             std::to_string(kPoleTol) + " of pole s_" +
                             std::to_string(np.index));
}

Cx eval_f(const Parameter& lam, ComplexPoint z) {
  require_evaluable(z, "eval_f");
  return lam.lambda * tan_stable(z.value);
}

Cx eval_f_prime(const Parameter& lam, ComplexPoint z) {
  require_evaluable(z, "eval_f_prime");
  return lam.lambda * sec2_stable(z.value);
}

OrbitOutcome iterate_orbit(const Parameter& lam, ComplexPoint z0, int max_iter,
                           std::vector<Cx>* trace) {
  if (z0.at_infinity)
    throw InfinityInputError("iterate_orbit: infinite start point");

  std::array<Cx, kMaxPeriod> ring;
  int ring_len = 0;
  int ring_pos = 0;

  Cx z = z0.value;
  if (trace) trace->push_back(z);

  // Newton confirmation of a near-return is throttled: on a slowly
  // converging (near-neutral) orbit the scanner fires every step, and
  // re-refining each time would dominate the budget.
  int last_attempt = -1000000;

  for (int step = 0; step < max_iter; ++step) {
    const NearestPole np = nearest_pole(z);
    if (np.distance < kPoleTol) {
      OrbitOutcome o;
      o.tag = OrbitTag::PrepoleHit;
      o.step = step;
      o.pole_index = np.index;
      return o;
    }

    Cx znext;
    if (std::fabs(z.imag()) > kImClamp) {
      // Far up/down the cylinder tan is +-i to below double epsilon; jump
      // straight to the asymptotic value rather than evaluating.
      znext = lam.lambda * (z.imag() > 0.0 ? Cx(0.0, 1.0) : Cx(0.0, -1.0));
    } else {
      znext = lam.lambda * tan_stable(z);
    }

    ring[ring_pos] = z;
    ring_pos = (ring_pos + 1) % kMaxPeriod;
    ring_len = std::min(ring_len + 1, kMaxPeriod);

    // Near-return scan: znext == z_{step+1}; compare against z_{step+1-p}.
    const double tol2 = kCycleTol * kCycleTol;
    for (int p = 1; p <= ring_len; ++p) {
      const Cx& back = ring[(ring_pos - p + 2 * kMaxPeriod) % kMaxPeriod];
      if (std::norm(znext - back) < tol2) {
        if (step - last_attempt >= 16) {
          last_attempt = step;
          try {
            Cycle c = refine_cycle_newton(lam, znext, p);
            if (std::abs(c.multiplier) < 1.0 - kClassTol) {
              OrbitOutcome o;
              o.tag = OrbitTag::Attracted;
              o.period = c.period;
              o.cycle_points = c.points;
              o.multiplier = c.multiplier;
              o.captured_step = step + 1;
              return o;
            }
          } catch (const Error&) {
            // Unconfirmed candidate (divergent Newton, pole collision,
            // repelling/neutral cycle): keep iterating.
          }
        }
        break;  // only the smallest matching period per step
      }
    }

    z = znext;
    if (trace) trace->push_back(z);
  }

  OrbitOutcome o;
  o.tag = OrbitTag::Undetermined;
  o.last_point = z;
  return o;
}

std::vector<Cx> orbit_derivative_wrt_lambda(const Parameter& lam, int steps) {
  if (steps < 0)
    throw std::invalid_argument("orbit_derivative_wrt_lambda: steps < 0");
  Cx z = lam.lambda * Cx(0.0, 1.0);  // z_0 = lambda*i
  Cx d(0.0, 1.0);                    // dz_0/dlambda = i
  std::vector<Cx> out;
  out.reserve(static_cast<size_t>(steps) + 1);
  out.push_back(d);
  for (int k = 0; k < steps; ++k) {
    const NearestPole np = nearest_pole(z);
    if (np.distance < kPoleTol)
      throw PoleProximityError(
          "orbit_derivative_wrt_lambda: orbit met pole s_" +
          std::to_string(np.index) + " at step " + std::to_string(k));
    const Cx w = tan_stable(z);
    d = w + lam.lambda * sec2_stable(z) * d;
    z = lam.lambda * w;
    out.push_back(d);
  }
  return out;
}

}  // namespace tandyn
