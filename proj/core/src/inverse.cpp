#include "tandyn/inverse.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "tandyn/dynamics.hpp"

namespace tandyn {

namespace {

void check_branch_input(const Parameter& lam, ComplexPoint z,
                        const char* who) {
  if (z.at_infinity)
    throw InfinityInputError(
        std::string(who) +
        ": preimage of infinity is a pole; use inverse_branch_at_infinity");
  const Cx v = lam.lambda * Cx(0.0, 1.0);
  if (std::abs(z.value - v) < kBranchTol ||
      std::abs(z.value + v) < kBranchTol)
    throw AsymptoticValueError(
        std::string(who) + ": input within " + std::to_string(kBranchTol) +
        " of an omitted value +-lambda*i");
}

Cx inverse_core(long long n, const Parameter& lam, Cx z, bool wrap) {
  const double a1 = lam.lambda.real();
  const double a2 = lam.lambda.imag();
  const double x = z.real();
  const double y = z.imag();

  const double s = 2.0 * (a1 * x + a2 * y);
  const double d = (a1 * a1 + a2 * a2) - (x * x + y * y);
  double theta = 0.5 * std::atan2(s, d);
  // atan2 closes the range on the right (theta = +pi/2 exactly when s is a
  // zero with positive sign and d < 0); the strips are closed on the left,
  // so fold the excluded right edge onto the included left edge.
  if (wrap && theta >= 0.5 * kPi) theta -= kPi;

  const double n1 = (a1 - y) * (a1 - y) + (a2 + x) * (a2 + x);
  const double n2 = (a1 + y) * (a1 + y) + (a2 - x) * (a2 - x);
  const double im = -0.25 * (std::log(n1) - std::log(n2));

  double re = theta + static_cast<double>(n) * kPi;
  if (wrap) {
    // n*pi rounds, so the sum can fall a last ulp outside the strip.
    const double lo = (static_cast<double>(n) - 0.5) * kPi;
    const double hi = (static_cast<double>(n) + 0.5) * kPi;
    if (re < lo) re = lo;
    if (re >= hi)
      re = std::nextafter(hi, -std::numeric_limits<double>::infinity());
  }
  return Cx(re, im);
}

}  // namespace

Cx inverse_branch(long long n, const Parameter& lam, ComplexPoint z) {
  check_branch_input(lam, z, "inverse_branch");
  return inverse_core(n, lam, z.value, /*wrap=*/true);
}

Cx inverse_branch_unwrapped(long long n, const Parameter& lam,
                            ComplexPoint z) {
  check_branch_input(lam, z, "inverse_branch_unwrapped");
  return inverse_core(n, lam, z.value, /*wrap=*/false);
}

ComplexPoint inverse_branch_at_infinity(long long n) {
  return ComplexPoint(Cx(pole(n), 0.0));
}

Cx compose_inverse(const Itinerary& itin, const Parameter& lam,
                   ComplexPoint z) {
  if (itin.empty())
    throw std::invalid_argument("compose_inverse: empty itinerary");
  Cx w = z.at_infinity ? Cx() : z.value;  // checked below before first use
  for (size_t j = 0; j < itin.size(); ++j) {
    const ComplexPoint in = (j == 0) ? z : ComplexPoint(w);
    try {
      w = inverse_branch(itin[j], lam, in);
    } catch (AsymptoticValueError& e) {
      e.depth = static_cast<int>(j);
      throw;
    }
  }
  return w;
}

Prepole prepole(const Itinerary& itin, const Parameter& lam) {
  if (itin.empty())
    return Prepole{ComplexPoint::infinity(), 0, {}};
  Cx w = inverse_branch_at_infinity(itin[0]).value;
  for (size_t j = 1; j < itin.size(); ++j) {
    try {
      w = inverse_branch(itin[j], lam, ComplexPoint(w));
    } catch (AsymptoticValueError& e) {
      e.depth = static_cast<int>(j);
      throw;
    }
  }
  return Prepole{ComplexPoint(w), static_cast<int>(itin.size()), itin};
}

PrepoleEnumeration enumerate_prepoles(int p, long long bound,
                                      const Parameter& lam) {
  if (p < 1) throw std::invalid_argument("enumerate_prepoles: p must be >= 1");
  if (bound < 0)
    throw std::invalid_argument("enumerate_prepoles: bound must be >= 0");

  PrepoleEnumeration out;
  Itinerary itin(static_cast<size_t>(p), -bound);
  for (;;) {
    try {
      out.prepoles.push_back(prepole(itin, lam));
    } catch (const AsymptoticValueError&) {
      out.skipped.push_back(itin);
    }
    // Lexicographic successor over [-bound, bound]^p.
    int j = p - 1;
    while (j >= 0 && itin[static_cast<size_t>(j)] == bound) {
      itin[static_cast<size_t>(j)] = -bound;
      --j;
    }
    if (j < 0) break;
    ++itin[static_cast<size_t>(j)];
  }
  return out;
}

}  // namespace tandyn
