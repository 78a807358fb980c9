#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"
#include "tandyn/dynamics.hpp"
#include "tandyn/inverse.hpp"

using namespace tandyn;
using testutil::close;

namespace {

// The strip bounds exactly as the clamp computes them.
double strip_lo(int n) { return (static_cast<double>(n) - 0.5) * kPi; }
double strip_hi(int n) { return (static_cast<double>(n) + 0.5) * kPi; }

bool in_strip(const Cx& w, int n) {
  return w.real() >= strip_lo(n) && w.real() < strip_hi(n);
}

}  // namespace

TEST_CASE("inverse_branch pointwise values") {
  // f(0) = 0, so the branch-n preimage of 0 is the strip centre n*pi.
  const Cx a = inverse_branch(3, Parameter(2.0), ComplexPoint(Cx(0.0, 0.0)));
  CHECK(a == Cx(3.0 * kPi, 0.0));
  const Cx b =
      inverse_branch(0, Parameter(Cx(1.0, 1.0)), ComplexPoint(Cx(0.0, 0.0)));
  CHECK(b == Cx(0.0, 0.0));

  // Closed form: tan(pi/2 + iy) = i*coth(y), so tan(w) = 2i at
  // w = pi/2 + i*atanh(1/2) = pi/2 + (i/2) log 3.  All preimages of 2i have
  // real part pi/2 mod pi, and the one in the half-open strip L_1 sits
  // exactly on its left edge.
  const Cx c = inverse_branch(1, Parameter(1.0), ComplexPoint(Cx(0.0, 2.0)));
  CHECK(close(c, Cx(0.5 * kPi, 0.5 * std::log(3.0)), 1e-14));
  CHECK(in_strip(c, 1));
  CHECK(std::abs(eval_f(Parameter(1.0), ComplexPoint(c)) - Cx(0.0, 2.0)) <
        1e-12);
}

TEST_CASE("inverse_branch guards") {
  int depth = -99;
  try {
    inverse_branch(0, Parameter(2.0), ComplexPoint(Cx(0.0, 2.0)));
    FAIL("expected AsymptoticValueError at z = lambda*i");
  } catch (const AsymptoticValueError& e) {
    depth = e.depth;
  }
  CHECK(depth == -1);
  CHECK_THROWS_AS(
      inverse_branch(0, Parameter(2.0), ComplexPoint(Cx(0.0, -2.0))),
      AsymptoticValueError);
  CHECK_THROWS_AS(inverse_branch(0, Parameter(1.0), ComplexPoint::infinity()),
                  InfinityInputError);
}

TEST_CASE("infinite inputs map to poles by branch index") {
  for (int n : {0, -1, 2}) {
    const ComplexPoint p = inverse_branch_at_infinity(n);
    CHECK(!p.at_infinity);
    CHECK(p.value == Cx(pole(n), 0.0));
  }
}

TEST_CASE("inverse_branch lands in its half-open strip and round-trips") {
  for (int i = 0; i < 2000; ++i) {
    const Parameter lam(Cx(testutil::uniform(-3.0, 3.0),
                           testutil::uniform(-3.0, 3.0) + 3.2));
    Cx z(testutil::uniform(-5.0, 5.0), testutil::uniform(-5.0, 5.0));
    if (std::abs(z - lam.lambda * Cx(0.0, 1.0)) < 1e-3 ||
        std::abs(z + lam.lambda * Cx(0.0, 1.0)) < 1e-3) {
      continue;
    }
    const int n = testutil::uniform_int(-4, 4);
    const Cx w = inverse_branch(n, lam, ComplexPoint(z));
    CHECK(in_strip(w, n));
    if (nearest_pole(ComplexPoint(w)).distance > 1e-6) {
      CHECK(close(eval_f(lam, ComplexPoint(w)), z, 1e-10));
    }
  }
}

TEST_CASE("compose_inverse applies the first branch first") {
  const Cx a = compose_inverse({0}, Parameter(2.0), ComplexPoint(Cx(0.0, 0.0)));
  CHECK(a == Cx(0.0, 0.0));

  // Pull 0 back through branch 1, then that result through branch 0.  The
  // final point lives in the last branch's strip, one forward step recovers
  // the intermediate point pi, and a second step returns to 0.
  const Cx w =
      compose_inverse({1, 0}, Parameter(2.0), ComplexPoint(Cx(0.0, 0.0)));
  CHECK(in_strip(w, 0));
  const Cx f1 = eval_f(Parameter(2.0), ComplexPoint(w));
  CHECK(in_strip(f1, 1));
  CHECK(std::abs(f1 - Cx(kPi, 0.0)) < 1e-12);
  const Cx f2 = eval_f(Parameter(2.0), ComplexPoint(f1));
  CHECK(std::abs(f2) < 1e-10);
}

TEST_CASE("compose_inverse round-trips random itineraries") {
  for (int i = 0; i < 300; ++i) {
    const Parameter lam(Cx(testutil::uniform(-2.0, 2.0),
                           testutil::uniform(0.4, 2.5)));
    const Cx z(testutil::uniform(-3.0, 3.0), testutil::uniform(-3.0, 3.0));
    if (std::abs(z - lam.lambda * Cx(0.0, 1.0)) < 0.05 ||
        std::abs(z + lam.lambda * Cx(0.0, 1.0)) < 0.05) {
      continue;
    }
    const int p = testutil::uniform_int(1, 3);
    Itinerary itin;
    for (int k = 0; k < p; ++k) itin.push_back(testutil::uniform_int(-3, 3));
    Cx w;
    try {
      w = compose_inverse(itin, lam, ComplexPoint(z));
    } catch (const AsymptoticValueError&) {
      continue;  // a pullback hit +-lambda*i; nothing to round-trip
    }
    CHECK(in_strip(w, itin.back()));
    Cx cur = w;
    bool ok = true;
    for (int k = 0; k < p; ++k) {
      if (nearest_pole(ComplexPoint(cur)).distance < 1e-7) {
        ok = false;
        break;
      }
      cur = eval_f(lam, ComplexPoint(cur));
    }
    if (ok) CHECK(close(cur, z, 1e-8));
  }
}

TEST_CASE("compose_inverse tags the depth of an asymptotic-value hit") {
  // lambda = 1.3i has asymptotic values -+1.3.  Choose z = f(1.3): its
  // branch-0 pullback is 1.3 itself, so the second pullback is asked to
  // invert an asymptotic value and must fail at itinerary index 1.
  const Parameter lam(Cx(0.0, 1.3));
  const Cx z = eval_f(lam, ComplexPoint(Cx(1.3, 0.0)));
  bool threw = false;
  try {
    compose_inverse({0, 5}, lam, ComplexPoint(z));
  } catch (const AsymptoticValueError& e) {
    threw = true;
    CHECK(e.depth == 1);
  }
  CHECK(threw);
  CHECK_THROWS_AS(
      compose_inverse({}, Parameter(2.0), ComplexPoint(Cx(1.0, 0.0))),
      std::invalid_argument);
}

TEST_CASE("prepole pointwise values and orders") {
  const Prepole p0 = prepole({0}, Parameter(2.0));
  CHECK(p0.point.value == Cx(pole(0), 0.0));
  CHECK(p0.order == 1);
  CHECK(prepole({-3}, Parameter(2.0)).point.value == Cx(pole(-3), 0.0));
  CHECK(prepole({7}, Parameter(Cx(1.0, 1.0))).point.value ==
        Cx(pole(7), 0.0));

  const Prepole p2 = prepole({0, 0}, Parameter(2.0));
  CHECK(p2.order == 2);
  CHECK(in_strip(p2.point.value, 0));
  const Cx once = eval_f(Parameter(2.0), p2.point);
  CHECK(std::abs(once - Cx(0.5 * kPi, 0.0)) < 1e-10);

  const Prepole inf = prepole({}, Parameter(2.0));
  CHECK(inf.order == 0);
  CHECK(inf.point.at_infinity);
}

TEST_CASE("prepole orbits reach a pole after order-1 steps") {
  for (int i = 0; i < 200; ++i) {
    const Parameter lam(Cx(testutil::uniform(-2.0, 2.0),
                           testutil::uniform(0.4, 2.2)));
    const int p = testutil::uniform_int(1, 4);
    Itinerary itin;
    for (int k = 0; k < p; ++k) itin.push_back(testutil::uniform_int(-2, 2));
    Prepole pp{};
    try {
      pp = prepole(itin, lam);
    } catch (const AsymptoticValueError&) {
      continue;
    }
    CHECK(pp.order == p);
    if (p >= 2) CHECK(in_strip(pp.point.value, itin.back()));
    Cx cur = pp.point.value;
    bool degenerate = false;
    for (int k = 0; k + 1 < p; ++k) {
      if (nearest_pole(ComplexPoint(cur)).distance < 1e-6) {
        degenerate = true;
        break;
      }
      cur = eval_f(lam, ComplexPoint(cur));
    }
    if (!degenerate) {
      CHECK(nearest_pole(ComplexPoint(cur)).distance < 1e-8);
      CHECK(nearest_pole(ComplexPoint(cur)).index == itin.front());
    }
  }
}

TEST_CASE("prepole reports the itinerary index of a degenerate pullback") {
  // lambda = (pi/2)i: the pole -pi/2 equals the asymptotic value lambda*i,
  // so pulling the pole s_{-1} back through any branch fails at index 1.
  bool threw = false;
  try {
    prepole({-1, 0}, Parameter(Cx(0.0, 0.5 * kPi)));
  } catch (const AsymptoticValueError& e) {
    threw = true;
    CHECK(e.depth == 1);
  }
  CHECK(threw);
}

TEST_CASE("prepole negation symmetry") {
  // -P(n1, n2, ..., np) = P(-n1 - 1, -n2, ..., -np)
  const std::vector<Itinerary> itins = {
      {0}, {2}, {-3}, {0, 0}, {2, -1}, {-3, 4}, {1, 0, -2}, {4, -2, 3}};
  for (const Cx lamv : {Cx(2.0, 0.0), Cx(1.1, 0.7)}) {
    const Parameter lam(lamv);
    for (const Itinerary& itin : itins) {
      Itinerary mirrored = itin;
      mirrored[0] = -mirrored[0] - 1;
      for (size_t k = 1; k < mirrored.size(); ++k) mirrored[k] = -mirrored[k];
      const Cx a = prepole(itin, lam).point.value;
      const Cx b = prepole(mirrored, lam).point.value;
      CHECK(std::abs(a + b) < 1e-10);
    }
  }
}

TEST_CASE("enumerate_prepoles covers rectangles of itineraries") {
  const PrepoleEnumeration e1 = enumerate_prepoles(1, 2, Parameter(2.0));
  REQUIRE(e1.prepoles.size() == 5);
  CHECK(e1.skipped.empty());
  for (int n = -2; n <= 2; ++n) {
    CHECK(e1.prepoles[static_cast<size_t>(n + 2)].point.value ==
          Cx(pole(n), 0.0));
  }

  const PrepoleEnumeration e2 = enumerate_prepoles(2, 1, Parameter(2.0));
  REQUIRE(e2.prepoles.size() == 9);
  CHECK(e2.skipped.empty());
  // Real parameter: every order-2 prepole of 2 tan is real.
  Itinerary prev;
  for (const Prepole& p : e2.prepoles) {
    CHECK(p.order == 2);
    CHECK(p.point.value.imag() == 0.0);
    if (!prev.empty()) CHECK(prev < p.itinerary);  // lexicographic order
    prev = p.itinerary;
  }

  const PrepoleEnumeration e3 =
      enumerate_prepoles(2, 10, Parameter(Cx(0.0, 2.0)));
  CHECK(e3.prepoles.size() == 441);
  for (size_t i = 0; i < e3.prepoles.size(); ++i) {
    for (size_t j = i + 1; j < e3.prepoles.size(); ++j) {
      CHECK(std::abs(e3.prepoles[i].point.value - e3.prepoles[j].point.value) >
            1e-10);
    }
  }
}

TEST_CASE("enumerate_prepoles records degenerate itineraries as skipped") {
  const PrepoleEnumeration e =
      enumerate_prepoles(2, 2, Parameter(Cx(0.0, 0.5 * kPi)));
  CHECK(e.prepoles.size() == 15);
  CHECK(e.skipped.size() == 10);
  for (const Itinerary& s : e.skipped) {
    REQUIRE(s.size() == 2);
    // The poles s_0 and s_{-1} coincide with -+lambda*i here, so every
    // itinerary starting from either pole degenerates.
    CHECK((s[0] == 0 || s[0] == -1));
  }
}

TEST_CASE("prepoles accumulate one-sidedly as the pole index grows") {
  // As the pole entry runs to +infinity the pullback chain converges to the
  // prepole of the tail itinerary; running to -infinity it converges to the
  // tail with its first branch entry shifted down by one (the preimage of
  // -infinity is the other edge of the strip).
  const Parameter lam(Cx(1.0, 0.5));
  const Cx lim_pos2 = prepole({0}, lam).point.value;
  const Cx lim_neg2 = prepole({-1}, lam).point.value;
  const Cx lim_pos3 = prepole({0, 0}, lam).point.value;
  const Cx lim_neg3 = prepole({-1, 0}, lam).point.value;
  CHECK(std::abs(lim_neg3 + prepole({0, 0}, lam).point.value) < 1e-10);

  // The pullback of the distant pole s_n sits ~|lambda|/|s_n| from the limit
  // (atan tail), so convergence is O(1/n): check strict monotone decrease
  // plus a conservative fourfold drop over n = 5..40 (1/n predicts 8x),
  // not machine-epsilon agreement.
  double first_pos2 = 0, first_neg2 = 0, first_pos3 = 0, first_neg3 = 0;
  double prev_pos2 = 1e18, prev_neg2 = 1e18, prev_pos3 = 1e18,
         prev_neg3 = 1e18;
  for (int n = 5; n <= 40; n += 5) {
    const double dp2 = std::abs(prepole({n, 0}, lam).point.value - lim_pos2);
    const double dn2 = std::abs(prepole({-n, 0}, lam).point.value - lim_neg2);
    const double dp3 =
        std::abs(prepole({n, 0, 0}, lam).point.value - lim_pos3);
    const double dn3 =
        std::abs(prepole({-n, 0, 0}, lam).point.value - lim_neg3);
    CHECK(dp2 < prev_pos2);
    CHECK(dn2 < prev_neg2);
    CHECK(dp3 < prev_pos3);
    CHECK(dn3 < prev_neg3);
    if (n == 5) {
      first_pos2 = dp2;
      first_neg2 = dn2;
      first_pos3 = dp3;
      first_neg3 = dn3;
    }
    prev_pos2 = dp2;
    prev_neg2 = dn2;
    prev_pos3 = dp3;
    prev_neg3 = dn3;
  }
  CHECK(prev_pos2 < 0.02);
  CHECK(prev_neg2 < 0.02);
  CHECK(prev_pos3 < 0.02);
  CHECK(prev_neg3 < 0.02);
  CHECK(prev_pos2 < first_pos2 / 4);
  CHECK(prev_neg2 < first_neg2 / 4);
  CHECK(prev_pos3 < first_pos3 / 4);
  CHECK(prev_neg3 < first_neg3 / 4);
}
