// tandyn — command-line surface for the tangent-family dynamics library.
//
// Subcommands: classify, orbit, prepoles, cycle, virtual-center, ray,
// render-param, render-dynamic, selftest.  Output is one record per line,
// fields tab-separated, complex numbers as "a+bi" with 17 significant
// digits.  Exit codes: 0 success, 2 usage error, 1 computational failure.
//
// A config file (--config file, key=value lines, keys = long flag names)
// supplies defaults; explicit flags win over config values, config values
// win over built-in defaults.  Keys that don't name an option of the chosen
// subcommand are ignored, so one file can serve several subcommands.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tandyn/cycles.hpp"
#include "tandyn/dynamics.hpp"
#include "tandyn/format.hpp"
#include "tandyn/inverse.hpp"
#include "tandyn/parameter_plane.hpp"
#include "tandyn/render.hpp"
#include "tandyn/types.hpp"

namespace {

using tandyn::Cx;

// A bad flag *value* (unparsable complex, malformed config line, ...):
// reported like CLI11's own usage errors, exit 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Cx need_complex(const std::string& text, const char* flag) {
  const std::optional<Cx> v = tandyn::parse_complex(text);
  if (!v)
    throw UsageError(std::string("invalid complex value for ") + flag +
                     ": '" + text + "' (expected a+bi)");
  return *v;
}

tandyn::Itinerary need_itinerary(const std::string& text, const char* flag) {
  const std::optional<tandyn::Itinerary> v = tandyn::parse_itinerary(text);
  if (!v || v->empty())
    throw UsageError(std::string("invalid itinerary for ") + flag + ": '" +
                     text + "' (expected n1,n2,...)");
  return *v;
}

void need_pixels(const std::string& text, int* cols, int* rows) {
  int c = 0, r = 0;
  char x = 0;
  std::istringstream in(text);
  if ((in >> c) && in.get() == std::istringstream::traits_type::eof()) {
    r = c;
  } else {
    in.clear();
    in.str(text);
    in.seekg(0);
    if (!(in >> c >> x >> r) || x != 'x' || !in.eof()) c = 0;
  }
  if (c < 1 || r < 1)
    throw UsageError("invalid value for --pixels: '" + text +
                     "' (expected N or NxM)");
  *cols = c;
  *rows = r;
}

const char* stability_name(tandyn::Stability s) {
  switch (s) {
    case tandyn::Stability::Attracting:
      return "attracting";
    case tandyn::Stability::Repelling:
      return "repelling";
    default:
      return "neutral";
  }
}

// ---------------------------------------------------------------------------
// Config file: key=value lines, '#' comments, blank lines ignored.
// ---------------------------------------------------------------------------

std::string trim(const std::string& s) {
  const size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::map<std::string, std::string> load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot open config file '" + path + "'");
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw UsageError("config file '" + path + "' line " +
                       std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(t.substr(0, eq));
    if (key.empty())
      throw UsageError("config file '" + path + "' line " +
                       std::to_string(lineno) + ": empty key");
    out[key] = trim(t.substr(eq + 1));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Subcommand bodies. Each returns the process exit code.
// ---------------------------------------------------------------------------

struct ClassifyArgs {
  std::string lambda;
  int budget = 2000;
};

int run_classify(const ClassifyArgs& a) {
  const tandyn::Parameter lam(need_complex(a.lambda, "--lambda"));
  const tandyn::Classification c = tandyn::classify_parameter(lam, a.budget);
  if (c.determined)
    std::cout << c.sample.period << '\t'
              << tandyn::component_kind_name(c.sample.kind) << '\t'
              << tandyn::format_complex(c.sample.multiplier) << '\n';
  else
    std::cout << "0\tUndetermined\t0+0i\n";
  return 0;
}

struct OrbitArgs {
  std::string lambda;
  std::string z0;
  int steps = 100;
};

int run_orbit(const OrbitArgs& a) {
  const tandyn::Parameter lam(need_complex(a.lambda, "--lambda"));
  const Cx z0 = need_complex(a.z0, "--z0");
  std::vector<Cx> trace;
  const tandyn::OrbitOutcome o =
      tandyn::iterate_orbit(lam, tandyn::ComplexPoint(z0), a.steps, &trace);
  for (size_t k = 0; k < trace.size(); ++k)
    std::cout << k << '\t' << tandyn::format_complex(trace[k]) << '\n';
  switch (o.tag) {
    case tandyn::OrbitTag::Attracted:
      std::cout << "outcome\tAttracted\t" << o.period << '\t'
                << tandyn::format_complex(o.multiplier) << '\n';
      break;
    case tandyn::OrbitTag::PrepoleHit:
      std::cout << "outcome\tPrepoleHit\t" << o.step << '\t' << o.pole_index
                << '\n';
      break;
    default:
      std::cout << "outcome\tUndetermined\t"
                << tandyn::format_complex(o.last_point) << '\n';
      break;
  }
  return 0;
}

struct PrepolesArgs {
  std::string lambda;
  int order = 1;
  long long bound = 0;
};

int run_prepoles(const PrepolesArgs& a) {
  const tandyn::Parameter lam(need_complex(a.lambda, "--lambda"));
  const tandyn::PrepoleEnumeration e =
      tandyn::enumerate_prepoles(a.order, a.bound, lam);
  for (const tandyn::Prepole& p : e.prepoles)
    std::cout << tandyn::format_itinerary(p.itinerary) << '\t'
              << tandyn::format_complex(p.point.value) << '\n';
  for (const tandyn::Itinerary& s : e.skipped)
    std::cout << "skipped\t" << tandyn::format_itinerary(s) << '\n';
  return 0;
}

struct CycleArgs {
  std::string lambda;
  std::string guess;
  int period = 1;
};

int run_cycle(const CycleArgs& a) {
  const tandyn::Parameter lam(need_complex(a.lambda, "--lambda"));
  const Cx guess = need_complex(a.guess, "--guess");
  const tandyn::Cycle c = tandyn::refine_cycle_newton(
      lam, tandyn::ComplexPoint(guess), a.period);
  std::string pts;
  for (size_t i = 0; i < c.points.size(); ++i) {
    if (i) pts += ';';
    pts += tandyn::format_complex(c.points[i]);
  }
  std::cout << c.period << '\t' << tandyn::format_complex(c.multiplier)
            << '\t' << stability_name(c.stability) << '\t'
            << (c.symmetric ? "true" : "false") << '\t' << pts << '\n';
  return 0;
}

struct VirtualCenterArgs {
  int period = 2;
  std::string itinerary;
  std::string seed;
};

int run_virtual_center(const VirtualCenterArgs& a) {
  const tandyn::Itinerary itin = need_itinerary(a.itinerary, "--itinerary");
  std::optional<Cx> seed;
  if (!a.seed.empty()) seed = need_complex(a.seed, "--seed");
  const tandyn::VirtualCenter vc =
      tandyn::find_virtual_center(a.period, itin, seed);
  std::cout << tandyn::format_complex(vc.lambda_star) << '\t'
            << tandyn::format_double(vc.residual) << '\n';
  return 0;
}

struct RayArgs {
  std::string seed;
  double alpha = 0.0;
  double r_end = 0.5;
};

int run_ray(const RayArgs& a) {
  const tandyn::Parameter seed(need_complex(a.seed, "--seed"));
  const std::vector<tandyn::RayPoint> pts =
      tandyn::trace_internal_ray(seed, a.alpha, a.r_end);
  for (const tandyn::RayPoint& p : pts)
    std::cout << tandyn::format_double(p.r) << '\t'
              << tandyn::format_double(p.alpha) << '\t'
              << tandyn::format_complex(p.lambda) << '\t'
              << tandyn::format_complex(p.multiplier) << '\n';
  return 0;
}

struct RenderArgs {
  std::string lambda;  // render-dynamic only
  std::string center = "0+0i";
  double width = 0.0;
  std::string pixels = "256";
  int budget = 2000;
  std::string palette = "default";
  std::string out;
};

int run_render(const RenderArgs& a, bool dynamic) {
  tandyn::Viewport vp;
  vp.center = need_complex(a.center, "--center");
  vp.width = a.width;
  need_pixels(a.pixels, &vp.cols, &vp.rows);
  tandyn::RasterImage img;
  if (dynamic) {
    const tandyn::Parameter lam(need_complex(a.lambda, "--lambda"));
    img = tandyn::render_dynamic_plane(lam, vp, a.budget, a.palette);
  } else {
    img = tandyn::render_parameter_plane(vp, a.budget, a.palette);
  }
  tandyn::write_ppm_with_meta(img, a.out);
  std::cout << "wrote\t" << a.out << '\t' << vp.cols << 'x' << vp.rows
            << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// selftest: a compact run of every library invariant. Prints one "ok <name>"
// line per check; any violation prints "FAIL <name>: <detail>" and the exit
// code becomes 1.
// ---------------------------------------------------------------------------

struct EnvGuard {
  std::string name;
  std::optional<std::string> old;
  EnvGuard(const char* n, const char* value) : name(n) {
    if (const char* o = std::getenv(n)) old = o;
    ::setenv(n, value, 1);
  }
  ~EnvGuard() {
    if (old)
      ::setenv(name.c_str(), old->c_str(), 1);
    else
      ::unsetenv(name.c_str());
  }
};

int run_selftest() {
  using namespace tandyn;
  int failures = 0;
  auto check = [&failures](bool ok, const std::string& name,
                           const std::string& detail = "") {
    if (ok) {
      std::cout << "ok " << name << '\n';
    } else {
      std::cout << "FAIL " << name << (detail.empty() ? "" : ": " + detail)
                << '\n';
      ++failures;
    }
  };

  std::mt19937 rng(20250815u);
  auto uni = [&rng](double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(rng);
  };

  // --- dynamics ---
  {
    bool odd = true, sign = true;
    for (int s = 0; s < 300 && (odd || sign); ++s) {
      const Cx l(uni(-3, 3), uni(-3, 3));
      if (std::abs(l) < 0.1) continue;
      const Cx z(uni(-8, 8), uni(-8, 8));
      try {
        const Parameter lam(l), neg(-l);
        const Cx fz = eval_f(lam, ComplexPoint(z));
        odd = odd && eval_f(lam, ComplexPoint(-z)) == -fz;
        sign = sign && eval_f(neg, ComplexPoint(z)) == -fz;
      } catch (const Error&) {
        // pole-adjacent draw; irrelevant here
      }
    }
    check(odd, "dynamics.oddness");
    check(sign, "dynamics.lambda-sign-flip");
  }
  {
    const Parameter lam(Cx(2.0, 1.0));
    bool ok = true;
    for (double y : {21.0, 23.0, 26.0, 30.0}) {
      const double cap = 5.0 * std::abs(lam.lambda) * std::exp(-2.0 * y);
      ok = ok && std::abs(eval_f(lam, ComplexPoint(0.3, y)) -
                          lam.lambda * Cx(0, 1)) <= cap;
      ok = ok && std::abs(eval_f(lam, ComplexPoint(0.3, -y)) +
                          lam.lambda * Cx(0, 1)) <= cap;
    }
    check(ok, "dynamics.asymptotic-value-limit");
  }
  {
    const Parameter lam(Cx(1.3, -0.4));
    const double h = 1e-6;
    bool ok = true;
    for (double x : {-1.2, -0.4, 0.3, 1.1})
      for (double y : {-0.8, 0.1, 0.9}) {
        const Cx z(x, y);
        const Cx fd = (eval_f(lam, ComplexPoint(z + h)) -
                       eval_f(lam, ComplexPoint(z - h))) /
                      (2.0 * h);
        const Cx ex = eval_f_prime(lam, ComplexPoint(z));
        ok = ok && std::abs(fd - ex) <= 1e-6 * std::abs(ex);
      }
    check(ok, "dynamics.derivative-finite-difference");
  }
  {
    const Cx l(0.5, 0.2);
    const int steps = 6;
    const std::vector<Cx> d =
        orbit_derivative_wrt_lambda(Parameter(l), steps);
    auto orbit_k = [](Cx lv, int k) {
      const Parameter p(lv);
      Cx z = lv * Cx(0, 1);
      for (int i = 0; i < k; ++i) z = eval_f(p, ComplexPoint(z));
      return z;
    };
    const double h = 1e-6;
    bool ok = d.size() == static_cast<size_t>(steps) + 1;
    for (int k = 1; ok && k <= steps; ++k) {
      const Cx fd = (orbit_k(l + h, k) - orbit_k(l - h, k)) / (2.0 * h);
      ok = std::abs(fd - d[k]) <= 1e-5 * std::max(1.0, std::abs(d[k]));
    }
    check(ok, "dynamics.orbit-derivative-finite-difference");
  }

  // --- inverse branches / prepoles ---
  {
    bool round = true, strip = true;
    std::string detail;
    for (int s = 0; s < 1000; ++s) {
      const long long n = static_cast<long long>(std::floor(uni(-20, 21)));
      Cx l(uni(-3, 3), uni(-3, 3));
      if (std::abs(l) < 0.1) {
        --s;
        continue;
      }
      const Parameter lam(l);
      Cx z(uni(-10, 10), uni(-10, 10));
      if (std::abs(z - l * Cx(0, 1)) < 1e-3 ||
          std::abs(z + l * Cx(0, 1)) < 1e-3) {
        --s;
        continue;
      }
      const Cx w = inverse_branch(n, lam, ComplexPoint(z));
      strip = strip && w.real() >= (n - 0.5) * kPi &&
              w.real() < (n + 0.5) * kPi;
      const Cx back = eval_f(lam, ComplexPoint(w));
      if (!(std::abs(back - z) <= 1e-10 * std::max(1.0, std::abs(z)))) {
        round = false;
        detail = "n=" + std::to_string(n) + " lambda=" + format_complex(l) +
                 " z=" + format_complex(z);
      }
    }
    check(round, "inverse.roundtrip", detail);
    check(strip, "inverse.strip-membership");
  }
  {
    const Parameter lam(Cx(2.0, 0.0));
    bool ok = true;
    for (int dir : {1, -1}) {
      double prev = 0.0;
      for (long long n = 3; n <= 20; ++n) {
        const double m =
            std::abs(prepole({0, dir * n}, lam).point.value);
        if (n > 3) ok = ok && m > prev;
        prev = m;
      }
    }
    check(ok, "inverse.accumulation-tail-varying");
  }
  {
    const Parameter lam(Cx(2.0, 0.0));
    const Cx limit(pole(1), 0.0);  // order-1 prepole with itinerary (1)
    bool ok = true;
    double prev = 1e300;
    for (long long n = 5; n <= 25; ++n) {
      const double d = std::abs(prepole({n, 1}, lam).point.value - limit);
      ok = ok && d < prev;
      prev = d;
    }
    check(ok, "inverse.accumulation-head-varying");
  }
  {
    bool ok = true;
    for (const Cx l : {Cx(2.0, 0.0), Cx(1.1, 0.7)}) {
      const Parameter lam(l);
      const std::vector<Itinerary> itins = {
          {0, 0}, {2, -1}, {-3, 4}, {1, 0, -2}, {4, -2, 3}};
      for (const Itinerary& it : itins) {
        Itinerary neg = it;
        neg[0] = -neg[0] - 1;  // poles negate to -n-1 ...
        for (size_t j = 1; j < neg.size(); ++j)
          neg[j] = -neg[j];  // ... branch strips to -n
        ok = ok && std::abs(prepole(neg, lam).point.value +
                            prepole(it, lam).point.value) < 1e-10;
      }
    }
    check(ok, "inverse.negation-symmetry");
  }

  // --- cycles ---
  {
    bool ok = true;
    std::string detail;
    for (const Cx l : {Cx(2.0, 0.0), Cx(3.0, 0.2)}) {
      const Parameter lam(l);
      const Classification c = classify_parameter(lam);
      if (!c.determined || c.sample.kind != ComponentKind::TwoCycles) {
        ok = false;
        detail = "classification at " + format_complex(l);
        break;
      }
      const Cycle partner = refine_cycle_newton(
          lam, ComplexPoint(-c.sample.cycle_points[0]),
          static_cast<int>(c.sample.cycle_points.size()));
      ok = ok &&
           std::abs(partner.multiplier - c.sample.multiplier) < 1e-8;
    }
    check(ok, "cycles.negated-partner-multiplier", detail);
  }
  {
    // Odd-period cycle of f_lambda doubles for f_{-lambda}: the lambda=2
    // fixed point i*t becomes half of the symmetric 2-cycle of lambda=-2,
    // whose multiplier is the square of the fixed point's.
    const Classification plus = classify_parameter(Parameter(2.0));
    bool ok = plus.determined && plus.sample.period == 1;
    if (ok) {
      const Cx z = plus.sample.cycle_points[0];
      const Cycle doubled =
          refine_cycle_newton(Parameter(-2.0), ComplexPoint(z), 2);
      ok = doubled.period == 2 && doubled.symmetric &&
           std::abs(doubled.multiplier -
                    plus.sample.multiplier * plus.sample.multiplier) < 1e-8;
    }
    check(ok, "cycles.lambda-negation-doubling");
  }
  {
    bool ok = true;
    for (const Cx l : {Cx(2.0, 0.0), Cx(-2.0, 0.0), Cx(0.1, 1.2)}) {
      const Parameter lam(l);
      const Classification c = classify_parameter(lam);
      if (!c.determined) {
        ok = false;
        break;
      }
      const Cx m1 = multiplier(lam, c.sample.cycle_points);
      const Cx m2 = multiplier_via_sine(lam, c.sample.cycle_points);
      ok = ok && std::abs(m1 - m2) <= 1e-8 * std::abs(m1);
    }
    check(ok, "cycles.multiplier-cross-check");
  }
  {
    const Parameter lam(Cx(2.0, 0.0));
    const std::vector<Cycle> cs =
        repelling_cycles_near_prepole(lam, {0}, 6, 12);
    bool ok = cs.size() == 7;
    double dist_prev = 1e300, mul_prev = 0.0;
    for (const Cycle& c : cs) {
      if (!ok) break;
      Cx z = c.points[0];
      for (int i = 0; i < 2; ++i) z = eval_f(lam, ComplexPoint(z));
      ok = std::abs(z - c.points[0]) < 1e-9;
      const double d = std::abs(c.points[0] - Cx(pole(0), 0.0));
      const double m = std::abs(c.multiplier);
      ok = ok && d < dist_prev && m > mul_prev && m > 1.0;
      dist_prev = d;
      mul_prev = m;
    }
    check(ok, "cycles.repelling-accumulation-monotone");
  }

  // --- parameter plane ---
  {
    bool ok = true;
    for (const Cx l : {Cx(2.0, 0.3), Cx(0.1, 1.2), Cx(-1.5, 0.8)}) {
      const Classification a = classify_parameter(Parameter(l));
      const Classification b = classify_parameter(Parameter(std::conj(l)));
      ok = ok && a.determined && b.determined &&
           a.sample.period == b.sample.period &&
           a.sample.kind == b.sample.kind;
    }
    check(ok, "param.conjugation-symmetry");
  }
  {
    const Classification plus = classify_parameter(Parameter(2.0));
    const Classification minus = classify_parameter(Parameter(-2.0));
    bool ok = plus.determined && minus.determined &&
              plus.sample.kind == ComponentKind::TwoCycles &&
              plus.sample.period == 1 &&
              minus.sample.kind == ComponentKind::SingleDoubled &&
              minus.sample.period == 1 &&
              minus.sample.cycle_points.size() == 2;
    if (ok) {
      const Cx z = plus.sample.cycle_points[0];
      for (const Cx& w : minus.sample.cycle_points)
        ok = ok && std::min(std::abs(w - z), std::abs(w + z)) < 1e-6;
    }
    check(ok, "param.lambda-negation-doubling");
  }
  {
    bool ok = true;
    std::string detail;
    try {
      for (const VirtualCenter& vc :
           {find_virtual_center(2, {0}), find_virtual_center(3, {5, 0})}) {
        ok = ok && vc.residual < 1e-8;
        // -lambda* is a center too: its asymptotic-value orbit lands on a
        // pole after the same number of steps.
        const Parameter neg(-vc.lambda_star);
        Cx w = neg.lambda * Cx(0, 1);
        for (int k = 0; k + 2 < vc.order + 1; ++k)
          w = eval_f(neg, ComplexPoint(w));
        ok = ok && nearest_pole(ComplexPoint(w)).distance < 1e-8;
      }
    } catch (const Error& e) {
      ok = false;
      detail = e.what();
    }
    check(ok, "param.virtual-center-residual-and-negation", detail);
  }
  {
    bool ok = true;
    std::string detail;
    try {
      // Unit disk: the eigenvalue map is the identity, so R(alpha) is the
      // radial segment itself.
      for (const RayPoint& p :
           trace_internal_ray(Parameter(Cx(0.4, 0.0)), 0.125, 0.15)) {
        const Cx target = std::polar(p.r, 2.0 * kPi * p.alpha);
        ok = ok && std::abs(p.lambda - target) < 1e-8 &&
             std::abs(eigenvalue(Parameter(p.lambda)) - target) < 1e-6;
      }
      // A short stretch of R(0) from lambda = 2.
      for (const RayPoint& p :
           trace_internal_ray(Parameter(Cx(2.0, 0.0)), 0.0, 0.1))
        ok = ok && std::abs(std::abs(p.multiplier) - p.r) < 1e-6;
    } catch (const Error& e) {
      ok = false;
      detail = e.what();
    }
    check(ok, "param.ray-eigenvalue-radius", detail);
  }
  {
    const Cx star(0.0, pole(0));
    bool two = false, doubled = false;
    for (int k = 0; k < 8; ++k) {
      const double th = 2.0 * kPi * k / 8;
      const Classification c = classify_parameter(
          Parameter(star + std::polar(0.05, th)), 2500);
      if (c.determined && c.sample.period == 2) {
        if (c.sample.kind == ComponentKind::TwoCycles) two = true;
        if (c.sample.kind == ComponentKind::SingleDoubled) doubled = true;
      }
    }
    check(two && doubled, "param.virtual-center-circle-kinds");
  }

  // --- render ---
  {
    Viewport vp;
    vp.center = Cx(0.0, 0.0);
    vp.width = 9.0;
    vp.cols = vp.rows = 24;
    std::string a, b;
    {
      EnvGuard env("TANDYN_THREADS", "1");
      a = encode_ppm(render_parameter_plane(vp, 400));
    }
    {
      EnvGuard env("TANDYN_THREADS", "3");
      b = encode_ppm(render_parameter_plane(vp, 400));
    }
    check(a == b, "render.thread-count-determinism");
  }
  {
    Viewport up, down;
    up.center = Cx(1.0, 0.8);
    down.center = Cx(1.0, -0.8);
    up.width = down.width = 2.5;
    up.cols = up.rows = down.cols = down.rows = 16;
    const RasterImage iu = render_parameter_plane(up, 600);
    const RasterImage id = render_parameter_plane(down, 600);
    bool ok = true;
    for (int i = 0; ok && i < 16; ++i)
      for (int j = 0; ok && j < 16; ++j)
        for (int c = 0; c < 3; ++c)
          ok = ok && iu.pixels[3 * (16 * i + j) + c] ==
                         id.pixels[3 * (16 * (15 - i) + j) + c];
    check(ok, "render.conjugation-mirror");
  }
  {
    Viewport vp;
    vp.center = Cx(0.0, 0.0);
    vp.width = 6.0;
    vp.cols = vp.rows = 24;
    const RasterImage img =
        render_dynamic_plane(Parameter(Cx(2.0, 0.0)), vp, 500);
    bool ok = true;
    for (int i = 0; ok && i < 24; ++i)
      for (int j = 0; ok && j < 24; ++j)
        for (int c = 0; c < 3; ++c)
          ok = ok &&
               img.pixels[3 * (24 * i + j) + c] ==
                   img.pixels[3 * (24 * (23 - i) + (23 - j)) + c];
    check(ok, "render.rotation-symmetry");
  }

  // --- record formats ---
  {
    bool ok = true;
    for (int s = 0; s < 200; ++s) {
      const double v = uni(-1e6, 1e6) * std::pow(10.0, uni(-12, 12));
      ok = ok && parse_double(format_double(v)) == v;
      const Cx z(v, uni(-1e3, 1e3));
      ok = ok && parse_complex(format_complex(z)) == z;
    }
    const Itinerary itin = {0, -3, 17, -200, 4};
    ok = ok && parse_itinerary(format_itinerary(itin)) == itin;
    check(ok, "format.lossless-roundtrip");
  }

  std::cout << (failures == 0 ? "selftest passed" : "selftest FAILED")
            << " (" << failures << " failing checks)\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);

  CLI::App app{"tandyn — dynamics of the tangent family f(z) = lambda*tan z"};
  app.require_subcommand(1);
  std::string config_dummy;
  app.add_option("--config", config_dummy,
                 "key=value config file supplying flag defaults");

  std::map<std::string, CLI::App*> subs;
  auto add_sub = [&](const char* name, const char* help) {
    CLI::App* s = app.add_subcommand(name, help);
    s->add_option("--config", config_dummy,
                  "key=value config file supplying flag defaults");
    subs[name] = s;
    return s;
  };

  ClassifyArgs cls;
  {
    CLI::App* s = add_sub("classify",
                          "hyperbolic component of a parameter: period, "
                          "kind, multiplier");
    s->add_option("--lambda", cls.lambda, "parameter (a+bi)")->required();
    s->add_option("--budget", cls.budget, "iteration budget")
        ->check(CLI::PositiveNumber);
  }

  OrbitArgs orb;
  {
    CLI::App* s = add_sub("orbit", "forward orbit trace of a point");
    s->add_option("--lambda", orb.lambda, "parameter (a+bi)")->required();
    s->add_option("--z0", orb.z0, "starting point (a+bi)")->required();
    s->add_option("--steps", orb.steps, "maximum steps")
        ->check(CLI::NonNegativeNumber);
  }

  PrepolesArgs pre;
  {
    CLI::App* s = add_sub("prepoles",
                          "enumerate prepoles of a given order by itinerary");
    s->add_option("--lambda", pre.lambda, "parameter (a+bi)")->required();
    s->add_option("--order", pre.order, "prepole order p >= 1")
        ->required()
        ->check(CLI::PositiveNumber);
    s->add_option("--bound", pre.bound, "itinerary entry bound B >= 0")
        ->required()
        ->check(CLI::NonNegativeNumber);
  }

  CycleArgs cyc;
  {
    CLI::App* s = add_sub("cycle", "Newton-refine a periodic cycle");
    s->add_option("--lambda", cyc.lambda, "parameter (a+bi)")->required();
    s->add_option("--guess", cyc.guess, "starting guess (a+bi)")->required();
    s->add_option("--period", cyc.period, "target period")
        ->required()
        ->check(CLI::PositiveNumber);
  }

  VirtualCenterArgs vc;
  {
    CLI::App* s = add_sub("virtual-center",
                          "boundary point where a component pair meets");
    s->add_option("--period", vc.period, "component period p >= 2")
        ->required();
    s->add_option("--itinerary", vc.itinerary,
                  "pole-then-branch indices n1,n2,... (length p-1)")
        ->required();
    s->add_option("--seed", vc.seed, "optional starting guess (a+bi)");
  }

  RayArgs ray;
  {
    CLI::App* s = add_sub("ray", "trace an internal ray R(alpha)");
    s->add_option("--seed", ray.seed, "hyperbolic parameter to start from")
        ->required();
    s->add_option("--alpha", ray.alpha, "angle as a fraction of a turn")
        ->required();
    s->add_option("--r-end", ray.r_end,
                  "multiplier radius to continue to, in (0,1)")
        ->required();
  }

  RenderArgs rp, rd;
  auto add_render_options = [](CLI::App* s, RenderArgs& a) {
    s->add_option("--center", a.center, "viewport center (a+bi)");
    s->add_option("--width", a.width, "viewport width (real units)")
        ->required()
        ->check(CLI::PositiveNumber);
    s->add_option("--pixels", a.pixels, "image size: N or NxM");
    s->add_option("--budget", a.budget, "iteration budget per pixel")
        ->check(CLI::PositiveNumber);
    s->add_option("--palette", a.palette, "palette name");
    s->add_option("--out", a.out, "output PPM path (writes .meta beside)")
        ->required();
  };
  add_render_options(
      add_sub("render-param", "render a parameter-plane image"), rp);
  {
    CLI::App* s =
        add_sub("render-dynamic", "render a dynamic-plane image");
    s->add_option("--lambda", rd.lambda, "parameter (a+bi)")->required();
    add_render_options(s, rd);
  }

  add_sub("selftest", "run the embedded invariant suite");

  // Config handling: pre-scan for --config, then inject file values as
  // flags (ahead of the user's own, which therefore win) for every key the
  // chosen subcommand understands.
  try {
    std::string config_path;
    for (size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--config" && i + 1 < args.size())
        config_path = args[i + 1];
      else if (args[i].rfind("--config=", 0) == 0)
        config_path = args[i].substr(9);
    }

    std::vector<std::string> final_args = args;
    if (!config_path.empty() && !args.empty() && args[0][0] != '-') {
      const auto it = subs.find(args[0]);
      if (it != subs.end()) {
        const std::map<std::string, std::string> cfg =
            load_config(config_path);
        auto user_has = [&args](const std::string& key) {
          const std::string f = "--" + key;
          for (size_t i = 1; i < args.size(); ++i)
            if (args[i] == f || args[i].rfind(f + "=", 0) == 0) return true;
          return false;
        };
        std::vector<std::string> injected;
        injected.push_back(args[0]);
        for (const auto& [key, value] : cfg) {
          if (key == "config" || user_has(key)) continue;
          if (it->second->get_option_no_throw("--" + key) == nullptr)
            continue;  // key belongs to another subcommand
          injected.push_back("--" + key);
          injected.push_back(value);
        }
        injected.insert(injected.end(), args.begin() + 1, args.end());
        final_args = std::move(injected);
      }
    }

    std::reverse(final_args.begin(), final_args.end());
    app.parse(final_args);
  } catch (const UsageError& e) {
    std::cerr << "tandyn: " << e.what() << '\n';
    return 2;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help/message appropriately
    return code == 0 ? 0 : 2;
  }

  try {
    if (subs["classify"]->parsed()) return run_classify(cls);
    if (subs["orbit"]->parsed()) return run_orbit(orb);
    if (subs["prepoles"]->parsed()) return run_prepoles(pre);
    if (subs["cycle"]->parsed()) return run_cycle(cyc);
    if (subs["virtual-center"]->parsed()) return run_virtual_center(vc);
    if (subs["ray"]->parsed()) return run_ray(ray);
    if (subs["render-param"]->parsed()) return run_render(rp, false);
    if (subs["render-dynamic"]->parsed()) return run_render(rd, true);
    if (subs["selftest"]->parsed()) return run_selftest();
  } catch (const UsageError& e) {
    std::cerr << "tandyn: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "tandyn: " << e.what() << '\n';
    return 2;
  } catch (const tandyn::Error& e) {
    std::cerr << "tandyn: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "tandyn: internal error: " << e.what() << '\n';
    return 1;
  }
  return 2;  // no subcommand matched (unreachable with require_subcommand)
}
