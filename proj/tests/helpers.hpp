#pragma once

// Small shared utilities for the unit suites.

#include <cmath>
#include <complex>
#include <cstdlib>
#include <random>
#include <string>

#include "tandyn/types.hpp"

namespace testutil {

using tandyn::Cx;

inline double dist(Cx a, Cx b) { return std::abs(a - b); }

// |a - b| <= tol * max(1, |b|): absolute near zero, relative away from it.
inline bool close(Cx a, Cx b, double tol) {
  return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

// Deterministic RNG for every randomized check; reseed per test case so the
// cases stay order-independent.
inline std::mt19937& rng() {
  static std::mt19937 gen(20260815u);
  return gen;
}

inline double uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline long long uniform_int(long long lo, long long hi) {
  return std::uniform_int_distribution<long long>(lo, hi)(rng());
}

// Scoped environment-variable override (restores the previous state).
class EnvGuard {
 public:
  EnvGuard(const char* name, const char* value) : name_(name) {
    const char* old = std::getenv(name);
    had_ = old != nullptr;
    if (had_) old_ = old;
    if (value)
      ::setenv(name, value, 1);
    else
      ::unsetenv(name);
  }
  ~EnvGuard() {
    if (had_)
      ::setenv(name_.c_str(), old_.c_str(), 1);
    else
      ::unsetenv(name_.c_str());
  }
  EnvGuard(const EnvGuard&) = delete;
  EnvGuard& operator=(const EnvGuard&) = delete;

 private:
  std::string name_;
  std::string old_;
  bool had_ = false;
};

}  // namespace testutil
