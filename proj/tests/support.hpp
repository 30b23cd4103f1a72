#pragma once

// Test-only helpers: random case generation plus the grid-search oracle
// that pins the conformity-score closed form.  The oracle only queries set
// membership through prediction_set, never the closed form itself.

#include <cmath>
#include <cstddef>
#include <vector>

#include "cpmon/aps.hpp"
#include "cpmon/rng.hpp"

namespace cpmon::testsupport {

// Mix of lumpy, moderate, and peaked-with-zeros shapes so edge geometry
// (tiny masses, exact zeros, dominant classes) all show up.
inline ProbVector random_probs(SplitMix64& rng, std::size_t classes) {
  std::vector<double> p(classes);
  const double pick = rng.uniform();
  if (pick < 0.4) {
    for (auto& x : p) x = rng.gamma(0.4);
  } else if (pick < 0.8) {
    for (auto& x : p) x = rng.gamma(3.0);
  } else {
    for (auto& x : p) x = rng.uniform() < 0.3 ? 0.0 : rng.gamma(1.0);
    p[rng.uniform_index(classes)] += 5.0;
  }
  double sum = 0.0;
  for (double x : p) sum += x;
  for (auto& x : p) x /= sum;
  return ProbVector::from(std::move(p));
}

// Smallest gamma on the resolution grid whose prediction set contains
// `label`.  Membership is monotone in gamma (a property checked on its
// own), so bisection over the grid returns the same point a linear scan
// would, in ~20 membership queries instead of 10^6.
inline double grid_oracle_min_gamma(const ProbVector& probs, std::size_t label,
                                    double u, double resolution = 1e-6) {
  const auto member = [&](double gamma) {
    return prediction_set(probs, u, gamma).contains(label);
  };
  if (!member(1.0)) return 1.0;
  std::size_t lo = 0;  // not a member here
  auto hi = static_cast<std::size_t>(std::llround(1.0 / resolution));
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (member(static_cast<double>(mid) * resolution)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return static_cast<double>(hi) * resolution;
}

}  // namespace cpmon::testsupport
