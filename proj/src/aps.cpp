#include "cpmon/aps.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cpmon/error.hpp"

namespace cpmon {

namespace {

void check_unit_interval(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw ConstraintError(std::string(name) + " must lie in [0, 1]");
  }
}

}  // namespace

ProbVector ProbVector::from(std::vector<double> probs) {
  if (probs.size() < 2) {
    throw ConstraintError("probability vector needs at least 2 classes");
  }
  double sum = 0.0;
  for (double p : probs) {
    if (!std::isfinite(p)) {
      throw ConstraintError("probability vector has a non-finite entry");
    }
    if (p < 0.0) {
      throw ConstraintError("probability vector has a negative entry");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSumSlack) {
    throw ConstraintError("probability vector sums to " + std::to_string(sum) +
                          ", outside the accepted tolerance");
  }
  for (double& p : probs) p /= sum;
  return ProbVector(std::move(probs));
}

bool PredictionSet::contains(std::size_t c) const noexcept {
  return std::binary_search(classes.begin(), classes.end(), c);
}

RankedView rank(const ProbVector& probs) {
  const auto& p = probs.values();
  RankedView view;
  view.order.resize(p.size());
  std::iota(view.order.begin(), view.order.end(), std::size_t{0});
  std::sort(view.order.begin(), view.order.end(),
            [&p](std::size_t a, std::size_t b) {
              if (p[a] != p[b]) return p[a] > p[b];
              return a < b;
            });
  view.cumsum.resize(p.size());
  double running = 0.0;
  for (std::size_t r = 0; r < view.order.size(); ++r) {
    running += p[view.order[r]];
    view.cumsum[r] = running;
  }
  return view;
}

std::size_t quantile_class_count(const RankedView& ranked, double gamma) {
  check_unit_interval(gamma, "gamma");
  const std::size_t n = ranked.class_count();
  for (std::size_t r = 0; r < n; ++r) {
    if (ranked.cumsum[r] >= gamma - kMassSlack) return r + 1;
  }
  return n;
}

double boundary_excess(const RankedView& ranked, std::size_t count, double gamma) {
  const double boundary_mass = ranked.sorted_prob(count - 1);
  if (boundary_mass <= 0.0) return 0.0;
  const double excess = (ranked.cumsum[count - 1] - gamma) / boundary_mass;
  return std::clamp(excess, 0.0, 1.0);
}

PredictionSet prediction_set(const ProbVector& probs, double u, double gamma) {
  check_unit_interval(u, "u");
  check_unit_interval(gamma, "gamma");
  const RankedView ranked = rank(probs);
  const std::size_t count = quantile_class_count(ranked, gamma);
  const double excess = boundary_excess(ranked, count, gamma);
  const std::size_t keep = (u <= excess) ? count - 1 : count;
  PredictionSet set;
  set.classes.assign(ranked.order.begin(), ranked.order.begin() + keep);
  std::sort(set.classes.begin(), set.classes.end());
  return set;
}

double conformity_score(const ProbVector& probs, std::size_t label, double u) {
  check_unit_interval(u, "u");
  if (label >= probs.class_count()) {
    throw ConstraintError("label " + std::to_string(label) +
                          " is out of range for " +
                          std::to_string(probs.class_count()) + " classes");
  }
  const RankedView ranked = rank(probs);
  std::size_t r = 0;
  while (ranked.order[r] != label) ++r;
  const double score = ranked.cumsum[r] - u * ranked.sorted_prob(r);
  return std::clamp(score, 0.0, 1.0);
}

}  // namespace cpmon
