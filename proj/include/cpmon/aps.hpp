#pragma once

#include <cstddef>
#include <vector>

namespace cpmon {

// Slack used when comparing cumulative probability mass against a
// threshold. Partial sums of renormalized doubles land within a few ulp of
// their exact value, so a threshold that equals an exact partial sum must
// still resolve to the smaller class count.
inline constexpr double kMassSlack = 1e-9;

// Validated class-probability vector.  Inputs whose sum drifts from 1 by at
// most kSumSlack are renormalized on ingestion; anything worse is rejected
// as malformed rather than silently rescaled.
class ProbVector {
 public:
  static constexpr double kSumSlack = 1e-3;

  // Throws ConstraintError on: fewer than 2 classes, non-finite or negative
  // entries, or a total mass further than kSumSlack from 1.
  static ProbVector from(std::vector<double> probs);

  std::size_t class_count() const noexcept { return probs_.size(); }
  double operator[](std::size_t c) const noexcept { return probs_[c]; }
  const std::vector<double>& values() const noexcept { return probs_; }

 private:
  explicit ProbVector(std::vector<double> probs) : probs_(std::move(probs)) {}
  std::vector<double> probs_;
};

// Classes ordered by descending probability (ties broken by ascending class
// index) together with the running partial sums of the sorted values.
struct RankedView {
  std::vector<std::size_t> order;  // order[r] = class holding rank r
  std::vector<double> cumsum;      // cumsum[r] = mass of the r+1 largest classes

  std::size_t class_count() const noexcept { return order.size(); }

  // Probability at a 0-based rank, recovered from the partial sums so that
  // every consumer sees the identical rounding.
  double sorted_prob(std::size_t r) const noexcept {
    return r == 0 ? cumsum[0] : cumsum[r] - cumsum[r - 1];
  }
};

// Possibly-empty set of class indices, kept sorted ascending.
struct PredictionSet {
  std::vector<std::size_t> classes;

  std::size_t size() const noexcept { return classes.size(); }
  bool empty() const noexcept { return classes.empty(); }
  bool contains(std::size_t c) const noexcept;
};

RankedView rank(const ProbVector& probs);

// Smallest count of top-ranked classes whose cumulative mass reaches gamma.
// Always in {1, ..., C}; gamma = 0 yields 1.
std::size_t quantile_class_count(const RankedView& ranked, double gamma);

// Fraction of the boundary class's mass in excess of gamma:
//   (cumsum[count-1] - gamma) / p_(count), clamped to [0, 1].
// Defined as 0 when the boundary class has zero mass, which keeps the
// boundary class in the set instead of dropping it.
double boundary_excess(const RankedView& ranked, std::size_t count, double gamma);

// Randomized threshold set: the `count - 1` largest classes when
// u <= boundary_excess, else the `count` largest.  count = 1 with a small u
// therefore produces the empty (null) set.
PredictionSet prediction_set(const ProbVector& probs, double u, double gamma);

// Smallest threshold at which `label` enters the randomized prediction set:
//   cumsum[r] - u * p_(r), with r the descending rank of `label`.
// The closed form is cross-checked against a grid-search oracle in the test
// suite rather than trusted on its own.
double conformity_score(const ProbVector& probs, std::size_t label, double u);

}  // namespace cpmon
