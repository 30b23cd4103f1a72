#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "cpmon/error.hpp"
#include "cpmon/metrics.hpp"
#include "cpmon/rng.hpp"
#include "cpmon/simulator.hpp"

using namespace cpmon;

TEST_CASE("normalized entropy hits its closed-form anchors") {
  CHECK(std::abs(nse(ProbVector::from(std::vector<double>(4, 0.25))) - 1.0) <= 1e-12);
  CHECK(std::abs(nse(ProbVector::from(std::vector<double>(10, 0.1))) - 1.0) <= 1e-12);
  CHECK(nse(ProbVector::from({1.0, 0.0, 0.0})) == 0.0);
  // Two equal halves among four classes: log 2 / log 4.
  CHECK(std::abs(nse(ProbVector::from({0.5, 0.5, 0.0, 0.0})) - 0.5) <= 1e-12);
}

TEST_CASE("normalized entropy is bounded and permutation invariant") {
  SplitMix64 rng(2024);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t classes = 2 + rng.uniform_index(10);
    std::vector<double> p(classes);
    double sum = 0.0;
    for (auto& x : p) {
      x = rng.gamma(0.7);
      sum += x;
    }
    for (auto& x : p) x /= sum;
    const double h = nse(ProbVector::from(p));
    CHECK(h >= 0.0);
    CHECK(h <= 1.0 + 1e-12);
    std::reverse(p.begin(), p.end());
    CHECK(std::abs(nse(ProbVector::from(p)) - h) <= 1e-12);
  }
}

TEST_CASE("temperature scaling preserves the class ordering") {
  SplitMix64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> logits(5);
    for (auto& z : logits) z = 4.0 * rng.normal();
    const auto reference = rank(softmax(logits, 1.0));
    for (const double t : {0.1, 0.5, 2.0, 10.0}) {
      CHECK(rank(softmax(logits, t)).order == reference.order);
    }
  }
}

TEST_CASE("extreme temperature flattens toward uniform") {
  const std::vector<double> logits{2.0, -1.0, 0.5, 0.0};
  CHECK(nse(softmax(logits, 1000.0)) >= 1.0 - 1e-3);
  CHECK_THROWS_AS(softmax(logits, 0.0), ConstraintError);
  CHECK_THROWS_AS(softmax(logits, -2.0), ConstraintError);
  CHECK_THROWS_AS(softmax(std::vector<double>{1.0, std::nan("")}, 1.0),
                  ConstraintError);
}

TEST_CASE("entropy is non-decreasing in temperature") {
  SplitMix64 rng(8);
  const std::vector<double> grid{0.05, 0.1, 0.3, 1.0, 3.0, 10.0, 100.0, 1000.0};
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> logits(8);
    for (auto& z : logits) z = 3.0 * rng.normal();
    double previous = -1.0;
    for (const double t : grid) {
      const double h = nse(softmax(logits, t));
      CHECK(h >= previous - 1e-12);
      previous = h;
    }
  }
}

TEST_CASE("temperature fit recovers T near 1 on calibrated logits") {
  SplitMix64 rng(9);
  std::vector<LogitSample> data;
  for (int i = 0; i < 2000; ++i) {
    std::vector<double> p(10);
    double sum = 0.0;
    for (auto& x : p) {
      x = rng.gamma(0.5) + 1e-4;
      sum += x;
    }
    for (auto& x : p) x /= sum;
    // Draw the label from the posterior itself, then hand the fitter the
    // exact log-posterior as logits.
    const double pick = rng.uniform();
    double acc = 0.0;
    std::size_t label = p.size() - 1;
    for (std::size_t c = 0; c < p.size(); ++c) {
      acc += p[c];
      if (pick < acc) {
        label = c;
        break;
      }
    }
    std::vector<double> logits(p.size());
    for (std::size_t c = 0; c < p.size(); ++c) logits[c] = std::log(p[c]);
    data.push_back({std::move(logits), label});
  }
  const double fitted = fit_temperature(data);
  CHECK(fitted >= 0.9);
  CHECK(fitted <= 1.1);

  CHECK_THROWS_AS(fit_temperature({}), ConstraintError);
}

TEST_CASE("histograms count every observation into the right bin") {
  std::vector<ProbVector> onehots(25, ProbVector::from({1.0, 0.0, 0.0}));
  const auto spike = largest_softmax_histogram(onehots, 50);
  CHECK(spike.total() == 25);
  CHECK(spike.counts.back() == 25);
  CHECK(spike.markers.size() == 1);
  CHECK(spike.markers[0].first == "mean_largest_softmax");
  CHECK(spike.markers[0].second == 1.0);

  std::vector<ProbVector> uniforms(40, ProbVector::from(std::vector<double>(10, 0.1)));
  const auto flat = largest_softmax_histogram(uniforms, 50, {{"q_1-0.05", 0.9}});
  CHECK(flat.total() == 40);
  // max entry 0.1 lands in bin 5 of 50 over [0, 1]
  CHECK(flat.counts[5] == 40);
  CHECK(flat.markers.size() == 2);

  CHECK_THROWS_AS(largest_softmax_histogram({}, 50), ConstraintError);
  CHECK_THROWS_AS(largest_softmax_histogram(onehots, 0), ConstraintError);
  CHECK_THROWS_AS(largest_softmax_histogram(onehots, 50, {{"bad", 2.0}}),
                  ConstraintError);
}

TEST_CASE("noisy streams push the mean max-softmax left of the threshold") {
  // Calibrated on clean data, the threshold sits below the typical top
  // softmax; at severity 3 the flattened stream drops its mean below it.
  const auto profile = ModelProfile::preset(ProfileKind::uncertain);
  const auto model = calibrate(sample_stream({profile, 0, 2000, 61}), 0.05, 62);

  const auto noisy = sample_stream({profile, 3, 5000, 63});
  std::vector<ProbVector> stream;
  stream.reserve(noisy.size());
  for (const auto& s : noisy) stream.push_back(s.probs);
  const auto hist = largest_softmax_histogram(
      stream, kDefaultHistogramBins, {{"q_1-0.05", model.q_threshold}});

  double mean_marker = -1.0;
  double q_marker = -1.0;
  for (const auto& [name, value] : hist.markers) {
    if (name == "mean_largest_softmax") mean_marker = value;
    if (name == "q_1-0.05") q_marker = value;
  }
  CHECK(mean_marker >= 0.0);
  CHECK(q_marker >= 0.0);
  CHECK(mean_marker < q_marker);
}

TEST_CASE("partial histograms merge to the whole") {
  SplitMix64 rng(10);
  std::vector<ProbVector> stream;
  for (int i = 0; i < 500; ++i) {
    std::vector<double> p(6);
    double sum = 0.0;
    for (auto& x : p) {
      x = rng.gamma(1.0);
      sum += x;
    }
    for (auto& x : p) x /= sum;
    stream.push_back(ProbVector::from(std::move(p)));
  }
  auto whole = Histogram::with_bins(50);
  for (const auto& probs : stream) whole.add(largest_softmax(probs));

  auto left = Histogram::with_bins(50);
  auto right = Histogram::with_bins(50);
  for (std::size_t i = 0; i < stream.size(); ++i) {
    (i % 2 == 0 ? left : right).add(largest_softmax(stream[i]));
  }
  left.merge(right);
  CHECK(left.counts == whole.counts);
  CHECK(left.total() == whole.total());

  auto mismatched = Histogram::with_bins(10);
  CHECK_THROWS_AS(left.merge(mismatched), ConstraintError);
}

TEST_CASE("set-size aggregates") {
  PredictionSet a{{3}};
  PredictionSet b{{1}};
  PredictionSet c{{0, 2}};
  CHECK(std::abs(avg_set_size({a, b, c}) - 4.0 / 3.0) <= 1e-12);
  CHECK(null_rate({a, b, c}) == 0.0);

  PredictionSet empty1{};
  PredictionSet empty2{};
  CHECK(avg_set_size({empty1, empty2}) == 0.0);
  CHECK(null_rate({empty1, empty2}) == 1.0);

  CHECK_THROWS_AS(avg_set_size({}), ConstraintError);
  CHECK_THROWS_AS(null_rate({}), ConstraintError);
}
