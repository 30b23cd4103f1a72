#pragma once

#include <cstdint>
#include <vector>

#include "cpmon/aps.hpp"

namespace cpmon {

// A probability vector paired with its ground-truth class.
struct LabeledSample {
  ProbVector probs;
  std::size_t label = 0;
};

// Frozen result of split-conformal calibration.  Immutable after
// construction and safe for shared concurrent reads.
struct CalibrationModel {
  double epsilon = 0.0;
  std::size_t n_cal = 0;
  std::vector<double> scores_sorted;  // ascending
  std::size_t k_index = 0;            // 1-based order-statistic index
  double q_threshold = 1.0;
  bool saturated = false;             // k_index > n_cal; threshold pinned to 1
  double baseline_avg_size = 0.0;
  double baseline_null_rate = 0.0;
  std::size_t class_count = 0;
  std::uint64_t rng_seed = 0;
  // Logit divisor applied before scoring when the source data were logits;
  // 1.0 means probabilities were used as-is.
  double temperature = 1.0;
  // Order-sensitive hash of the calibration samples, used to refuse
  // evaluating coverage on the calibration split itself.
  std::uint64_t calibration_fingerprint = 0;
};

// Order-statistic index k = ceil((1 - epsilon) * (n + 1)), at least 1.
std::size_t quantile_index(std::size_t n_cal, double epsilon);

// k-th smallest of the ascending scores; 1.0 with *saturated set when
// k exceeds the sample count.
double threshold_from_scores(const std::vector<double>& scores_sorted,
                             double epsilon, bool* saturated = nullptr);

std::uint64_t dataset_fingerprint(const std::vector<LabeledSample>& samples);

// Scores every calibration sample with one uniform draw each (counter-mode
// from `seed`), freezes the threshold, and records baseline set-size
// statistics.  Baseline statistics are computed over `baseline` when
// provided, otherwise over the calibration samples themselves.
CalibrationModel calibrate(const std::vector<LabeledSample>& samples,
                           double epsilon, std::uint64_t seed,
                           const std::vector<LabeledSample>* baseline = nullptr);

// Test-time set generation at the frozen threshold.
PredictionSet predict_set(const CalibrationModel& model, const ProbVector& probs,
                          double u);

// Fraction of test samples whose label lands in the generated set, with one
// fresh uniform draw per sample.  In strict mode a test set whose
// fingerprint matches the calibration split is rejected.
double empirical_coverage(const CalibrationModel& model,
                          const std::vector<LabeledSample>& test,
                          std::uint64_t seed, bool strict = true);

}  // namespace cpmon
