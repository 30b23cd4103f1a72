#include "cpmon/calibration.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "cpmon/error.hpp"
#include "cpmon/rng.hpp"

namespace cpmon {

namespace {

void check_consistent(const std::vector<LabeledSample>& samples) {
  const std::size_t classes = samples.front().probs.class_count();
  for (const auto& s : samples) {
    if (s.probs.class_count() != classes) {
      throw ConstraintError("samples disagree on class count");
    }
    if (s.label >= classes) {
      throw ConstraintError("label " + std::to_string(s.label) +
                            " is out of range for " + std::to_string(classes) +
                            " classes");
    }
  }
}

}  // namespace

std::size_t quantile_index(std::size_t n_cal, double epsilon) {
  // The product is nudged down one ulp-scale step so that exact integer
  // values (e.g. 0.95 * 20) do not round up from float noise.
  const double raw = (1.0 - epsilon) * static_cast<double>(n_cal + 1);
  const double k = std::ceil(raw - 1e-9);
  return k < 1.0 ? 1 : static_cast<std::size_t>(k);
}

double threshold_from_scores(const std::vector<double>& scores_sorted,
                             double epsilon, bool* saturated) {
  if (scores_sorted.empty()) throw ConstraintError("empty score list");
  const std::size_t k = quantile_index(scores_sorted.size(), epsilon);
  const bool is_saturated = k > scores_sorted.size();
  if (saturated != nullptr) *saturated = is_saturated;
  return is_saturated ? 1.0 : scores_sorted[k - 1];
}

std::uint64_t dataset_fingerprint(const std::vector<LabeledSample>& samples) {
  std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a
  const auto feed = [&h](std::uint64_t word) {
    for (int i = 0; i < 8; ++i) {
      h = (h ^ ((word >> (8 * i)) & 0xff)) * 0x100000001b3ull;
    }
  };
  feed(samples.size());
  for (const auto& s : samples) {
    feed(s.label);
    feed(s.probs.class_count());
    for (double p : s.probs.values()) feed(std::bit_cast<std::uint64_t>(p));
  }
  return h;
}

CalibrationModel calibrate(const std::vector<LabeledSample>& samples,
                           double epsilon, std::uint64_t seed,
                           const std::vector<LabeledSample>* baseline) {
  if (samples.empty()) throw ConstraintError("empty calibration set");
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw ConstraintError("epsilon must lie in (0, 1)");
  }
  check_consistent(samples);

  CalibrationModel model;
  model.epsilon = epsilon;
  model.n_cal = samples.size();
  model.class_count = samples.front().probs.class_count();
  model.rng_seed = seed;
  model.calibration_fingerprint = dataset_fingerprint(samples);

  const CounterRng score_rng(seed, RngStream::calibration_scores);
  model.scores_sorted.resize(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    model.scores_sorted[i] =
        conformity_score(samples[i].probs, samples[i].label, score_rng.uniform(i));
  }
  std::sort(model.scores_sorted.begin(), model.scores_sorted.end());

  model.k_index = quantile_index(model.n_cal, epsilon);
  model.q_threshold =
      threshold_from_scores(model.scores_sorted, epsilon, &model.saturated);

  const std::vector<LabeledSample>& base =
      (baseline != nullptr && !baseline->empty()) ? *baseline : samples;
  if (baseline != nullptr && !baseline->empty()) check_consistent(*baseline);

  const CounterRng baseline_rng(seed, RngStream::calibration_baseline);
  std::size_t size_sum = 0;
  std::size_t nulls = 0;
  for (std::size_t i = 0; i < base.size(); ++i) {
    const PredictionSet set =
        prediction_set(base[i].probs, baseline_rng.uniform(i), model.q_threshold);
    size_sum += set.size();
    if (set.empty()) ++nulls;
  }
  model.baseline_avg_size =
      static_cast<double>(size_sum) / static_cast<double>(base.size());
  model.baseline_null_rate =
      static_cast<double>(nulls) / static_cast<double>(base.size());
  return model;
}

PredictionSet predict_set(const CalibrationModel& model, const ProbVector& probs,
                          double u) {
  if (probs.class_count() != model.class_count) {
    throw ConstraintError("input has " + std::to_string(probs.class_count()) +
                          " classes, model expects " +
                          std::to_string(model.class_count));
  }
  return prediction_set(probs, u, model.q_threshold);
}

double empirical_coverage(const CalibrationModel& model,
                          const std::vector<LabeledSample>& test,
                          std::uint64_t seed, bool strict) {
  if (test.empty()) throw ConstraintError("empty test set");
  check_consistent(test);
  if (test.front().probs.class_count() != model.class_count) {
    throw ConstraintError("test set class count does not match the model");
  }
  if (strict && dataset_fingerprint(test) == model.calibration_fingerprint) {
    throw ConstraintError(
        "test set is identical to the calibration split; coverage on it is "
        "meaningless (pass strict=false to override)");
  }
  const CounterRng rng(seed, RngStream::coverage);
  std::size_t covered = 0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const PredictionSet set = predict_set(model, test[i].probs, rng.uniform(i));
    if (set.contains(test[i].label)) ++covered;
  }
  return static_cast<double>(covered) / static_cast<double>(test.size());
}

}  // namespace cpmon
