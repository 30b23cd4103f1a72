#pragma once

#include <cstdint>
#include <vector>

#include "cpmon/calibration.hpp"

namespace cpmon {

struct DetectorConfig {
  std::size_t window = 500;
  double ratio_threshold = 1.5;  // must be > 1
  std::size_t min_fill = 0;      // 0 means "same as window"
  bool track_null_rate = true;
  bool latched = false;          // once raised, the alarm stays raised
  // Stand-in for the baseline in the ratio test when the calibrated average
  // drops below it; keeps the test meaningful when null sets pull the
  // baseline under 1.
  double size_floor = 0.5;

  std::size_t effective_min_fill() const noexcept {
    return min_fill == 0 ? window : min_fill;
  }
  void validate() const;
};

enum class Verdict { ok, out_of_calibration };

struct DetectorSummary {
  std::uint64_t samples_seen = 0;
  double window_mean = 0.0;
  double window_null_rate = 0.0;
  bool has_null_rate = false;
  bool alarm = false;
  bool insufficient_fill = false;
  double baseline_avg_size = 0.0;
  double ratio_threshold = 0.0;
};

// Sliding-window monitor over prediction-set sizes.  The alarm raises while
// the window mean exceeds ratio_threshold times the (floored) baseline and
// clears when it no longer does, unless configured latched.  Single writer;
// updates must be externally serialized.
class Detector {
 public:
  Detector(const CalibrationModel& model, DetectorConfig config);
  Detector(double baseline_avg_size, DetectorConfig config);

  Verdict update(const PredictionSet& set) { return update_size(set.size()); }
  Verdict update_size(std::size_t size);

  DetectorSummary summary() const;
  bool alarm() const noexcept { return alarm_; }
  double window_mean() const noexcept;
  std::uint64_t samples_seen() const noexcept { return samples_seen_; }

  // Retained sizes, oldest first; for audits and tests.
  std::vector<std::size_t> window_sizes() const;

 private:
  DetectorConfig config_;
  double baseline_;
  std::vector<std::size_t> ring_;
  std::size_t head_ = 0;   // slot the next size lands in
  std::size_t count_ = 0;  // retained entries, <= window
  std::uint64_t samples_seen_ = 0;
  std::uint64_t size_sum_ = 0;
  std::uint64_t null_count_ = 0;
  bool alarm_ = false;
};

}  // namespace cpmon
