#include "cpmon/detector.hpp"

#include <algorithm>

#include "cpmon/error.hpp"

namespace cpmon {

void DetectorConfig::validate() const {
  if (window < 1) throw ConstraintError("window must be >= 1");
  if (!(ratio_threshold > 1.0)) {
    throw ConstraintError("ratio threshold must be > 1");
  }
  if (min_fill > window) throw ConstraintError("min_fill must be <= window");
  if (!(size_floor >= 0.0)) throw ConstraintError("size floor must be >= 0");
}

Detector::Detector(const CalibrationModel& model, DetectorConfig config)
    : Detector(model.baseline_avg_size, config) {}

Detector::Detector(double baseline_avg_size, DetectorConfig config)
    : config_(config), baseline_(baseline_avg_size) {
  config_.validate();
  if (baseline_ < 0.0) throw ConstraintError("baseline average size must be >= 0");
  ring_.assign(config_.window, 0);
}

Verdict Detector::update_size(std::size_t size) {
  if (count_ == config_.window) {
    const std::size_t evicted = ring_[head_];
    size_sum_ -= evicted;
    if (evicted == 0) --null_count_;
  } else {
    ++count_;
  }
  ring_[head_] = size;
  head_ = (head_ + 1) % config_.window;
  size_sum_ += size;
  if (size == 0) ++null_count_;
  ++samples_seen_;

  const bool triggered =
      samples_seen_ >= config_.effective_min_fill() &&
      window_mean() > config_.ratio_threshold * std::max(baseline_, config_.size_floor);
  alarm_ = config_.latched ? (alarm_ || triggered) : triggered;
  return alarm_ ? Verdict::out_of_calibration : Verdict::ok;
}

double Detector::window_mean() const noexcept {
  if (count_ == 0) return 0.0;
  return static_cast<double>(size_sum_) / static_cast<double>(count_);
}

DetectorSummary Detector::summary() const {
  DetectorSummary s;
  s.samples_seen = samples_seen_;
  s.window_mean = window_mean();
  s.has_null_rate = config_.track_null_rate;
  if (config_.track_null_rate && count_ > 0) {
    s.window_null_rate =
        static_cast<double>(null_count_) / static_cast<double>(count_);
  }
  s.alarm = alarm_;
  s.insufficient_fill = samples_seen_ < config_.effective_min_fill();
  s.baseline_avg_size = baseline_;
  s.ratio_threshold = config_.ratio_threshold;
  return s;
}

std::vector<std::size_t> Detector::window_sizes() const {
  std::vector<std::size_t> out;
  out.reserve(count_);
  const std::size_t start = (head_ + config_.window - count_) % config_.window;
  for (std::size_t i = 0; i < count_; ++i) {
    out.push_back(ring_[(start + i) % config_.window]);
  }
  return out;
}

}  // namespace cpmon
