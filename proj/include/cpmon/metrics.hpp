#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cpmon/aps.hpp"

namespace cpmon {

// Raw classifier outputs before the softmax.
struct LogitSample {
  std::vector<double> logits;
  std::size_t label = 0;
};

// Shannon entropy of the vector normalized by log(C); 0 for a one-hot
// vector (0 * log 0 := 0), 1 for the uniform vector.  Natural log; the
// normalization cancels the base.
double nse(const ProbVector& probs);

double largest_softmax(const ProbVector& probs);

// softmax(logits / temperature), computed with max subtraction.  Preserves
// the descending class order for every temperature > 0.
ProbVector softmax(std::span<const double> logits, double temperature = 1.0);

// Scalar temperature minimizing the negative log-likelihood, found by
// golden-section search on log T over [log 0.05, log 20] to 1e-4.
double fit_temperature(const std::vector<LogitSample>& data);

// Fixed-range histogram over [0, 1] with named vertical reference markers.
// Partial histograms with the same bin layout merge associatively, so
// accumulation can be sharded.
struct Histogram {
  std::size_t bin_count = 0;
  double lo = 0.0;
  double hi = 1.0;
  std::vector<std::uint64_t> counts;
  std::vector<std::pair<std::string, double>> markers;

  static Histogram with_bins(std::size_t bins);

  void add(double value) noexcept;
  void merge(const Histogram& other);
  std::uint64_t total() const noexcept;
  double bin_lo(std::size_t bin) const noexcept;
  double bin_hi(std::size_t bin) const noexcept;
};

inline constexpr std::size_t kDefaultHistogramBins = 50;

// Histogram of max-softmax values with the supplied threshold markers plus
// an automatic "mean_largest_softmax" marker.
Histogram largest_softmax_histogram(
    const std::vector<ProbVector>& stream, std::size_t bin_count,
    std::vector<std::pair<std::string, double>> markers = {});

double avg_set_size(const std::vector<PredictionSet>& sets);
double null_rate(const std::vector<PredictionSet>& sets);

}  // namespace cpmon
