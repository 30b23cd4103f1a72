#include "cpmon/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "cpmon/error.hpp"

namespace cpmon {

double nse(const ProbVector& probs) {
  double entropy = 0.0;
  for (double p : probs.values()) {
    if (p > 0.0) entropy -= p * std::log(p);
  }
  return entropy / std::log(static_cast<double>(probs.class_count()));
}

double largest_softmax(const ProbVector& probs) {
  return *std::max_element(probs.values().begin(), probs.values().end());
}

ProbVector softmax(std::span<const double> logits, double temperature) {
  if (logits.size() < 2) throw ConstraintError("need at least 2 logits");
  if (!(temperature > 0.0)) throw ConstraintError("temperature must be > 0");
  double max_logit = logits[0];
  for (double z : logits) {
    if (!std::isfinite(z)) throw ConstraintError("non-finite logit");
    max_logit = std::max(max_logit, z);
  }
  std::vector<double> exps(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    exps[i] = std::exp((logits[i] - max_logit) / temperature);
    sum += exps[i];
  }
  for (double& e : exps) e /= sum;
  return ProbVector::from(std::move(exps));
}

namespace {

double negative_log_likelihood(const std::vector<LogitSample>& data, double t) {
  double nll = 0.0;
  for (const auto& sample : data) {
    double max_logit = sample.logits[0];
    for (double z : sample.logits) max_logit = std::max(max_logit, z);
    double sum = 0.0;
    for (double z : sample.logits) sum += std::exp((z - max_logit) / t);
    nll += std::log(sum) - (sample.logits[sample.label] - max_logit) / t;
  }
  return nll;
}

}  // namespace

double fit_temperature(const std::vector<LogitSample>& data) {
  if (data.empty()) throw ConstraintError("temperature fit needs at least 1 sample");
  for (const auto& sample : data) {
    if (sample.logits.size() < 2) throw ConstraintError("need at least 2 logits");
    if (sample.label >= sample.logits.size()) {
      throw ConstraintError("label out of range in temperature fit");
    }
    for (double z : sample.logits) {
      if (!std::isfinite(z)) throw ConstraintError("non-finite logit");
    }
  }
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = std::log(0.05);
  double hi = std::log(20.0);
  double c = hi - phi * (hi - lo);
  double d = lo + phi * (hi - lo);
  double fc = negative_log_likelihood(data, std::exp(c));
  double fd = negative_log_likelihood(data, std::exp(d));
  while (hi - lo > 1e-4) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - phi * (hi - lo);
      fc = negative_log_likelihood(data, std::exp(c));
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + phi * (hi - lo);
      fd = negative_log_likelihood(data, std::exp(d));
    }
  }
  return std::exp((lo + hi) / 2.0);
}

Histogram Histogram::with_bins(std::size_t bins) {
  if (bins < 1) throw ConstraintError("histogram needs at least 1 bin");
  Histogram h;
  h.bin_count = bins;
  h.counts.assign(bins, 0);
  return h;
}

void Histogram::add(double value) noexcept {
  const double clamped = std::clamp(value, lo, hi);
  auto bin = static_cast<std::size_t>((clamped - lo) / (hi - lo) *
                                      static_cast<double>(bin_count));
  if (bin >= bin_count) bin = bin_count - 1;
  ++counts[bin];
}

void Histogram::merge(const Histogram& other) {
  if (other.bin_count != bin_count || other.lo != lo || other.hi != hi) {
    throw ConstraintError("cannot merge histograms with different bin layouts");
  }
  for (std::size_t i = 0; i < bin_count; ++i) counts[i] += other.counts[i];
  markers.insert(markers.end(), other.markers.begin(), other.markers.end());
}

std::uint64_t Histogram::total() const noexcept {
  std::uint64_t n = 0;
  for (auto c : counts) n += c;
  return n;
}

double Histogram::bin_lo(std::size_t bin) const noexcept {
  return lo + (hi - lo) * static_cast<double>(bin) / static_cast<double>(bin_count);
}

double Histogram::bin_hi(std::size_t bin) const noexcept {
  return lo + (hi - lo) * static_cast<double>(bin + 1) / static_cast<double>(bin_count);
}

Histogram largest_softmax_histogram(
    const std::vector<ProbVector>& stream, std::size_t bin_count,
    std::vector<std::pair<std::string, double>> markers) {
  if (stream.empty()) throw ConstraintError("empty stream");
  Histogram h = Histogram::with_bins(bin_count);
  double sum = 0.0;
  for (const auto& probs : stream) {
    const double top = largest_softmax(probs);
    h.add(top);
    sum += top;
  }
  for (const auto& [name, value] : markers) {
    if (!(value >= h.lo && value <= h.hi)) {
      throw ConstraintError("marker '" + name + "' lies outside the histogram range");
    }
  }
  h.markers = std::move(markers);
  h.markers.emplace_back("mean_largest_softmax",
                         sum / static_cast<double>(stream.size()));
  return h;
}

double avg_set_size(const std::vector<PredictionSet>& sets) {
  if (sets.empty()) throw ConstraintError("empty prediction-set sequence");
  std::size_t total = 0;
  for (const auto& s : sets) total += s.size();
  return static_cast<double>(total) / static_cast<double>(sets.size());
}

double null_rate(const std::vector<PredictionSet>& sets) {
  if (sets.empty()) throw ConstraintError("empty prediction-set sequence");
  std::size_t nulls = 0;
  for (const auto& s : sets) {
    if (s.empty()) ++nulls;
  }
  return static_cast<double>(nulls) / static_cast<double>(sets.size());
}

}  // namespace cpmon
