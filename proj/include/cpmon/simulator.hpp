#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cpmon/calibration.hpp"

namespace cpmon {

inline constexpr int kSeverityLevels = 6;  // 0 (clean) through 5

enum class ProfileKind { uncertain, intermediate, overconfident };

ProfileKind profile_kind_from_name(const std::string& name);
std::string profile_kind_name(ProfileKind kind);

// Synthetic model family emitting (probability vector, label) pairs.
//
// All kinds share an accuracy curve: the predicted class equals the true
// label with probability accuracy[severity], else is uniform over the rest.
//
// uncertain / intermediate build each vector as
//   boost * e_pred + (1 - boost) * w
// where w is a symmetric-Dirichlet draw (concentration floored at 1 so the
// background flattens monotonically as the curve decays) whose largest
// component is moved onto the predicted class, and
//   boost = max(alpha / (alpha + 1), top_mass_floor).
// A decaying concentration curve therefore flattens the softmax, which is
// the signature the set-size monitor keys on.
//
// overconfident puts top_mass[severity] on the predicted class and spreads
// the remainder uniformly, severity notwithstanding.
struct ModelProfile {
  ProfileKind kind = ProfileKind::uncertain;
  std::size_t class_count = 10;
  std::array<double, kSeverityLevels> accuracy{};
  std::array<double, kSeverityLevels> concentration{};  // uncertain/intermediate
  std::array<double, kSeverityLevels> top_mass{};       // overconfident
  double top_mass_floor = 0.0;  // lower bound on the boost mass

  static ModelProfile preset(ProfileKind kind, std::size_t class_count = 10);
  void validate() const;
};

struct StreamSpec {
  ModelProfile profile;
  int severity = 0;
  std::size_t count = 0;
  std::uint64_t seed = 0;
};

// Deterministic in the spec: identical specs yield identical sequences.
// Draws are IID at fixed severity, hence exchangeable.
std::vector<LabeledSample> sample_stream(const StreamSpec& spec);

struct SweepCell {
  double epsilon = 0.0;
  int severity = 0;
  double avg_set_size = 0.0;
  double null_rate = 0.0;
  double coverage = 0.0;
};

// Calibrates once per epsilon on a clean (severity 0) stream, then evaluates
// average set size, null rate, and coverage at every severity.  Evaluation
// u draws are shared across epsilons so the size ordering in epsilon is
// exact, not statistical.
std::vector<SweepCell> severity_sweep(const ModelProfile& profile,
                                      const std::vector<double>& epsilons,
                                      std::size_t n_cal, std::size_t n_test,
                                      std::uint64_t seed);

// Mean normalized softmax entropy per severity over `count` draws each.
std::array<double, kSeverityLevels> entropy_sweep(const ModelProfile& profile,
                                                  std::size_t count,
                                                  std::uint64_t seed);

}  // namespace cpmon
