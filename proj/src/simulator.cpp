#include "cpmon/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "cpmon/error.hpp"
#include "cpmon/metrics.hpp"
#include "cpmon/rng.hpp"

namespace cpmon {

ProfileKind profile_kind_from_name(const std::string& name) {
  if (name == "uncertain") return ProfileKind::uncertain;
  if (name == "intermediate") return ProfileKind::intermediate;
  if (name == "overconfident") return ProfileKind::overconfident;
  throw ConstraintError("unknown profile kind '" + name + "'");
}

std::string profile_kind_name(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::uncertain: return "uncertain";
    case ProfileKind::intermediate: return "intermediate";
    case ProfileKind::overconfident: return "overconfident";
  }
  return "unknown";
}

ModelProfile ModelProfile::preset(ProfileKind kind, std::size_t class_count) {
  ModelProfile p;
  p.kind = kind;
  p.class_count = class_count;
  p.accuracy = {0.97, 0.75, 0.55, 0.42, 0.33, 0.28};
  switch (kind) {
    case ProfileKind::uncertain:
      p.concentration = {8.0, 2.0, 1.0, 0.7, 0.5, 0.45};
      break;
    case ProfileKind::intermediate:
      p.concentration = {8.0, 4.0, 2.0, 1.0, 0.5, 0.25};
      p.top_mass_floor = 0.9;
      break;
    case ProfileKind::overconfident:
      p.top_mass.fill(0.99);
      break;
  }
  p.validate();
  return p;
}

void ModelProfile::validate() const {
  if (class_count < 2) throw ConstraintError("profile needs at least 2 classes");
  const double chance = 1.0 / static_cast<double>(class_count);
  for (int s = 0; s < kSeverityLevels; ++s) {
    if (!(accuracy[s] > chance && accuracy[s] <= 1.0)) {
      throw ConstraintError("accuracy curve must lie in (1/C, 1]");
    }
    if (s > 0 && accuracy[s] > accuracy[s - 1]) {
      throw ConstraintError("accuracy curve must be non-increasing");
    }
  }
  if (kind == ProfileKind::overconfident) {
    for (double m : top_mass) {
      if (!(m > chance && m < 1.0)) {
        throw ConstraintError("top-mass curve must lie in (1/C, 1)");
      }
      if (m < 0.95) {
        throw ConstraintError("overconfident top mass must stay >= 0.95");
      }
    }
  } else {
    for (int s = 0; s < kSeverityLevels; ++s) {
      if (!(concentration[s] > 0.0)) {
        throw ConstraintError("concentration curve must be > 0");
      }
      if (s > 0 && concentration[s] >= concentration[s - 1]) {
        throw ConstraintError("concentration curve must be strictly decreasing");
      }
    }
    if (!(top_mass_floor >= 0.0 && top_mass_floor < 1.0)) {
      throw ConstraintError("top-mass floor must lie in [0, 1)");
    }
  }
}

namespace {

std::vector<double> peaked_vector(std::size_t classes, double top_mass,
                                  std::size_t predicted) {
  std::vector<double> p(classes,
                        (1.0 - top_mass) / static_cast<double>(classes - 1));
  p[predicted] = top_mass;
  return p;
}

std::vector<double> boosted_dirichlet(SplitMix64& rng, std::size_t classes,
                                      double alpha, double boost_floor,
                                      std::size_t predicted) {
  const double background = std::max(alpha, 1.0);
  std::vector<double> w(classes);
  double sum = 0.0;
  for (double& g : w) {
    g = rng.gamma(background);
    sum += g;
  }
  for (double& g : w) g /= sum;
  const auto top = static_cast<std::size_t>(
      std::max_element(w.begin(), w.end()) - w.begin());
  std::swap(w[top], w[predicted]);
  const double boost = std::max(alpha / (alpha + 1.0), boost_floor);
  for (double& g : w) g *= 1.0 - boost;
  w[predicted] += boost;
  return w;
}

}  // namespace

std::vector<LabeledSample> sample_stream(const StreamSpec& spec) {
  spec.profile.validate();
  if (spec.severity < 0 || spec.severity >= kSeverityLevels) {
    throw ConstraintError("severity must lie in 0..5");
  }
  if (spec.count < 1) throw ConstraintError("stream count must be >= 1");

  const std::size_t classes = spec.profile.class_count;
  const double accuracy = spec.profile.accuracy[spec.severity];
  const CounterRng keys(spec.seed, RngStream::simulate);

  std::vector<LabeledSample> out;
  out.reserve(spec.count);
  for (std::size_t i = 0; i < spec.count; ++i) {
    SplitMix64 rng(keys.key(i));
    const std::size_t label = rng.uniform_index(classes);
    std::size_t predicted = label;
    if (rng.uniform() >= accuracy) {
      predicted = rng.uniform_index(classes - 1);
      if (predicted >= label) ++predicted;
    }
    std::vector<double> probs =
        spec.profile.kind == ProfileKind::overconfident
            ? peaked_vector(classes, spec.profile.top_mass[spec.severity],
                            predicted)
            : boosted_dirichlet(rng, classes,
                                spec.profile.concentration[spec.severity],
                                spec.profile.top_mass_floor, predicted);
    out.push_back({ProbVector::from(std::move(probs)), label});
  }
  return out;
}

std::vector<SweepCell> severity_sweep(const ModelProfile& profile,
                                      const std::vector<double>& epsilons,
                                      std::size_t n_cal, std::size_t n_test,
                                      std::uint64_t seed) {
  profile.validate();
  if (epsilons.empty()) throw ConstraintError("sweep needs at least one epsilon");
  for (double eps : epsilons) {
    if (!(eps > 0.0 && eps < 1.0)) {
      throw ConstraintError("epsilon must lie in (0, 1)");
    }
  }
  if (n_cal < 100 || n_test < 100) {
    throw ConstraintError("sweep needs n_cal and n_test >= 100");
  }

  const std::vector<LabeledSample> cal =
      sample_stream({profile, 0, n_cal, derive_seed(seed, 0x01)});

  std::vector<std::vector<LabeledSample>> tests(kSeverityLevels);
  for (int s = 0; s < kSeverityLevels; ++s) {
    tests[s] = sample_stream(
        {profile, s, n_test, derive_seed(seed, 0x10 + static_cast<std::uint64_t>(s))});
  }

  std::vector<SweepCell> cells;
  cells.reserve(epsilons.size() * kSeverityLevels);
  for (double eps : epsilons) {
    const CalibrationModel model = calibrate(cal, eps, derive_seed(seed, 0x02));
    for (int s = 0; s < kSeverityLevels; ++s) {
      // One u stream per severity, shared across epsilons.
      const CounterRng u_rng(derive_seed(seed, 0x20 + static_cast<std::uint64_t>(s)),
                             RngStream::predict);
      std::size_t size_sum = 0;
      std::size_t nulls = 0;
      std::size_t covered = 0;
      for (std::size_t i = 0; i < tests[s].size(); ++i) {
        const PredictionSet set =
            predict_set(model, tests[s][i].probs, u_rng.uniform(i));
        size_sum += set.size();
        if (set.empty()) ++nulls;
        if (set.contains(tests[s][i].label)) ++covered;
      }
      const auto n = static_cast<double>(tests[s].size());
      cells.push_back({eps, s, static_cast<double>(size_sum) / n,
                       static_cast<double>(nulls) / n,
                       static_cast<double>(covered) / n});
    }
  }
  return cells;
}

std::array<double, kSeverityLevels> entropy_sweep(const ModelProfile& profile,
                                                  std::size_t count,
                                                  std::uint64_t seed) {
  profile.validate();
  if (count < 1) throw ConstraintError("entropy sweep needs count >= 1");
  std::array<double, kSeverityLevels> means{};
  for (int s = 0; s < kSeverityLevels; ++s) {
    const auto stream = sample_stream(
        {profile, s, count, derive_seed(seed, 0x30 + static_cast<std::uint64_t>(s))});
    double sum = 0.0;
    for (const auto& sample : stream) sum += nse(sample.probs);
    means[s] = sum / static_cast<double>(count);
  }
  return means;
}

}  // namespace cpmon
