#include "cpmon/cli.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "cpmon/detector.hpp"
#include "cpmon/error.hpp"
#include "cpmon/metrics.hpp"
#include "cpmon/records.hpp"
#include "cpmon/rng.hpp"
#include "cpmon/simulator.hpp"

namespace cpmon::cli {

namespace {

using nlohmann::json;

std::string csv_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConstraintError("cannot write output file '" + path + "'");
  return out;
}

// off | fit/from-model | fixed value.  `keyword` names the non-numeric,
// non-off spelling the caller accepts.
double parse_temperature(const std::string& arg, const std::string& keyword,
                         bool* is_keyword) {
  *is_keyword = false;
  if (arg == "off") return 1.0;
  if (arg == keyword) {
    *is_keyword = true;
    return 1.0;
  }
  try {
    std::size_t used = 0;
    const double t = std::stod(arg, &used);
    if (used != arg.size()) throw std::invalid_argument(arg);
    if (!(t > 0.0)) throw ConstraintError("temperature must be > 0");
    return t;
  } catch (const std::invalid_argument&) {
    throw ConstraintError("temperature must be 'off', '" + keyword +
                          "', or a positive number");
  } catch (const std::out_of_range&) {
    throw ConstraintError("temperature out of range");
  }
}

ProbVector record_to_probs(const SampleRecord& record, double temperature) {
  if (record.probs) return ProbVector::from(*record.probs);
  return softmax(*record.logits, temperature);
}

ModelProfile load_profile(const std::string& name, const std::string& config_path,
                          std::size_t class_count) {
  if (config_path.empty()) {
    return ModelProfile::preset(profile_kind_from_name(name), class_count);
  }
  std::ifstream in(config_path);
  if (!in) throw ConstraintError("cannot open profile config '" + config_path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid profile config: ") + e.what());
  }
  if (!j.is_object() || !j.contains("kind")) {
    throw ParseError("profile config must be an object with a 'kind' field");
  }
  const auto kind = profile_kind_from_name(j["kind"].get<std::string>());
  ModelProfile profile =
      ModelProfile::preset(kind, j.value("class_count", class_count));
  const auto load_curve = [&j](const char* field,
                               std::array<double, kSeverityLevels>& curve) {
    if (!j.contains(field)) return;
    const auto values = j[field].get<std::vector<double>>();
    if (values.size() != kSeverityLevels) {
      throw ParseError(std::string(field) + " must list exactly 6 severity values");
    }
    std::copy(values.begin(), values.end(), curve.begin());
  };
  load_curve("accuracy", profile.accuracy);
  load_curve("concentration", profile.concentration);
  load_curve("top_mass", profile.top_mass);
  if (j.contains("top_mass_floor")) {
    profile.top_mass_floor = j["top_mass_floor"].get<double>();
  }
  profile.validate();
  return profile;
}

}  // namespace

int run_calibrate(const CalibrateOptions& options, std::ostream& out,
                  std::ostream& err) {
  const auto records = read_sample_file(options.input);
  if (records.empty()) throw ConstraintError("empty calibration set");

  bool fit_requested = false;
  double temperature =
      parse_temperature(options.temperature, "fit", &fit_requested);
  if (fit_requested) {
    std::vector<LogitSample> logit_data;
    logit_data.reserve(records.size());
    for (const auto& r : records) {
      if (!r.logits) {
        throw ConstraintError("--temperature fit needs logits in every record");
      }
      if (!r.label) throw ConstraintError("calibration records need labels");
      logit_data.push_back({*r.logits, *r.label});
    }
    temperature = fit_temperature(logit_data);
  }

  const auto to_samples = [&](const std::vector<SampleRecord>& recs) {
    std::vector<LabeledSample> samples;
    samples.reserve(recs.size());
    for (std::size_t i = 0; i < recs.size(); ++i) {
      if (!recs[i].label) {
        throw ConstraintError("record " + std::to_string(i + 1) +
                              " has no label; calibration needs labels");
      }
      samples.push_back({record_to_probs(recs[i], temperature), *recs[i].label});
    }
    return samples;
  };

  const std::vector<LabeledSample> samples = to_samples(records);
  std::vector<LabeledSample> baseline;
  if (!options.baseline_input.empty()) {
    baseline = to_samples(read_sample_file(options.baseline_input));
  }

  CalibrationModel model =
      calibrate(samples, options.epsilon, options.seed,
                baseline.empty() ? nullptr : &baseline);
  model.temperature = temperature;

  if (model.saturated) {
    err << "warning: quantile index " << model.k_index << " exceeds N="
        << model.n_cal << "; threshold saturated at 1.0\n";
    if (options.strict) return kExitSaturatedThreshold;
  }

  write_model_file(model, options.out);

  json summary;
  summary["n_cal"] = model.n_cal;
  summary["k_index"] = model.k_index;
  summary["q_threshold"] = model.q_threshold;
  summary["baseline_avg_size"] = model.baseline_avg_size;
  summary["baseline_null_rate"] = model.baseline_null_rate;
  summary["saturated"] = model.saturated;
  summary["epsilon"] = model.epsilon;
  summary["class_count"] = model.class_count;
  summary["temperature"] = model.temperature;
  out << summary.dump() << '\n';
  return kExitOk;
}

int run_predict(const PredictOptions& options, std::ostream& out,
                std::ostream& /*err*/) {
  const CalibrationModel model = read_model_file(options.model);
  bool from_model = false;
  double temperature =
      parse_temperature(options.temperature, "from-model", &from_model);
  if (from_model) temperature = model.temperature;

  const auto records = read_sample_file(options.input);
  auto sink = open_output(options.out);
  const CounterRng rng(options.seed, RngStream::predict);

  std::size_t size_sum = 0;
  std::size_t nulls = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const ProbVector probs = record_to_probs(records[i], temperature);
    const PredictionSet set = predict_set(model, probs, rng.uniform(i));
    json j;
    j["index"] = i;
    if (records[i].id) j["id"] = *records[i].id;
    j["classes"] = set.classes;
    j["size"] = set.size();
    j["largest_softmax"] = largest_softmax(probs);
    j["nse"] = nse(probs);
    sink << j.dump() << '\n';
    size_sum += set.size();
    if (set.empty()) ++nulls;
  }

  json summary;
  summary["records"] = records.size();
  if (!records.empty()) {
    const auto n = static_cast<double>(records.size());
    summary["avg_set_size"] = static_cast<double>(size_sum) / n;
    summary["null_rate"] = static_cast<double>(nulls) / n;
  }
  out << summary.dump() << '\n';
  return kExitOk;
}

int run_monitor(const MonitorOptions& options, std::ostream& out,
                std::ostream& /*err*/) {
  const CalibrationModel model = read_model_file(options.model);
  const auto records = read_sample_file(options.input);

  DetectorConfig config;
  config.window = options.window;
  config.ratio_threshold = options.ratio;
  config.min_fill = options.min_fill;
  config.latched = options.latched;
  Detector detector(model, config);

  std::ofstream file_sink;
  if (!options.out.empty()) file_sink = open_output(options.out);
  std::ostream& verdicts = options.out.empty() ? out : file_sink;

  const CounterRng rng(options.seed, RngStream::monitor);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const ProbVector probs = record_to_probs(records[i], model.temperature);
    const PredictionSet set = predict_set(model, probs, rng.uniform(i));
    const Verdict verdict = detector.update(set);
    json j;
    j["index"] = i;
    if (records[i].id) j["id"] = *records[i].id;
    j["size"] = set.size();
    j["window_mean"] = detector.window_mean();
    j["verdict"] = verdict == Verdict::ok ? "ok" : "out_of_calibration";
    verdicts << j.dump() << '\n';
  }

  const DetectorSummary s = detector.summary();
  json summary;
  summary["samples_seen"] = s.samples_seen;
  summary["window_mean"] = s.window_mean;
  if (s.has_null_rate) summary["window_null_rate"] = s.window_null_rate;
  summary["alarm"] = s.alarm;
  summary["insufficient_fill"] = s.insufficient_fill;
  summary["baseline_avg_size"] = s.baseline_avg_size;
  summary["ratio_threshold"] = s.ratio_threshold;
  out << summary.dump() << '\n';
  return kExitOk;
}

int run_simulate(const SimulateOptions& options, std::ostream& out,
                 std::ostream& /*err*/) {
  const ModelProfile profile =
      load_profile(options.profile, options.profile_config, options.class_count);
  const auto samples =
      sample_stream({profile, options.severity, options.count, options.seed});

  auto sink = open_output(options.out);
  for (const auto& sample : samples) {
    json j;
    j["label"] = sample.label;
    j["probs"] = sample.probs.values();
    sink << j.dump() << '\n';
  }

  json summary;
  summary["written"] = samples.size();
  summary["severity"] = options.severity;
  summary["profile"] = profile_kind_name(profile.kind);
  out << summary.dump() << '\n';
  return kExitOk;
}

int run_report_sweep(const ReportSweepOptions& options, std::ostream& out,
                     std::ostream& /*err*/) {
  const ModelProfile profile =
      load_profile(options.profile, options.profile_config, options.class_count);
  const auto cells = severity_sweep(profile, options.epsilons, options.n_cal,
                                    options.n_test, options.seed);

  auto sink = open_output(options.out);
  sink << "epsilon,severity,avg_set_size,null_rate,coverage\n";
  for (const auto& cell : cells) {
    sink << csv_num(cell.epsilon) << ',' << cell.severity << ','
         << csv_num(cell.avg_set_size) << ',' << csv_num(cell.null_rate) << ','
         << csv_num(cell.coverage) << '\n';
  }

  json summary;
  summary["rows"] = cells.size();
  out << summary.dump() << '\n';
  return kExitOk;
}

int run_report_entropy(const ReportEntropyOptions& options, std::ostream& out,
                       std::ostream& /*err*/) {
  const ModelProfile profile =
      load_profile(options.profile, options.profile_config, options.class_count);
  const auto means = entropy_sweep(profile, options.count, options.seed);

  auto sink = open_output(options.out);
  sink << "severity,mean_nse\n";
  for (int s = 0; s < kSeverityLevels; ++s) {
    sink << s << ',' << csv_num(means[s]) << '\n';
  }

  json summary;
  summary["rows"] = kSeverityLevels;
  out << summary.dump() << '\n';
  return kExitOk;
}

int run_report_histogram(const ReportHistogramOptions& options, std::ostream& out,
                         std::ostream& /*err*/) {
  std::vector<CalibrationModel> models;
  models.reserve(options.models.size());
  for (const auto& path : options.models) models.push_back(read_model_file(path));

  bool from_model = false;
  double temperature =
      parse_temperature(options.temperature, "from-model", &from_model);
  if (from_model) temperature = models.empty() ? 1.0 : models.front().temperature;

  const auto records = read_sample_file(options.input);
  std::vector<ProbVector> stream;
  stream.reserve(records.size());
  for (const auto& r : records) stream.push_back(record_to_probs(r, temperature));

  std::vector<std::pair<std::string, double>> markers;
  for (const auto& model : models) {
    markers.emplace_back("q_1-" + csv_num(model.epsilon), model.q_threshold);
  }
  const Histogram hist =
      largest_softmax_histogram(stream, options.bins, std::move(markers));

  auto sink = open_output(options.out);
  sink << "kind,name,bin_lo,bin_hi,count,value\n";
  for (std::size_t b = 0; b < hist.bin_count; ++b) {
    sink << "bin,," << csv_num(hist.bin_lo(b)) << ',' << csv_num(hist.bin_hi(b))
         << ',' << hist.counts[b] << ",\n";
  }
  for (const auto& [name, value] : hist.markers) {
    sink << "marker," << name << ",,,," << csv_num(value) << '\n';
  }

  json summary;
  summary["observations"] = hist.total();
  summary["markers"] = hist.markers.size();
  out << summary.dump() << '\n';
  return kExitOk;
}

int run_report_sets(const ReportSetsOptions& options, std::ostream& out,
                    std::ostream& /*err*/) {
  std::ifstream in(options.input);
  if (!in) throw ConstraintError("cannot open input file '" + options.input + "'");

  std::size_t records = 0;
  std::size_t size_sum = 0;
  std::size_t nulls = 0;
  double nse_sum = 0.0;
  double largest_sum = 0.0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("size") || !j["size"].is_number_integer()) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": prediction record needs an integer 'size'");
    }
    const auto size = j["size"].get<std::size_t>();
    ++records;
    size_sum += size;
    if (size == 0) ++nulls;
    nse_sum += j.value("nse", 0.0);
    largest_sum += j.value("largest_softmax", 0.0);
  }
  if (records == 0) throw ConstraintError("no prediction records to summarize");

  const auto n = static_cast<double>(records);
  auto sink = open_output(options.out);
  sink << "records,avg_set_size,null_rate,mean_nse,mean_largest_softmax\n";
  sink << records << ',' << csv_num(static_cast<double>(size_sum) / n) << ','
       << csv_num(static_cast<double>(nulls) / n) << ',' << csv_num(nse_sum / n)
       << ',' << csv_num(largest_sum / n) << '\n';

  json summary;
  summary["records"] = records;
  out << summary.dump() << '\n';
  return kExitOk;
}

}  // namespace cpmon::cli
