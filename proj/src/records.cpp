#include "cpmon/records.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "cpmon/error.hpp"

namespace cpmon {

namespace {

using nlohmann::json;

constexpr const char* kModelFormat = "cpmon-calibration-model";
constexpr int kModelVersion = 1;

std::vector<double> number_array(const json& j, const char* field) {
  if (!j.is_array()) throw ParseError(std::string(field) + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) {
      throw ParseError(std::string(field) + " must contain only numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

SampleRecord parse_sample_record(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("record must be a JSON object");

  SampleRecord record;
  if (j.contains("probs")) record.probs = number_array(j["probs"], "probs");
  if (j.contains("logits")) record.logits = number_array(j["logits"], "logits");
  if (record.probs.has_value() == record.logits.has_value()) {
    throw ParseError("record must carry exactly one of probs/logits");
  }
  if (j.contains("label")) {
    const auto& v = j["label"];
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      throw ParseError("label must be a non-negative integer");
    }
    record.label = v.get<std::size_t>();
  }
  if (j.contains("id")) {
    if (!j["id"].is_string()) throw ParseError("id must be a string");
    record.id = j["id"].get<std::string>();
  }
  return record;
}

std::string serialize_sample_record(const SampleRecord& record) {
  json j;
  if (record.probs) j["probs"] = *record.probs;
  if (record.logits) j["logits"] = *record.logits;
  if (record.label) j["label"] = *record.label;
  if (record.id) j["id"] = *record.id;
  return j.dump();
}

std::vector<SampleRecord> read_sample_records(std::istream& in) {
  std::vector<SampleRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      records.push_back(parse_sample_record(line));
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

std::vector<SampleRecord> read_sample_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConstraintError("cannot open input file '" + path + "'");
  return read_sample_records(in);
}

std::string serialize_model(const CalibrationModel& model) {
  json j;
  j["format"] = kModelFormat;
  j["version"] = kModelVersion;
  j["epsilon"] = model.epsilon;
  j["n_cal"] = model.n_cal;
  j["k_index"] = model.k_index;
  j["q_threshold"] = model.q_threshold;
  j["saturated"] = model.saturated;
  j["baseline_avg_size"] = model.baseline_avg_size;
  j["baseline_null_rate"] = model.baseline_null_rate;
  j["class_count"] = model.class_count;
  j["rng_seed"] = model.rng_seed;
  j["temperature"] = model.temperature;
  {
    char buf[19];
    std::snprintf(buf, sizeof(buf), "0x%016llx",
                  static_cast<unsigned long long>(model.calibration_fingerprint));
    j["calibration_fingerprint"] = buf;
  }
  j["scores_sorted"] = model.scores_sorted;
  return j.dump(2);
}

CalibrationModel parse_model(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid model JSON: ") + e.what());
  }
  if (!j.is_object() || j.value("format", "") != kModelFormat) {
    throw ParseError("not a calibration model document");
  }
  if (j.value("version", 0) != kModelVersion) {
    throw ParseError("unsupported model version");
  }
  CalibrationModel model;
  try {
    model.epsilon = j.at("epsilon").get<double>();
    model.n_cal = j.at("n_cal").get<std::size_t>();
    model.k_index = j.at("k_index").get<std::size_t>();
    model.q_threshold = j.at("q_threshold").get<double>();
    model.saturated = j.at("saturated").get<bool>();
    model.baseline_avg_size = j.at("baseline_avg_size").get<double>();
    model.baseline_null_rate = j.at("baseline_null_rate").get<double>();
    model.class_count = j.at("class_count").get<std::size_t>();
    model.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    model.temperature = j.at("temperature").get<double>();
    model.calibration_fingerprint = std::stoull(
        j.at("calibration_fingerprint").get<std::string>(), nullptr, 16);
    model.scores_sorted = j.at("scores_sorted").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed model document: ") + e.what());
  }
  if (!(model.epsilon > 0.0 && model.epsilon < 1.0)) {
    throw ConstraintError("model epsilon must lie in (0, 1)");
  }
  if (model.class_count < 2) {
    throw ConstraintError("model class count must be >= 2");
  }
  if (model.scores_sorted.size() != model.n_cal) {
    throw ConstraintError("model score count disagrees with n_cal");
  }
  for (std::size_t i = 1; i < model.scores_sorted.size(); ++i) {
    if (model.scores_sorted[i] < model.scores_sorted[i - 1]) {
      throw ConstraintError("model scores are not sorted ascending");
    }
  }
  return model;
}

CalibrationModel read_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConstraintError("cannot open model file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

void write_model_file(const CalibrationModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConstraintError("cannot write model file '" + path + "'");
  out << serialize_model(model) << '\n';
}

}  // namespace cpmon
