#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cpmon/calibration.hpp"

namespace cpmon {

// One line of the sample wire format: a flat JSON object carrying exactly
// one of "probs" or "logits", plus an optional 0-based "label" and an
// optional "id" string.
struct SampleRecord {
  std::optional<std::vector<double>> probs;
  std::optional<std::vector<double>> logits;
  std::optional<std::size_t> label;
  std::optional<std::string> id;
};

SampleRecord parse_sample_record(const std::string& line);
std::string serialize_sample_record(const SampleRecord& record);

// Reads one record per non-blank line.  Parse failures carry the 1-based
// line number.
std::vector<SampleRecord> read_sample_records(std::istream& in);
std::vector<SampleRecord> read_sample_file(const std::string& path);

// Versioned, human-readable calibration-model document.  Round-trips every
// field losslessly, including the full sorted score list.
std::string serialize_model(const CalibrationModel& model);
CalibrationModel parse_model(const std::string& text);
CalibrationModel read_model_file(const std::string& path);
void write_model_file(const CalibrationModel& model, const std::string& path);

}  // namespace cpmon
