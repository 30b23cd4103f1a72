#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace cpmon::cli {

// Each run_* implements one CLI subcommand against already-parsed options
// and returns a process exit code.  Keeping them flag-free makes them
// testable without spawning a process.

struct CalibrateOptions {
  std::string input;
  std::string out;
  std::string baseline_input;          // optional held-out baseline split
  double epsilon = 0.1;
  std::uint64_t seed = 0;
  std::string temperature = "off";     // off | fit | <number>
  bool strict = false;                 // saturated threshold becomes an error
};
int run_calibrate(const CalibrateOptions& options, std::ostream& out,
                  std::ostream& err);

struct PredictOptions {
  std::string model;
  std::string input;
  std::string out;
  std::uint64_t seed = 0;
  std::string temperature = "from-model";  // from-model | off | <number>
};
int run_predict(const PredictOptions& options, std::ostream& out,
                std::ostream& err);

struct MonitorOptions {
  std::string model;
  std::string input;
  std::string out;  // verdict records; empty writes them to stdout
  std::uint64_t seed = 0;
  std::size_t window = 500;
  double ratio = 1.5;
  std::size_t min_fill = 0;  // 0 means "same as window"
  bool latched = false;
};
int run_monitor(const MonitorOptions& options, std::ostream& out,
                std::ostream& err);

struct SimulateOptions {
  std::string profile = "uncertain";
  std::string profile_config;  // JSON file overriding the preset
  int severity = 0;
  std::size_t count = 1000;
  std::uint64_t seed = 0;
  std::size_t class_count = 10;
  std::string out;
};
int run_simulate(const SimulateOptions& options, std::ostream& out,
                 std::ostream& err);

struct ReportSweepOptions {
  std::string profile = "uncertain";
  std::string profile_config;
  std::size_t class_count = 10;
  std::vector<double> epsilons;
  std::size_t n_cal = 2000;
  std::size_t n_test = 10000;
  std::uint64_t seed = 0;
  std::string out;
};
int run_report_sweep(const ReportSweepOptions& options, std::ostream& out,
                     std::ostream& err);

struct ReportEntropyOptions {
  std::string profile = "uncertain";
  std::string profile_config;
  std::size_t class_count = 10;
  std::size_t count = 10000;
  std::uint64_t seed = 0;
  std::string out;
};
int run_report_entropy(const ReportEntropyOptions& options, std::ostream& out,
                       std::ostream& err);

struct ReportHistogramOptions {
  std::string input;
  std::vector<std::string> models;  // threshold markers, one per model file
  std::size_t bins = 50;
  std::string temperature = "from-model";
  std::string out;
};
int run_report_histogram(const ReportHistogramOptions& options, std::ostream& out,
                         std::ostream& err);

struct ReportSetsOptions {
  std::string input;  // output of `predict`
  std::string out;
};
int run_report_sets(const ReportSetsOptions& options, std::ostream& out,
                    std::ostream& err);

}  // namespace cpmon::cli
