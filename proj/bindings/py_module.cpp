// Python bindings for the core operations.  Probability vectors cross the
// boundary as plain lists of floats; labeled samples as (probs, label)
// tuples.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cpmon/calibration.hpp"
#include "cpmon/detector.hpp"
#include "cpmon/error.hpp"
#include "cpmon/metrics.hpp"
#include "cpmon/records.hpp"
#include "cpmon/simulator.hpp"

namespace py = pybind11;

namespace {

using cpmon::CalibrationModel;
using cpmon::LabeledSample;
using cpmon::ProbVector;

using PySample = std::pair<std::vector<double>, std::size_t>;

std::vector<LabeledSample> to_samples(const std::vector<PySample>& raw) {
  std::vector<LabeledSample> samples;
  samples.reserve(raw.size());
  for (const auto& [probs, label] : raw) {
    samples.push_back({ProbVector::from(probs), label});
  }
  return samples;
}

std::vector<PySample> from_samples(const std::vector<LabeledSample>& samples) {
  std::vector<PySample> raw;
  raw.reserve(samples.size());
  for (const auto& s : samples) raw.emplace_back(s.probs.values(), s.label);
  return raw;
}

cpmon::ModelProfile profile_by_name(const std::string& kind,
                                    std::size_t class_count) {
  return cpmon::ModelProfile::preset(cpmon::profile_kind_from_name(kind),
                                     class_count);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Conformal prediction sets (randomized class-ranking construction) "
      "with calibration, uncertainty metrics, a synthetic stream simulator, "
      "and a sliding-window out-of-calibration detector.";

  py::register_exception<cpmon::ParseError>(m, "RecordParseError",
                                            PyExc_ValueError);
  py::register_exception<cpmon::ConstraintError>(m, "ConstraintError",
                                                 PyExc_ValueError);

  m.def(
      "prediction_set",
      [](const std::vector<double>& probs, double u, double gamma) {
        return cpmon::prediction_set(ProbVector::from(probs), u, gamma).classes;
      },
      py::arg("probs"), py::arg("u"), py::arg("gamma"),
      "Class indices of the randomized prediction set at threshold gamma.");

  m.def(
      "conformity_score",
      [](const std::vector<double>& probs, std::size_t label, double u) {
        return cpmon::conformity_score(ProbVector::from(probs), label, u);
      },
      py::arg("probs"), py::arg("label"), py::arg("u"),
      "Smallest threshold at which the label enters the prediction set.");

  m.def(
      "nse",
      [](const std::vector<double>& probs) {
        return cpmon::nse(ProbVector::from(probs));
      },
      py::arg("probs"), "Normalized softmax entropy in [0, 1].");

  m.def(
      "softmax",
      [](const std::vector<double>& logits, double temperature) {
        return cpmon::softmax(logits, temperature).values();
      },
      py::arg("logits"), py::arg("temperature") = 1.0);

  m.def(
      "fit_temperature",
      [](const std::vector<std::pair<std::vector<double>, std::size_t>>& data) {
        std::vector<cpmon::LogitSample> samples;
        samples.reserve(data.size());
        for (const auto& [logits, label] : data) samples.push_back({logits, label});
        return cpmon::fit_temperature(samples);
      },
      py::arg("data"),
      "Scalar temperature minimizing the NLL over (logits, label) pairs.");

  py::class_<CalibrationModel>(m, "CalibrationModel")
      .def_readonly("epsilon", &CalibrationModel::epsilon)
      .def_readonly("n_cal", &CalibrationModel::n_cal)
      .def_readonly("k_index", &CalibrationModel::k_index)
      .def_readonly("q_threshold", &CalibrationModel::q_threshold)
      .def_readonly("saturated", &CalibrationModel::saturated)
      .def_readonly("baseline_avg_size", &CalibrationModel::baseline_avg_size)
      .def_readonly("baseline_null_rate", &CalibrationModel::baseline_null_rate)
      .def_readonly("class_count", &CalibrationModel::class_count)
      .def_readonly("temperature", &CalibrationModel::temperature)
      .def_readonly("scores_sorted", &CalibrationModel::scores_sorted)
      .def("predict_set",
           [](const CalibrationModel& model, const std::vector<double>& probs,
              double u) {
             return cpmon::predict_set(model, ProbVector::from(probs), u).classes;
           },
           py::arg("probs"), py::arg("u"))
      .def("to_json",
           [](const CalibrationModel& model) { return cpmon::serialize_model(model); })
      .def("save", [](const CalibrationModel& model, const std::string& path) {
        cpmon::write_model_file(model, path);
      });

  m.def(
      "calibrate",
      [](const std::vector<PySample>& samples, double epsilon, std::uint64_t seed) {
        return cpmon::calibrate(to_samples(samples), epsilon, seed);
      },
      py::arg("samples"), py::arg("epsilon"), py::arg("seed"));

  m.def("model_from_json",
        [](const std::string& text) { return cpmon::parse_model(text); });
  m.def("load_model",
        [](const std::string& path) { return cpmon::read_model_file(path); });

  m.def(
      "empirical_coverage",
      [](const CalibrationModel& model, const std::vector<PySample>& test,
         std::uint64_t seed, bool strict) {
        return cpmon::empirical_coverage(model, to_samples(test), seed, strict);
      },
      py::arg("model"), py::arg("test"), py::arg("seed"), py::arg("strict") = true);

  py::class_<cpmon::Detector>(m, "Detector")
      .def(py::init([](double baseline, std::size_t window, double ratio,
                       std::size_t min_fill, bool latched) {
             cpmon::DetectorConfig config;
             config.window = window;
             config.ratio_threshold = ratio;
             config.min_fill = min_fill;
             config.latched = latched;
             return cpmon::Detector(baseline, config);
           }),
           py::arg("baseline_avg_size"), py::arg("window") = 500,
           py::arg("ratio") = 1.5, py::arg("min_fill") = 0,
           py::arg("latched") = false)
      .def("update",
           [](cpmon::Detector& d, std::size_t size) {
             return d.update_size(size) == cpmon::Verdict::out_of_calibration;
           },
           py::arg("set_size"), "Returns True while the alarm is raised.")
      .def_property_readonly("alarm", &cpmon::Detector::alarm)
      .def_property_readonly("window_mean", &cpmon::Detector::window_mean)
      .def("summary", [](const cpmon::Detector& d) {
        const cpmon::DetectorSummary s = d.summary();
        py::dict out;
        out["samples_seen"] = s.samples_seen;
        out["window_mean"] = s.window_mean;
        if (s.has_null_rate) out["window_null_rate"] = s.window_null_rate;
        out["alarm"] = s.alarm;
        out["insufficient_fill"] = s.insufficient_fill;
        out["baseline_avg_size"] = s.baseline_avg_size;
        out["ratio_threshold"] = s.ratio_threshold;
        return out;
      });

  m.def(
      "sample_stream",
      [](const std::string& profile, int severity, std::size_t count,
         std::uint64_t seed, std::size_t class_count) {
        return from_samples(cpmon::sample_stream(
            {profile_by_name(profile, class_count), severity, count, seed}));
      },
      py::arg("profile"), py::arg("severity"), py::arg("count"), py::arg("seed"),
      py::arg("class_count") = 10,
      "Synthetic (probs, label) pairs; deterministic in the arguments.");

  m.def(
      "severity_sweep",
      [](const std::string& profile, const std::vector<double>& epsilons,
         std::size_t n_cal, std::size_t n_test, std::uint64_t seed,
         std::size_t class_count) {
        py::list rows;
        for (const auto& cell : cpmon::severity_sweep(
                 profile_by_name(profile, class_count), epsilons, n_cal, n_test,
                 seed)) {
          py::dict row;
          row["epsilon"] = cell.epsilon;
          row["severity"] = cell.severity;
          row["avg_set_size"] = cell.avg_set_size;
          row["null_rate"] = cell.null_rate;
          row["coverage"] = cell.coverage;
          rows.append(row);
        }
        return rows;
      },
      py::arg("profile"), py::arg("epsilons"), py::arg("n_cal"),
      py::arg("n_test"), py::arg("seed"), py::arg("class_count") = 10);

  m.def(
      "entropy_sweep",
      [](const std::string& profile, std::size_t count, std::uint64_t seed,
         std::size_t class_count) {
        const auto means = cpmon::entropy_sweep(profile_by_name(profile, class_count),
                                                count, seed);
        return std::vector<double>(means.begin(), means.end());
      },
      py::arg("profile"), py::arg("count"), py::arg("seed"),
      py::arg("class_count") = 10,
      "Mean normalized softmax entropy per severity 0..5.");

  m.attr("__version__") = "0.1.0";
}
