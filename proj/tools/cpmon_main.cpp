// Command-line front end: calibrate | predict | monitor | simulate | report.

#include <functional>
#include <iostream>

#include "CLI11.hpp"

#include "cpmon/cli.hpp"
#include "cpmon/error.hpp"

namespace {

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const cpmon::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cpmon::kExitParseError;
  } catch (const cpmon::ConstraintError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cpmon::kExitConstraintError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Conformal prediction sets with streaming out-of-calibration "
      "monitoring"};
  app.require_subcommand(1);
  int rc = 0;

  cpmon::cli::CalibrateOptions cal;
  auto* calibrate = app.add_subcommand(
      "calibrate", "Fit a conformal threshold from labeled softmax records");
  calibrate->add_option("--input", cal.input, "Labeled sample records (JSONL)")
      ->required();
  calibrate->add_option("--epsilon", cal.epsilon, "Target error rate in (0, 1)")
      ->required();
  calibrate->add_option("--seed", cal.seed, "RNG seed")->envname("CPMON_SEED");
  calibrate->add_option("--out", cal.out, "Model file to write")->required();
  calibrate->add_option("--temperature", cal.temperature,
                        "off, fit, or a fixed logit divisor");
  calibrate->add_option("--baseline-input", cal.baseline_input,
                        "Held-out split for baseline set-size statistics");
  calibrate->add_flag("--strict", cal.strict,
                      "Treat a saturated threshold as an error");
  calibrate->callback([&] {
    rc = guarded([&] { return cpmon::cli::run_calibrate(cal, std::cout, std::cerr); });
  });

  cpmon::cli::PredictOptions pred;
  auto* predict = app.add_subcommand(
      "predict", "Generate prediction sets at the calibrated threshold");
  predict->add_option("--model", pred.model, "Calibration model file")->required();
  predict->add_option("--input", pred.input, "Sample records (JSONL)")->required();
  predict->add_option("--seed", pred.seed, "RNG seed")->envname("CPMON_SEED");
  predict->add_option("--out", pred.out, "Prediction records to write")->required();
  predict->add_option("--temperature", pred.temperature,
                      "from-model, off, or a fixed logit divisor");
  predict->callback([&] {
    rc = guarded([&] { return cpmon::cli::run_predict(pred, std::cout, std::cerr); });
  });

  cpmon::cli::MonitorOptions mon;
  auto* monitor = app.add_subcommand(
      "monitor", "Stream records through the set-size out-of-calibration detector");
  monitor->add_option("--model", mon.model, "Calibration model file")->required();
  monitor->add_option("--input", mon.input, "Sample records (JSONL)")->required();
  monitor->add_option("--seed", mon.seed, "RNG seed")->envname("CPMON_SEED");
  monitor->add_option("--window", mon.window, "Sliding window length");
  monitor->add_option("--ratio", mon.ratio, "Alarm ratio over the baseline");
  monitor->add_option("--min-fill", mon.min_fill,
                      "Samples required before the alarm may fire (default: window)");
  monitor->add_flag("--latched", mon.latched, "Keep the alarm raised once triggered");
  monitor->add_option("--out", mon.out, "Verdict records (default: stdout)");
  monitor->callback([&] {
    rc = guarded([&] { return cpmon::cli::run_monitor(mon, std::cout, std::cerr); });
  });

  cpmon::cli::SimulateOptions sim;
  auto* simulate = app.add_subcommand(
      "simulate", "Emit synthetic labeled softmax records");
  simulate->add_option("--profile", sim.profile,
                       "uncertain | intermediate | overconfident");
  simulate->add_option("--severity", sim.severity, "Noise severity 0-5");
  simulate->add_option("--count", sim.count, "Records to emit");
  simulate->add_option("--seed", sim.seed, "RNG seed")->envname("CPMON_SEED");
  simulate->add_option("--class-count", sim.class_count, "Classes per record");
  simulate->add_option("--profile-config", sim.profile_config,
                       "JSON file overriding the profile preset")
      ->envname("CPMON_PROFILE_CONFIG");
  simulate->add_option("--out", sim.out, "Sample records to write")->required();
  simulate->callback([&] {
    rc = guarded([&] { return cpmon::cli::run_simulate(sim, std::cout, std::cerr); });
  });

  auto* report = app.add_subcommand("report", "Emit CSV tables for plotting");
  report->require_subcommand(1);

  cpmon::cli::ReportSweepOptions sweep;
  auto* report_sweep = report->add_subcommand(
      "sweep", "Average set size, null rate, and coverage per severity and epsilon");
  report_sweep->add_option("--profile", sweep.profile,
                           "uncertain | intermediate | overconfident");
  report_sweep->add_option("--profile-config", sweep.profile_config,
                           "JSON file overriding the profile preset")
      ->envname("CPMON_PROFILE_CONFIG");
  report_sweep->add_option("--class-count", sweep.class_count, "Classes per record");
  report_sweep
      ->add_option("--epsilons", sweep.epsilons, "Comma-separated error rates")
      ->delimiter(',');
  report_sweep->add_option("--n-cal", sweep.n_cal, "Calibration samples");
  report_sweep->add_option("--n-test", sweep.n_test, "Test samples per severity");
  report_sweep->add_option("--seed", sweep.seed, "RNG seed")->envname("CPMON_SEED");
  report_sweep->add_option("--out", sweep.out, "CSV file to write")->required();
  report_sweep->callback([&] {
    rc = guarded(
        [&] { return cpmon::cli::run_report_sweep(sweep, std::cout, std::cerr); });
  });

  cpmon::cli::ReportEntropyOptions entropy;
  auto* report_entropy = report->add_subcommand(
      "entropy", "Mean normalized softmax entropy per severity");
  report_entropy->add_option("--profile", entropy.profile,
                             "uncertain | intermediate | overconfident");
  report_entropy->add_option("--profile-config", entropy.profile_config,
                             "JSON file overriding the profile preset")
      ->envname("CPMON_PROFILE_CONFIG");
  report_entropy->add_option("--class-count", entropy.class_count,
                             "Classes per record");
  report_entropy->add_option("--count", entropy.count, "Draws per severity");
  report_entropy->add_option("--seed", entropy.seed, "RNG seed")
      ->envname("CPMON_SEED");
  report_entropy->add_option("--out", entropy.out, "CSV file to write")->required();
  report_entropy->callback([&] {
    rc = guarded([&] {
      return cpmon::cli::run_report_entropy(entropy, std::cout, std::cerr);
    });
  });

  cpmon::cli::ReportHistogramOptions hist;
  auto* report_hist = report->add_subcommand(
      "histogram", "Largest-softmax histogram with threshold markers");
  report_hist->add_option("--input", hist.input, "Sample records (JSONL)")
      ->required();
  report_hist->add_option("--model", hist.models,
                          "Model file whose threshold becomes a marker (repeatable)");
  report_hist->add_option("--bins", hist.bins, "Histogram bins over [0, 1]");
  report_hist->add_option("--temperature", hist.temperature,
                          "from-model, off, or a fixed logit divisor");
  report_hist->add_option("--out", hist.out, "CSV file to write")->required();
  report_hist->callback([&] {
    rc = guarded([&] {
      return cpmon::cli::run_report_histogram(hist, std::cout, std::cerr);
    });
  });

  cpmon::cli::ReportSetsOptions sets;
  auto* report_sets = report->add_subcommand(
      "sets", "Summarize a prediction-record stream");
  report_sets->add_option("--input", sets.input, "Prediction records (JSONL)")
      ->required();
  report_sets->add_option("--out", sets.out, "CSV file to write")->required();
  report_sets->callback([&] {
    rc = guarded(
        [&] { return cpmon::cli::run_report_sets(sets, std::cout, std::cerr); });
  });

  CLI11_PARSE(app, argc, argv);
  return rc;
}
