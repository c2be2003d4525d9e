#include <greedylab/experiments.hpp>

#include <greedylab/ridge2d.hpp>

#include <algorithm>
#include <chrono>
#include <limits>
#include <cmath>
#include <numbers>
#include <sstream>

namespace greedylab {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v, int precision = 6) {
  std::ostringstream out;
  out.precision(precision);
  out << v;
  return out.str();
}

struct RidgeSetup {
  SampleSet samples;
  Eigen::VectorXd target;
  RidgeDictionary2D dictionary;
};

RidgeSetup ridge_setup(const ExperimentConfig& config) {
  SampleSet X = SampleSet::uniform(config.num_samples, 2, config.seed);
  Eigen::VectorXd h = sample_ridge_target(X);
  RidgeDictionary2D dictionary(X, config.threads);
  return {std::move(X), std::move(h), std::move(dictionary)};
}

void add_run_metrics(RunReport& report, const GreedyState<EmpiricalSpace<double>>& state, const ExperimentConfig& config) {
  report.metrics.emplace_back("iterations_completed", state.iteration());
  report.notes.push_back("status: " + to_string(state.status));
  if (!state.history.empty()) report.metrics.emplace_back("final_residual_norm", state.history.back().residual_norm);

  std::vector<double> errors;
  for (const auto& rec : state.history) errors.push_back(rec.residual_norm);
  const bool positive = std::all_of(errors.begin(), errors.end(), [](double e) { return e > 0.0; });
  if (positive && errors.size() >= static_cast<std::size_t>(config.skip_prefix) + 3) {
    report.rate = fit_rate(errors, config.skip_prefix);
    report.metrics.emplace_back("estimated_order", report.rate->order());
    report.metrics.emplace_back("fit_r_squared", report.rate->r_squared);
  } else {
    report.warnings.push_back("rate fit skipped: " + std::to_string(errors.size()) + " errors with skip_prefix " +
                              std::to_string(config.skip_prefix) + " leave fewer than three points");
  }

  // Packing sum over iterations 10..n.
  if (state.algorithm == Algorithm::oga && state.history.size() >= 12) {
    const std::vector<double> sums = packing_sum(state);
    std::vector<double> k, s;
    for (std::size_t i = 9; i < sums.size(); ++i) {
      k.push_back(static_cast<double>(i + 1));
      s.push_back(sums[i]);
    }
    report.metrics.emplace_back("packing_sum_slope", fit_loglog(k, s).slope);
  }
}

PlotSpec run_plot(const std::string& title) {
  return {title, "iteration n", "residual norm", 0, 1};
}

} // namespace

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "svg") return OutputFormat::svg;
  if (name == "both") return OutputFormat::both;
  throw ParameterError("unknown format '" + name + "' (expected csv, svg or both)");
}

void validate(const ExperimentConfig& c) {
  if (c.num_samples < 1) throw ParameterError("--num-samples must be at least 1");
  if (c.iterations < 1) throw ParameterError("--iterations must be at least 1");
  if (!(c.shrinkage > 0.0 && c.shrinkage <= 1.0)) throw ParameterError("--shrinkage must lie in (0, 1]");
  if (!(c.alpha > 0.0)) throw ParameterError("--alpha must be positive");
  if (!(c.noise_scale >= 0.0)) throw ParameterError("--noise-scale must be nonnegative");
  if (c.skip_prefix < 0) throw ParameterError("--skip-prefix must be nonnegative");
  if (c.max_exponent < 0 || c.max_exponent > 20) throw ParameterError("--max-exponent must lie in [0, 20]");
  if (c.threads < 0) throw ParameterError("--threads must be nonnegative");
  if (c.epsilon && !(*c.epsilon > 0.0 && *c.epsilon < 0.5)) throw ParameterError("--epsilon must lie in (0, 1/2)");
  if (c.delta && !(*c.delta > 0.0)) throw ParameterError("--delta must be positive");
}

bool RunReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.second; });
}

double ridge_target(double x, double y) {
  const double pi = std::numbers::pi;
  const double s = std::sin(pi * (x + y));
  return s * s * std::sin(pi * (x - y * y));
}

Eigen::VectorXd sample_ridge_target(const SampleSet& X) {
  if (X.dim() != 2) throw DimensionError("ridge target is defined on planar samples");
  Eigen::VectorXd f(X.size());
  for (Eigen::Index i = 0; i < X.size(); ++i) f(i) = ridge_target(X.points()(0, i), X.points()(1, i));
  return f;
}

Table run_table(const std::vector<StepRecord<double>>& history, bool orthogonal) {
  Table t;
  t.header = {"k", "residual_norm", "correlation", "packing_cumsum"};
  double packing = 0.0;
  for (const auto& rec : history) {
    double cum = std::numeric_limits<double>::quiet_NaN();
    if (orthogonal) {
      packing += 1.0 / (rec.orth_component_norm * rec.orth_component_norm);
      cum = packing;
    }
    t.rows.push_back({static_cast<double>(rec.k), rec.residual_norm, rec.correlation, cum});
  }
  return t;
}

RunReport cmd_ridge2d(const ExperimentConfig& config) {
  validate(config);
  const auto start = Clock::now();
  const RidgeSetup setup = ridge_setup(config);
  auto state = run(config.algorithm, setup.dictionary, setup.target, config.iterations, kDefaultStopTolerance,
                   config.shrinkage);

  RunReport report;
  report.table = run_table(state.history, config.algorithm == Algorithm::oga);
  report.plot = run_plot("ridge2d " + to_string(config.algorithm) + ", N = " + std::to_string(config.num_samples));
  add_run_metrics(report, state, config);
  report.seconds = seconds_since(start);
  return report;
}

RunReport cmd_noise(const ExperimentConfig& config) {
  validate(config);
  const auto start = Clock::now();
  const RidgeSetup setup = ridge_setup(config);
  GreedyState<EmpiricalSpace<double>> state;
  const NoiseReport noise = noise_robustness_check(setup.dictionary, setup.target, config.noise_scale,
                                                   config.iterations, config.seed, config.skip_prefix, &state);

  RunReport report;
  report.table = run_table(state.history, true);
  report.plot = run_plot("ridge2d oga with noise " + fmt(config.noise_scale));
  ExperimentConfig oga = config;
  oga.algorithm = Algorithm::oga;
  add_run_metrics(report, state, oga);
  report.metrics.emplace_back("noise_norm", std::sqrt(noise.noise_norm_sq));
  report.metrics.emplace_back("initial_excess", noise.initial_excess);
  report.metrics.emplace_back("final_excess", noise.final_excess);
  report.metrics.emplace_back("final_error", noise.final_error);
  if (noise.excess_decay) report.metrics.emplace_back("excess_decay_order", noise.excess_decay->order());
  else report.warnings.push_back("excess decay fit skipped: fewer than three positive tail values");
  report.checks.emplace_back("excess eventually below its first value", noise.eventually_below_initial);

  std::ostringstream table;
  table << "excess b_n:";
  for (std::size_t n : {1, 2, 5, 10, 20, 50, 100, 200, 500})
    if (n <= noise.excess.size()) table << " n=" << n << ":" << fmt(noise.excess[n - 1]);
  report.notes.push_back(table.str());
  report.seconds = seconds_since(start);
  return report;
}

RunReport cmd_lower_bound(const ExperimentConfig& config) {
  validate(config);
  const auto start = Clock::now();
  RunReport report;
  report.table.header = {"n", "residual_norm", "bound", "ratio"};
  report.plot = {"OGA on {k^-alpha e_k}, alpha = " + fmt(config.alpha), "n", "residual norm", 0, 1};
  std::vector<double> ns, norms;
  for (int j = 0; j <= config.max_exponent; ++j) {
    const int n = 1 << j;
    const LowerBoundReport rep = verify_lower_bound(config.alpha, n);
    report.table.rows.push_back({static_cast<double>(n), rep.residual_norm, rep.bound, rep.ratio});
    std::string label = "n=" + std::to_string(n);
    for (const auto& f : rep.failures) label += " [" + f + "]";
    report.checks.emplace_back(label, rep.passed());
    ns.push_back(n);
    norms.push_back(rep.residual_norm);
  }
  if (ns.size() >= 3) {
    report.rate = fit_loglog(ns, norms);
    report.metrics.emplace_back("fitted_slope", report.rate->slope);
    report.metrics.emplace_back("expected_slope", -(0.5 + config.alpha));
  }
  report.seconds = seconds_since(start);
  return report;
}

RunReport cmd_counterexample(const ExperimentConfig& config) {
  validate(config);
  const auto start = Clock::now();
  RunReport report;
  report.table.header = {"epsilon", "variation_norm", "bound"};
  report.plot = {"||f_3||_K1 of the OGA iterate", "epsilon", "variation norm", 0, 1};
  const std::vector<double> sweep =
      config.epsilon ? std::vector<double>{*config.epsilon} : std::vector<double>{0.2, 0.1, 0.05, 0.02};
  std::vector<double> norms;
  for (double eps : sweep) {
    const double delta = config.delta.value_or(eps / 4.0);
    const CounterexampleReport rep = verify_counterexample(eps, delta);
    report.table.rows.push_back({eps, rep.variation_norm, rep.bound});
    norms.push_back(rep.variation_norm);

    std::ostringstream trace;
    trace << "eps=" << eps << " delta=" << delta << " selected:";
    for (auto j : rep.selected) trace << " x" << j + 1;
    trace << " |r3-delta e5|=" << fmt(rep.residual_error) << " ||f3||_K1=" << fmt(rep.variation_norm)
          << " closed-form l1=" << fmt(rep.closed_form_norm);
    report.notes.push_back(trace.str());
    std::string label = "eps=" + fmt(eps);
    for (const auto& f : rep.failures) label += " [" + f + "]";
    report.checks.emplace_back(label, rep.passed());
  }
  if (norms.size() > 1) {
    bool increasing = true;
    for (std::size_t i = 1; i < norms.size(); ++i) {
      const bool smaller_eps = sweep[i] < sweep[i - 1];
      if (smaller_eps ? !(norms[i] > norms[i - 1]) : !(norms[i] < norms[i - 1])) increasing = false;
    }
    report.checks.emplace_back("variation norm strictly increases as epsilon decreases", increasing);
  }
  report.seconds = seconds_since(start);
  return report;
}

RunReport run_subcommand(const ExperimentConfig& config) {
  if (config.subcommand == "ridge2d") return cmd_ridge2d(config);
  if (config.subcommand == "lower-bound") return cmd_lower_bound(config);
  if (config.subcommand == "counterexample") return cmd_counterexample(config);
  if (config.subcommand == "noise") return cmd_noise(config);
  throw ParameterError("unknown subcommand '" + config.subcommand + "'");
}

} // namespace greedylab
