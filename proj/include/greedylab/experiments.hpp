#pragma once

// Reproducible experiment runs behind the greedylab CLI, plus their CSV and
// SVG emitters.

#include <greedylab/analysis.hpp>
#include <greedylab/greedy.hpp>
#include <greedylab/hilbert.hpp>

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace greedylab {

enum class OutputFormat { csv, svg, both };

OutputFormat parse_format(const std::string& name);

struct ExperimentConfig {
  std::string subcommand = "ridge2d";
  std::uint64_t seed = 1;
  Eigen::Index num_samples = 5000;
  int iterations = 100;
  Algorithm algorithm = Algorithm::oga;
  double shrinkage = 0.5;  ///< used by pga-shrink only
  double alpha = 0.25;
  std::optional<double> epsilon;  ///< counterexample: single value instead of the sweep
  std::optional<double> delta;    ///< counterexample: defaults to epsilon / 4
  double noise_scale = 0.05;
  int skip_prefix = 10;
  int max_exponent = 6;  ///< lower-bound: n = 1, 2, ..., 2^max_exponent
  int threads = 1;       ///< ridge argmax workers; 0 = hardware concurrency
  std::optional<std::string> output;
  OutputFormat format = OutputFormat::csv;
};

/// Throws ParameterError if a field is outside the range its module accepts.
void validate(const ExperimentConfig& config);

/// Flat numeric table; integer columns are stored as doubles.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  int x_column = 0;
  int y_column = 1;
};

struct RunReport {
  Table table;
  PlotSpec plot;
  std::optional<RateEstimate> rate;  ///< drawn as the fitted line
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<std::pair<std::string, bool>> checks;
  std::vector<std::string> warnings;
  std::vector<std::string> notes;  ///< free-form summary lines
  double seconds = 0.0;

  bool passed() const;
};

/// sin(pi (x + y))^2 sin(pi (x - y^2)).
double ridge_target(double x, double y);
Eigen::VectorXd sample_ridge_target(const SampleSet& X);

/// Table of (k, residual_norm, correlation, packing_cumsum) from a run;
/// packing_cumsum is NaN for non-OGA algorithms.
Table run_table(const std::vector<StepRecord<double>>& history, bool orthogonal);

RunReport cmd_ridge2d(const ExperimentConfig& config);
RunReport cmd_lower_bound(const ExperimentConfig& config);
RunReport cmd_counterexample(const ExperimentConfig& config);
RunReport cmd_noise(const ExperimentConfig& config);
RunReport run_subcommand(const ExperimentConfig& config);

/// CSV text: header line, then one line per row, LF endings, 17 significant
/// digits so every double round-trips.
std::string format_csv(const Table& table);
Table parse_csv(const std::string& text);
std::string render_svg(const RunReport& report);

/// Throw IoError with the path on failure.
void emit_csv(const RunReport& report, const std::string& path);
void emit_svg(const RunReport& report, const std::string& path);

} // namespace greedylab
