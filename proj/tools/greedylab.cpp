// greedylab: greedy dictionary approximation experiments.
//
// Exit codes: 0 pass, 1 verification failure, 2 usage error, 3 I/O error.

#include <greedylab/experiments.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

namespace {

constexpr int kPass = 0;
constexpr int kVerificationFailed = 1;
constexpr int kUsage = 2;
constexpr int kIo = 3;

void print_summary(std::ostream& out, const std::string& name, const greedylab::RunReport& report) {
  out << "greedylab " << name << "\n";
  for (const auto& note : report.notes) out << "  " << note << "\n";
  for (const auto& [key, value] : report.metrics) out << "  " << key << " = " << value << "\n";
  for (const auto& [label, ok] : report.checks) out << "  [" << (ok ? "PASS" : "FAIL") << "] " << label << "\n";
  out << "  elapsed_seconds = " << report.seconds << "\n";
}

} // namespace

int main(int argc, char** argv) {
  greedylab::ExperimentConfig config;
  std::string algorithm = "oga";
  std::string format = "csv";
  std::string output;
  double epsilon = 0.0, delta = 0.0;

  CLI::App app{"Greedy dictionary approximation experiments"};
  app.require_subcommand(1);
  std::vector<CLI::App*> subs;
  subs.push_back(app.add_subcommand("ridge2d", "OGA/PGA/RGA on the Heaviside ridge dictionary with a smooth target"));
  subs.push_back(app.add_subcommand("lower-bound", "sharpness of the rate on the dictionary {k^-alpha e_k}"));
  subs.push_back(app.add_subcommand("counterexample", "OGA iterates with unbounded variation norm"));
  subs.push_back(app.add_subcommand("noise", "ridge experiment with Gaussian noise added to the target"));

  CLI::Option* eps_opt = nullptr;
  CLI::Option* delta_opt = nullptr;
  for (CLI::App* sub : subs) {
    sub->add_option("--seed", config.seed, "64-bit RNG seed")->capture_default_str();
    sub->add_option("--num-samples", config.num_samples, "number of sample points N")->capture_default_str();
    sub->add_option("--iterations", config.iterations, "greedy iterations n")->capture_default_str();
    sub->add_option("--algorithm", algorithm, "oga | pga | pga-shrink | rga")
        ->check(CLI::IsMember({"oga", "pga", "pga-shrink", "rga"}))
        ->capture_default_str();
    sub->add_option("--shrinkage", config.shrinkage, "shrinkage s in (0,1] for pga-shrink")->capture_default_str();
    sub->add_option("--alpha", config.alpha, "decay exponent of the sequence dictionary")->capture_default_str();
    auto* e = sub->add_option("--epsilon", epsilon, "single epsilon instead of the sweep {0.2,0.1,0.05,0.02}");
    auto* d = sub->add_option("--delta", delta, "delta (default epsilon/4)");
    if (sub->get_name() == "counterexample") {
      eps_opt = e;
      delta_opt = d;
    }
    sub->add_option("--noise-scale", config.noise_scale, "empirical norm of the added noise")->capture_default_str();
    sub->add_option("--skip-prefix", config.skip_prefix, "initial errors excluded from the rate fit")
        ->capture_default_str();
    sub->add_option("--max-exponent", config.max_exponent, "lower-bound: n runs over 1, 2, ..., 2^max")
        ->capture_default_str();
    sub->add_option("--threads", config.threads, "ridge argmax worker threads (0 = all cores)")->capture_default_str();
    sub->add_option("--output", output, "output path (CSV on stdout when omitted)");
    sub->add_option("--format", format, "csv | svg | both")
        ->check(CLI::IsMember({"csv", "svg", "both"}))
        ->capture_default_str();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  greedylab::RunReport report;
  try {
    config.subcommand = app.get_subcommands().front()->get_name();
    config.algorithm = greedylab::parse_algorithm(algorithm);
    config.format = greedylab::parse_format(format);
    if (eps_opt != nullptr && eps_opt->count() > 0) config.epsilon = epsilon;
    if (delta_opt != nullptr && delta_opt->count() > 0) config.delta = delta;
    if (!output.empty()) config.output = output;
    if (config.format != greedylab::OutputFormat::csv && !config.output)
      throw greedylab::ParameterError("--format svg/both requires --output");
    report = greedylab::run_subcommand(config);
  } catch (const greedylab::ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const greedylab::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kVerificationFailed;
  }

  try {
    namespace fs = std::filesystem;
    if (!config.output) {
      std::cout << greedylab::format_csv(report.table);
      std::cout.flush();
    } else if (config.format == greedylab::OutputFormat::csv) {
      greedylab::emit_csv(report, *config.output);
    } else if (config.format == greedylab::OutputFormat::svg) {
      greedylab::emit_svg(report, *config.output);
    } else {
      fs::path base(*config.output);
      greedylab::emit_csv(report, fs::path(base).replace_extension(".csv").string());
      greedylab::emit_svg(report, fs::path(base).replace_extension(".svg").string());
    }
  } catch (const greedylab::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  }

  for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
  print_summary(config.output ? std::cout : std::cerr, config.subcommand, report);
  return report.passed() ? kPass : kVerificationFailed;
}
