#pragma once

// Convergence-order fits, the variation norm over finite dictionaries, and
// verification routines for the lower-bound constructions.

#include <greedylab/dictionary.hpp>
#include <greedylab/greedy.hpp>
#include <greedylab/hilbert.hpp>
#include <greedylab/random.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace greedylab {

// ----------------------------------------------------------------------
// Rate estimation
// ----------------------------------------------------------------------

/// Least-squares line log(error) = intercept + slope * log(n).
struct RateEstimate {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int skip_prefix = 0;
  int points = 0;

  /// Estimated convergence order, i.e. error ~ n^{-order}.
  double order() const { return -slope; }
};

/// Fits errors[n-1] against n = skip_prefix+1 .. size (1-based, natural log).
/// Throws NumericError on a nonpositive error and ParameterError when fewer
/// than three points remain.
RateEstimate fit_rate(std::span<const double> errors, int skip_prefix = 10);

/// Log-log least squares of y against x over all points (x, y > 0).
RateEstimate fit_loglog(std::span<const double> x, std::span<const double> y);

// ----------------------------------------------------------------------
// Variation norm over a finite dictionary
// ----------------------------------------------------------------------

struct VariationNormResult {
  double value = std::numeric_limits<double>::infinity();
  Eigen::VectorXd coefficients;  ///< minimizing witness, one entry per atom
  bool feasible = false;
};

/// min sum |a_i| subject to sum a_i g_i = f, where g_i are the columns of
/// `atoms`. Exact: enumerates the basic solutions (column subsets of size
/// rank(atoms) that are linearly independent) and keeps the smallest l1 mass.
/// Cost grows as C(atoms, rank); meant for at most a few dozen atoms.
VariationNormResult variation_norm_finite(const Eigen::VectorXd& f, const Eigen::MatrixXd& atoms);

inline VariationNormResult variation_norm_finite(const Eigen::VectorXd& f, const FiniteDictionary<double>& D) {
  return variation_norm_finite(f, D.atoms());
}

/// Variation norm over {k^{-alpha} e_k}: the atoms are orthogonal, so the
/// representation is unique and the norm is sum_k k^alpha |f_k|.
double sequence_variation_norm(const Eigen::SparseVector<double>& f, double alpha);

// ----------------------------------------------------------------------
// Verification of the lower-bound constructions
// ----------------------------------------------------------------------

struct CounterexampleReport {
  double epsilon = 0.0;
  double delta = 0.0;
  std::vector<Eigen::Index> selected;        ///< atom indices picked by three OGA steps (0-based)
  bool selection_ok = false;                 ///< selected == (x3, x2, x1)
  Eigen::VectorXd residual;                  ///< r_3
  double residual_error = 0.0;               ///< max |r_3 - delta e5|
  bool residual_ok = false;                  ///< residual_error <= 1e-10
  Eigen::VectorXd iterate;                   ///< f_3
  double a4_minus_a5 = 0.0;                  ///< from <f_3, e4> = c (a4 - a5)
  double a4_plus_a5 = 0.0;                   ///< from <f_3, e5> = delta (a4 + a5)
  bool x4_x5_unused = false;
  Eigen::Vector3d closed_form_coefficients;  ///< coefficients of (eps/4)(e1+e2) + e3/2 over x1, x2, x3
  double closed_form_norm = 0.0;             ///< their l1 mass
  double variation_norm = 0.0;               ///< ||f_3||_K1 of the OGA iterate
  VariationNormResult variation;
  bool variation_matches_closed_form = false;
  double bound = 0.0;                        ///< sqrt(1 - eps^2) / eps
  bool bound_ok = false;                     ///< variation_norm >= bound
  std::vector<std::string> failures;

  bool passed() const { return failures.empty(); }
};

/// Three OGA steps on the five-atom construction, checked against the
/// expected selection order, residual, and coefficient closed forms.
CounterexampleReport verify_counterexample(double epsilon, double delta);

/// Closed-form coefficients of (eps/4)(e1 + e2) + e3/2 over x1, x2, x3.
Eigen::Vector3d counterexample_coefficients(double epsilon);

struct LowerBoundReport {
  double alpha = 0.0;
  int n = 0;
  int N = 0;
  double residual_norm = 0.0;
  double closed_form_norm = 0.0;  ///< sqrt(sum_{k=n+1}^{2n} k^{-2 alpha}) / N
  double bound = 0.0;             ///< 2^{-(1+alpha)} n^{-1/2-alpha}
  double ratio = 0.0;             ///< residual_norm / bound
  double max_coordinate_error = 0.0;
  bool selection_in_order = false;  ///< g_k = k^{-alpha} e_k
  bool residual_ok = false;
  bool bound_ok = false;
  std::vector<std::string> failures;

  bool passed() const { return failures.empty(); }
};

/// n OGA steps on f_{2n} over the sequence dictionary.
LowerBoundReport verify_lower_bound(double alpha, int n);

// ----------------------------------------------------------------------
// Noise robustness
// ----------------------------------------------------------------------

struct NoiseReport {
  double noise_scale = 0.0;
  double noise_norm_sq = 0.0;     ///< ||f - h||^2 as realized
  std::vector<double> excess;     ///< b_n = ||f_n - f||^2 - ||f - h||^2, n = 1..
  double initial_excess = 0.0;
  double final_excess = 0.0;
  double final_error = 0.0;       ///< ||f_n - f||
  bool eventually_below_initial = false;
  std::optional<RateEstimate> excess_decay;  ///< log-log fit of the positive tail
  RunStatus status = RunStatus::running;
};

/// Gaussian noise at the sample points from the noise stream of `seed`, scaled
/// to empirical norm `noise_scale`.
Eigen::VectorXd sample_noise(Eigen::Index num_samples, double noise_scale, std::uint64_t seed);

/// Summarizes an OGA run on f = h + noise.
NoiseReport summarize_noise_run(const GreedyState<EmpiricalSpace<double>>& state, const Eigen::VectorXd& h,
                                double noise_scale, int skip_prefix);

/// Runs OGA on f = h + noise and tracks the excess error over the noise level.
template <class D>
  requires DictionaryFor<D, EmpiricalSpace<double>>
NoiseReport noise_robustness_check(const D& dictionary, const Eigen::VectorXd& h, double noise_scale, int iterations,
                                   std::uint64_t seed, int skip_prefix = 10,
                                   GreedyState<EmpiricalSpace<double>>* state_out = nullptr) {
  if (!(noise_scale >= 0.0)) throw ParameterError("noise_scale must be nonnegative");
  const EmpiricalSpace<double> space = dictionary.space();
  if (!space.conforms(h)) throw DimensionError("noise check: h does not match the sample set");
  Eigen::VectorXd f = h;
  if (noise_scale > 0.0) f += sample_noise(h.size(), noise_scale, seed);
  auto state = run(Algorithm::oga, dictionary, f, iterations);
  NoiseReport report = summarize_noise_run(state, h, noise_scale, skip_prefix);
  if (state_out != nullptr) *state_out = std::move(state);
  return report;
}

} // namespace greedylab
