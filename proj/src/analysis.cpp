#include <greedylab/analysis.hpp>

#include <algorithm>
#include <numeric>
#include <sstream>

namespace greedylab {

// ----------------------------------------------------------------------
// Rate estimation
// ----------------------------------------------------------------------

RateEstimate fit_loglog(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionError("fit_loglog: abscissae and values differ in length");
  if (x.size() < 3) throw ParameterError("rate fit needs at least three points");
  const std::size_t m = x.size();
  Eigen::VectorXd lx(m), ly(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(y[i]))
      throw NumericError("rate fit requires positive finite values");
    lx(i) = std::log(x[i]);
    ly(i) = std::log(y[i]);
  }
  const double mx = lx.mean();
  const double my = ly.mean();
  const Eigen::VectorXd cx = lx.array() - mx;
  const Eigen::VectorXd cy = ly.array() - my;
  const double sxx = cx.squaredNorm();
  if (!(sxx > 0.0)) throw ParameterError("rate fit needs at least two distinct abscissae");
  RateEstimate est;
  est.slope = cx.dot(cy) / sxx;
  est.intercept = my - est.slope * mx;
  const double ss_tot = cy.squaredNorm();
  const double ss_res = (cy - est.slope * cx).squaredNorm();
  est.r_squared = ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 1.0;
  est.points = static_cast<int>(m);
  return est;
}

RateEstimate fit_rate(std::span<const double> errors, int skip_prefix) {
  if (skip_prefix < 0) throw ParameterError("skip_prefix must be nonnegative");
  for (double e : errors)
    if (!(e > 0.0)) throw NumericError("fit_rate: errors must be positive");
  const std::size_t skip = static_cast<std::size_t>(skip_prefix);
  if (errors.size() < skip + 3)
    throw ParameterError("fit_rate: need at least three errors after skipping " + std::to_string(skip_prefix));
  std::vector<double> n(errors.size() - skip);
  std::iota(n.begin(), n.end(), static_cast<double>(skip + 1));
  RateEstimate est = fit_loglog(n, errors.subspan(skip));
  est.skip_prefix = skip_prefix;
  return est;
}

// ----------------------------------------------------------------------
// Variation norm
// ----------------------------------------------------------------------

namespace {

constexpr double kSpanTolerance = 1e-9;
constexpr double kRankThreshold = 1e-10;

// Visits every k-subset of {0..m-1} in lexicographic order.
template <class Fn>
void for_each_subset(int m, int k, Fn&& fn) {
  std::vector<int> idx(static_cast<std::size_t>(k));
  std::iota(idx.begin(), idx.end(), 0);
  if (k > m) return;
  while (true) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == m - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

} // namespace

VariationNormResult variation_norm_finite(const Eigen::VectorXd& f, const Eigen::MatrixXd& atoms) {
  if (f.size() != atoms.rows()) throw DimensionError("variation_norm_finite: target dimension does not match atoms");
  if (!f.allFinite() || !atoms.allFinite()) throw NumericError("variation_norm_finite: non-finite input");
  const int m = static_cast<int>(atoms.cols());
  VariationNormResult out;
  out.coefficients = Eigen::VectorXd::Zero(m);

  if (f.norm() <= kSpanTolerance) {
    out.value = 0.0;
    out.feasible = true;
    return out;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> full(atoms);
  full.setThreshold(kRankThreshold);
  const int rank = static_cast<int>(full.rank());
  if (rank == 0) return out;
  if ((atoms * full.solve(f) - f).norm() > kSpanTolerance) return out;

  Eigen::MatrixXd sub(atoms.rows(), rank);
  for_each_subset(m, rank, [&](const std::vector<int>& idx) {
    for (int j = 0; j < rank; ++j) sub.col(j) = atoms.col(idx[j]);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sub);
    qr.setThreshold(kRankThreshold);
    if (qr.rank() < rank) return;
    const Eigen::VectorXd a = qr.solve(f);
    if ((sub * a - f).norm() > kSpanTolerance) return;
    const double l1 = a.cwiseAbs().sum();
    if (l1 < out.value) {
      out.value = l1;
      out.feasible = true;
      out.coefficients.setZero();
      for (int j = 0; j < rank; ++j) out.coefficients(idx[j]) = a(j);
    }
  });
  return out;
}

double sequence_variation_norm(const Eigen::SparseVector<double>& f, double alpha) {
  double sum = 0.0;
  for (Eigen::SparseVector<double>::InnerIterator it(f); it; ++it)
    sum += std::pow(static_cast<double>(it.index() + 1), alpha) * std::abs(it.value());
  return sum;
}

// ----------------------------------------------------------------------
// Counterexample with unbounded variation norm
// ----------------------------------------------------------------------

Eigen::Vector3d counterexample_coefficients(double epsilon) {
  const double s = std::sqrt(1.0 - epsilon * epsilon);
  // e1: a1 eps = eps/4; e2: -a1 s + a2 eps = eps/4; e3: a2 s + a3 = 1/2.
  const double a1 = 0.25;
  const double a2 = 0.25 + s / (4.0 * epsilon);
  const double a3 = 0.5 - s / 4.0 - (1.0 - epsilon * epsilon) / (4.0 * epsilon);
  return {a1, a2, a3};
}

CounterexampleReport verify_counterexample(double epsilon, double delta) {
  const CounterexampleSetup setup = build_counterexample_dictionary(epsilon, delta);
  CounterexampleReport rep;
  rep.epsilon = epsilon;
  rep.delta = delta;

  auto state = run(Algorithm::oga, setup.dictionary, setup.target, 3);
  for (const auto& rec : state.history) rep.selected.push_back(std::get<FiniteAtom>(rec.atom).index);
  rep.selection_ok = rep.selected == std::vector<Eigen::Index>{2, 1, 0};
  if (!rep.selection_ok) {
    std::ostringstream msg;
    msg << "selection order";
    for (auto j : rep.selected) msg << " x" << j + 1;
    msg << ", expected x3 x2 x1";
    rep.failures.push_back(msg.str());
  }

  rep.residual = state.residual;
  rep.iterate = state.iterate;
  Eigen::VectorXd expected_residual = Eigen::VectorXd::Zero(5);
  expected_residual(4) = delta;
  rep.residual_error = (rep.residual - expected_residual).cwiseAbs().maxCoeff();
  rep.residual_ok = rep.residual_error <= 1e-10;
  if (!rep.residual_ok)
    rep.failures.push_back("r_3 differs from delta e5 by " + std::to_string(rep.residual_error));

  rep.a4_minus_a5 = rep.iterate(3) / setup.c;
  rep.a4_plus_a5 = rep.iterate(4) / delta;
  rep.x4_x5_unused = std::abs(rep.a4_minus_a5) <= 1e-10 && std::abs(rep.a4_plus_a5) <= 1e-10;
  if (!rep.x4_x5_unused) rep.failures.push_back("f_3 has a nonzero component along x4 or x5");

  rep.closed_form_coefficients = counterexample_coefficients(epsilon);
  rep.closed_form_norm = rep.closed_form_coefficients.cwiseAbs().sum();
  rep.variation = variation_norm_finite(rep.iterate, setup.dictionary);
  rep.variation_norm = rep.variation.value;
  rep.variation_matches_closed_form =
      rep.variation.feasible && std::abs(rep.variation_norm - rep.closed_form_norm) <= 1e-8 * std::max(1.0, rep.closed_form_norm);
  if (!rep.variation_matches_closed_form)
    rep.failures.push_back("variation norm " + std::to_string(rep.variation_norm) + " differs from closed form " +
                           std::to_string(rep.closed_form_norm));

  rep.bound = std::sqrt(1.0 - epsilon * epsilon) / epsilon;
  rep.bound_ok = rep.variation_norm >= rep.bound;
  if (!rep.bound_ok)
    rep.failures.push_back("variation norm " + std::to_string(rep.variation_norm) + " below sqrt(1-eps^2)/eps = " +
                           std::to_string(rep.bound));
  return rep;
}

// ----------------------------------------------------------------------
// Sharpness of the rate on {k^{-alpha} e_k}
// ----------------------------------------------------------------------

LowerBoundReport verify_lower_bound(double alpha, int n) {
  if (!(alpha > 0.0)) throw ParameterError("verify_lower_bound: alpha must be positive");
  if (n < 1) throw ParameterError("verify_lower_bound: n must be at least 1");
  LowerBoundReport rep;
  rep.alpha = alpha;
  rep.n = n;
  rep.N = 2 * n;
  const SequenceDictionary<double> dictionary(alpha, rep.N);
  const Eigen::SparseVector<double> f = sequence_target(alpha, static_cast<Eigen::Index>(rep.N));
  auto state = run(Algorithm::oga, dictionary, f, n, 0.0);

  rep.selection_in_order = state.iteration() == n;
  for (int k = 0; k < state.iteration(); ++k) {
    const auto* atom = std::get_if<SequenceAtom>(&state.history[k].atom);
    if (atom == nullptr || atom->k != k + 1) rep.selection_in_order = false;
  }
  if (!rep.selection_in_order) rep.failures.push_back("atoms not selected in index order");

  // r_n = (1/N) sum_{k=n+1}^{N} k^{-alpha} e_k, coordinatewise.
  const Eigen::VectorXd r = state.residual.toDense();
  double sum_sq = 0.0;
  for (int k = 1; k <= rep.N; ++k) {
    const double expected = k <= n ? 0.0 : std::pow(static_cast<double>(k), -alpha) / rep.N;
    rep.max_coordinate_error = std::max(rep.max_coordinate_error, std::abs(r(k - 1) - expected));
    if (k > n) sum_sq += std::pow(static_cast<double>(k), -2.0 * alpha);
  }
  rep.residual_norm = norm(dictionary.space(), state.residual);
  rep.closed_form_norm = std::sqrt(sum_sq) / rep.N;
  rep.residual_ok = rep.max_coordinate_error <= 1e-12 && std::abs(rep.residual_norm - rep.closed_form_norm) <= 1e-12;
  if (!rep.residual_ok) rep.failures.push_back("residual differs from the closed form");

  rep.bound = std::pow(2.0, -(1.0 + alpha)) * std::pow(static_cast<double>(n), -0.5 - alpha);
  rep.ratio = rep.residual_norm / rep.bound;
  rep.bound_ok = rep.residual_norm >= rep.bound;
  if (!rep.bound_ok) rep.failures.push_back("residual norm below 2^{-(1+alpha)} n^{-1/2-alpha}");
  return rep;
}

// ----------------------------------------------------------------------
// Noise robustness
// ----------------------------------------------------------------------

Eigen::VectorXd sample_noise(Eigen::Index num_samples, double noise_scale, std::uint64_t seed) {
  if (num_samples < 1) throw ParameterError("sample_noise: need at least one sample");
  auto rng = make_stream(seed, Stream::noise);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd z(num_samples);
  for (Eigen::Index i = 0; i < num_samples; ++i) z(i) = gauss(rng);
  const double emp_norm = std::sqrt(z.squaredNorm() / static_cast<double>(num_samples));
  return z * (noise_scale / emp_norm);
}

NoiseReport summarize_noise_run(const GreedyState<EmpiricalSpace<double>>& state, const Eigen::VectorXd& h,
                                double noise_scale, int skip_prefix) {
  NoiseReport rep;
  rep.noise_scale = noise_scale;
  rep.status = state.status;
  const Eigen::VectorXd noise = state.target - h;
  rep.noise_norm_sq = state.space.inner(noise, noise);
  for (const auto& rec : state.history) rep.excess.push_back(rec.residual_norm * rec.residual_norm - rep.noise_norm_sq);
  if (rep.excess.empty()) return rep;
  rep.initial_excess = rep.excess.front();
  rep.final_excess = rep.excess.back();
  rep.final_error = state.history.back().residual_norm;
  rep.eventually_below_initial = rep.excess.size() > 1 && rep.final_excess < rep.initial_excess;

  std::vector<double> n, b;
  for (std::size_t i = static_cast<std::size_t>(std::max(skip_prefix, 0)); i < rep.excess.size(); ++i) {
    if (rep.excess[i] > 0.0) {
      n.push_back(static_cast<double>(i + 1));
      b.push_back(rep.excess[i]);
    }
  }
  if (n.size() >= 3 && n.front() != n.back()) rep.excess_decay = fit_loglog(n, b);
  return rep;
}

} // namespace greedylab
