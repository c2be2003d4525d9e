#pragma once

// Greedy iteration schemes over any dictionary exposing an argmax-correlation
// oracle: orthogonal (OGA), pure (PGA), pure with shrinkage, and relaxed
// (RGA). Every step appends a StepRecord to the state's history.

#include <greedylab/dictionary.hpp>
#include <greedylab/errors.hpp>
#include <greedylab/hilbert.hpp>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace greedylab {

enum class Algorithm { oga, pga, pga_shrink, rga };

enum class RunStatus {
  running,
  completed,  ///< requested number of iterations reached
  converged,  ///< oracle correlation at or below the stop tolerance
  stalled,    ///< OGA selected an atom numerically inside the current span
};

std::string to_string(Algorithm a);
std::string to_string(RunStatus s);
/// Accepts "oga", "pga", "pga-shrink", "rga"; throws ParameterError otherwise.
Algorithm parse_algorithm(const std::string& name);

inline constexpr double kDefaultStopTolerance = 1e-13;

template <typename Scalar>
struct StepRecord {
  int k = 0;
  DictionaryElement atom;
  Scalar correlation = Scalar(0);  ///< |<g_k, r_{k-1}>|
  Scalar residual_norm = Scalar(0);
  /// ||(I - P_{k-1}) g_k||, OGA only (NaN otherwise).
  Scalar orth_component_norm = std::numeric_limits<Scalar>::quiet_NaN();
  /// f_k = alpha f_{k-1} + beta g_k, RGA only (NaN otherwise).
  Scalar alpha = std::numeric_limits<Scalar>::quiet_NaN();
  Scalar beta = std::numeric_limits<Scalar>::quiet_NaN();
};

template <class Space>
struct GreedyState {
  using Scalar = typename Space::Scalar;
  using Vector = typename Space::Vector;

  Space space;
  Algorithm algorithm = Algorithm::oga;
  Scalar shrinkage = Scalar(1);
  Vector target;
  Vector iterate;   ///< f_k
  Vector residual;  ///< r_k = f - f_k
  OrthoBasis<Space> basis;  ///< OGA only
  std::vector<StepRecord<Scalar>> history;
  RunStatus status = RunStatus::running;

  int iteration() const { return static_cast<int>(history.size()); }
};

template <class Space>
GreedyState<Space> make_greedy_state(const Space& space, Algorithm algorithm, const typename Space::Vector& f,
                                     typename Space::Scalar shrinkage = 1) {
  using Scalar = typename Space::Scalar;
  if (!space.conforms(f)) throw DimensionError("greedy: target does not belong to the dictionary's space");
  if (!space.all_finite(f)) throw NumericError("greedy: non-finite target");
  if (algorithm == Algorithm::pga) shrinkage = Scalar(1);
  if (!(shrinkage > Scalar(0) && shrinkage <= Scalar(1))) throw ParameterError("greedy: shrinkage must lie in (0, 1]");
  GreedyState<Space> S;
  S.space = space;
  S.algorithm = algorithm;
  S.shrinkage = shrinkage;
  S.target = f;
  S.iterate = space.zero();
  S.residual = f;
  return S;
}

namespace detail {

template <class Space, class D>
bool select_or_converge(GreedyState<Space>& S, const D& dictionary, typename Space::Scalar stop_tolerance,
                        Selection<typename Space::Scalar>& out) {
  out = dictionary.argmax(S.residual);
  if (!(out.value > stop_tolerance)) {
    S.status = RunStatus::converged;
    return false;
  }
  return true;
}

} // namespace detail

/// g_k = argmax |<g, r_{k-1}>|, f_k = orthogonal projection of f onto
/// span(g_1..g_k).
template <class Space, DictionaryFor<Space> D>
RunStatus oga_step(GreedyState<Space>& S, const D& dictionary,
                   typename Space::Scalar stop_tolerance = kDefaultStopTolerance) {
  using Scalar = typename Space::Scalar;
  if (S.algorithm != Algorithm::oga) throw ParameterError("oga_step on a " + to_string(S.algorithm) + " state");
  if (S.status != RunStatus::running) return S.status;
  Selection<Scalar> sel;
  if (!detail::select_or_converge(S, dictionary, stop_tolerance, sel)) return S.status;

  const auto g = dictionary.realize(sel.element);
  const ExtendResult<Scalar> ext = orthonormal_extend(S.space, S.basis, g);
  if (!ext.accepted) {
    S.status = RunStatus::stalled;
    return S.status;
  }
  const auto& q = S.basis.q.back();
  const Scalar c = S.space.inner(S.residual, q);
  S.residual -= c * q;
  S.iterate += c * q;

  StepRecord<Scalar> rec;
  rec.k = S.iteration() + 1;
  rec.atom = std::move(sel.element);
  rec.correlation = sel.value;
  rec.residual_norm = norm(S.space, S.residual);
  rec.orth_component_norm = ext.component_norm;
  S.history.push_back(std::move(rec));
  return S.status;
}

/// f_k = f_{k-1} + s <g_k, r_{k-1}> g_k with the raw (unnormalized) atom.
template <class Space, DictionaryFor<Space> D>
RunStatus pga_step(GreedyState<Space>& S, const D& dictionary, typename Space::Scalar shrinkage,
                   typename Space::Scalar stop_tolerance = kDefaultStopTolerance) {
  using Scalar = typename Space::Scalar;
  if (S.algorithm != Algorithm::pga && S.algorithm != Algorithm::pga_shrink)
    throw ParameterError("pga_step on a " + to_string(S.algorithm) + " state");
  if (!(shrinkage > Scalar(0) && shrinkage <= Scalar(1))) throw ParameterError("pga_step: shrinkage must lie in (0, 1]");
  if (S.status != RunStatus::running) return S.status;
  Selection<Scalar> sel;
  if (!detail::select_or_converge(S, dictionary, stop_tolerance, sel)) return S.status;

  const auto g = dictionary.realize(sel.element);
  const Scalar step = shrinkage * S.space.inner(g, S.residual);
  S.iterate += step * g;
  S.residual -= step * g;

  StepRecord<Scalar> rec;
  rec.k = S.iteration() + 1;
  rec.atom = std::move(sel.element);
  rec.correlation = sel.value;
  rec.residual_norm = norm(S.space, S.residual);
  S.history.push_back(std::move(rec));
  return S.status;
}

namespace detail {

template <typename Scalar>
struct RelaxedCoefficients {
  Scalar alpha;
  Scalar beta;
};

/// Least squares min ||f - alpha F - beta g|| from the 2x2 normal equations;
/// falls back to the 1-D problem in g when F and g are (nearly) parallel.
template <class Space>
RelaxedCoefficients<typename Space::Scalar> relaxed_coefficients(const Space& space, const typename Space::Vector& f,
                                                                 const typename Space::Vector& F,
                                                                 const typename Space::Vector& g) {
  using Scalar = typename Space::Scalar;
  const Scalar a11 = space.inner(F, F);
  const Scalar a12 = space.inner(F, g);
  const Scalar a22 = space.inner(g, g);
  const Scalar b1 = space.inner(f, F);
  const Scalar b2 = space.inner(f, g);
  const Scalar det = a11 * a22 - a12 * a12;
  if (!(a22 > Scalar(0))) return {Scalar(1), Scalar(0)};
  if (!(det > Scalar(1e-12) * a11 * a22)) return {Scalar(0), b2 / a22};
  return {(b1 * a22 - b2 * a12) / det, (a11 * b2 - a12 * b1) / det};
}

template <class Space>
void apply_relaxed(GreedyState<Space>& S, Selection<typename Space::Scalar> sel, const typename Space::Vector& g,
                   const RelaxedCoefficients<typename Space::Scalar>& ab) {
  using Scalar = typename Space::Scalar;
  S.iterate = (ab.alpha * S.iterate + ab.beta * g).eval();
  S.residual = S.target - S.iterate;

  StepRecord<Scalar> rec;
  rec.k = S.iteration() + 1;
  rec.atom = std::move(sel.element);
  rec.correlation = sel.value;
  rec.residual_norm = norm(S.space, S.residual);
  rec.alpha = ab.alpha;
  rec.beta = ab.beta;
  S.history.push_back(std::move(rec));
}

} // namespace detail

/// g_k chosen by correlation with r_{k-1}; then (alpha_k, beta_k) minimize
/// ||f - alpha f_{k-1} - beta g_k|| exactly.
template <class Space, DictionaryFor<Space> D>
RunStatus rga_step(GreedyState<Space>& S, const D& dictionary,
                   typename Space::Scalar stop_tolerance = kDefaultStopTolerance) {
  using Scalar = typename Space::Scalar;
  if (S.algorithm != Algorithm::rga) throw ParameterError("rga_step on a " + to_string(S.algorithm) + " state");
  if (S.status != RunStatus::running) return S.status;
  Selection<Scalar> sel;
  if (!detail::select_or_converge(S, dictionary, stop_tolerance, sel)) return S.status;
  const auto g = dictionary.realize(sel.element);
  const auto ab = detail::relaxed_coefficients(S.space, S.target, S.iterate, g);
  detail::apply_relaxed(S, std::move(sel), g, ab);
  return S.status;
}

/// RGA with the joint minimization over the atom: every atom of a finite
/// dictionary is tried with its optimal (alpha, beta); smallest residual wins,
/// ties to the smallest index.
template <typename Scalar>
RunStatus rga_step_exhaustive(GreedyState<EuclideanSpace<Scalar>>& S, const FiniteDictionary<Scalar>& dictionary,
                              Scalar stop_tolerance = kDefaultStopTolerance) {
  if (S.algorithm != Algorithm::rga) throw ParameterError("rga_step_exhaustive on a " + to_string(S.algorithm) + " state");
  if (S.status != RunStatus::running) return S.status;
  Eigen::Index best = -1;
  Scalar best_norm = std::numeric_limits<Scalar>::infinity();
  detail::RelaxedCoefficients<Scalar> best_ab{Scalar(0), Scalar(0)};
  for (Eigen::Index j = 0; j < dictionary.size(); ++j) {
    const typename FiniteDictionary<Scalar>::Vector g = dictionary.atom(j);
    const auto ab = detail::relaxed_coefficients(S.space, S.target, S.iterate, g);
    const Scalar r = (S.target - ab.alpha * S.iterate - ab.beta * g).norm();
    if (r < best_norm) {
      best_norm = r;
      best = j;
      best_ab = ab;
    }
  }
  const Scalar current = S.residual.norm();
  if (!(current - best_norm > stop_tolerance)) {
    S.status = RunStatus::converged;
    return S.status;
  }
  using std::abs;
  const typename FiniteDictionary<Scalar>::Vector g = dictionary.atom(best);
  Selection<Scalar> sel{FiniteAtom{best}, abs(g.dot(S.residual))};
  detail::apply_relaxed(S, std::move(sel), g, best_ab);
  return S.status;
}

/// Runs until `iterations` steps, convergence or a stall. Never throws on a
/// degenerate target; the terminal status says why it stopped.
template <class Space, DictionaryFor<Space> D>
GreedyState<Space>& run(GreedyState<Space>& S, const D& dictionary, int iterations,
                        typename Space::Scalar stop_tolerance = kDefaultStopTolerance) {
  if (iterations < 1) throw ParameterError("greedy run needs at least one iteration");
  while (S.status == RunStatus::running && S.iteration() < iterations) {
    switch (S.algorithm) {
    case Algorithm::oga: oga_step(S, dictionary, stop_tolerance); break;
    case Algorithm::pga:
    case Algorithm::pga_shrink: pga_step(S, dictionary, S.shrinkage, stop_tolerance); break;
    case Algorithm::rga: rga_step(S, dictionary, stop_tolerance); break;
    }
  }
  if (S.status == RunStatus::running) S.status = RunStatus::completed;
  return S;
}

template <class D>
  requires DictionaryFor<D, typename D::Space>
GreedyState<typename D::Space> run(Algorithm algorithm, const D& dictionary, const typename D::Vector& f,
                                   int iterations, typename D::Scalar stop_tolerance = kDefaultStopTolerance,
                                   typename D::Scalar shrinkage = 1) {
  GreedyState<typename D::Space> S = make_greedy_state(dictionary.space(), algorithm, f, shrinkage);
  run(S, dictionary, iterations, stop_tolerance);
  return S;
}

/// Cumulative sums of ||(I - P_{k-1}) g_k||^{-2} over the OGA history.
template <class Space>
std::vector<typename Space::Scalar> packing_sum(const GreedyState<Space>& S) {
  using Scalar = typename Space::Scalar;
  if (S.algorithm != Algorithm::oga) throw ParameterError("packing_sum is defined for OGA runs only");
  if (S.history.empty()) throw ParameterError("packing_sum needs at least one completed step");
  std::vector<Scalar> sums;
  sums.reserve(S.history.size());
  Scalar acc(0);
  for (const auto& rec : S.history) {
    acc += Scalar(1) / (rec.orth_component_norm * rec.orth_component_norm);
    sums.push_back(acc);
  }
  return sums;
}

} // namespace greedylab
