#pragma once

// Dictionary elements, finite and sequence dictionaries, and their
// argmax-correlation oracles. The Heaviside ridge dictionary lives in
// ridge2d.hpp.

#include <greedylab/errors.hpp>
#include <greedylab/hilbert.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <concepts>
#include <string>
#include <variant>
#include <vector>

namespace greedylab {

/// Heaviside ridge atom x -> [omega . x + b >= 0], realized on a sample set by
/// the sorted indices it captures.
struct RidgeAtom {
  Eigen::Vector2d omega = Eigen::Vector2d::Zero();
  double offset = 0.0;
  std::vector<int> captured;
};

/// k^{-alpha} e_k, k >= 1.
struct SequenceAtom {
  Eigen::Index k = 1;
};

/// Column of a FiniteDictionary.
struct FiniteAtom {
  Eigen::Index index = 0;
};

using DictionaryElement = std::variant<RidgeAtom, SequenceAtom, FiniteAtom>;

std::string describe(const DictionaryElement& element);

/// Oracle result: the selected atom and |<g, r>|.
template <typename Scalar>
struct Selection {
  DictionaryElement element;
  Scalar value = Scalar(0);
};

/// What the greedy drivers need from a dictionary over `Space`.
template <class D, class Space>
concept DictionaryFor = requires(const D& d, const typename Space::Vector& r, const DictionaryElement& e) {
  { d.argmax(r) } -> std::convertible_to<Selection<typename Space::Scalar>>;
  { d.realize(e) } -> std::convertible_to<typename Space::Vector>;
};

// ----------------------------------------------------------------------
// Finite dictionaries in R^n
// ----------------------------------------------------------------------

template <typename Scalar_>
class FiniteDictionary {
public:
  using Scalar = Scalar_;
  using Space = EuclideanSpace<Scalar>;
  using Vector = typename Space::Vector;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  /// Atoms are the columns of `atoms`; each must have unit norm to 1e-9.
  explicit FiniteDictionary(Matrix atoms, std::vector<std::string> labels = {})
      : atoms_(std::move(atoms)), labels_(std::move(labels)) {
    if (atoms_.cols() == 0) throw ParameterError("finite dictionary needs at least one atom");
    if (!labels_.empty() && static_cast<Eigen::Index>(labels_.size()) != atoms_.cols())
      throw ParameterError("finite dictionary: label count does not match atom count");
    for (Eigen::Index j = 0; j < atoms_.cols(); ++j) {
      using std::abs;
      if (!atoms_.col(j).allFinite() || abs(atoms_.col(j).norm() - Scalar(1)) > Scalar(1e-9))
        throw ParameterError("finite dictionary: atom " + std::to_string(j) + " is not unit norm");
    }
  }

  Space space() const { return Space{atoms_.rows()}; }
  Eigen::Index size() const { return atoms_.cols(); }
  Eigen::Index dimension() const { return atoms_.rows(); }
  const Matrix& atoms() const { return atoms_; }
  auto atom(Eigen::Index j) const { return atoms_.col(j); }
  const std::vector<std::string>& labels() const { return labels_; }

  /// Exhaustive scan; ties go to the smallest index.
  Selection<Scalar> argmax(const Vector& r) const {
    if (r.size() != atoms_.rows()) throw DimensionError("finite_argmax: residual dimension mismatch");
    const Vector corr = (atoms_.transpose() * r).cwiseAbs();
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j < corr.size(); ++j)
      if (corr(j) > corr(best)) best = j;
    return {FiniteAtom{best}, corr(best)};
  }

  Vector realize(const DictionaryElement& e) const {
    const auto* atom = std::get_if<FiniteAtom>(&e);
    if (atom == nullptr || atom->index < 0 || atom->index >= size())
      throw ParameterError("finite dictionary cannot realize " + describe(e));
    return atoms_.col(atom->index);
  }

private:
  Matrix atoms_;
  std::vector<std::string> labels_;
};

template <typename Scalar>
Selection<Scalar> finite_argmax(const typename FiniteDictionary<Scalar>::Vector& r, const FiniteDictionary<Scalar>& D) {
  return D.argmax(r);
}

/// The five-atom dictionary in R^5 on which three OGA steps produce an
/// iterate of large variation norm, together with the target
/// f = (eps/4)(e1 + e2) + e3/2 + delta e5 = (x4 + x5)/2.
struct CounterexampleSetup {
  FiniteDictionary<double> dictionary;
  Eigen::VectorXd target;
  double epsilon;
  double delta;
  double c;
};

/// Requires 0 < epsilon < 1/2 and 0 < delta < epsilon / sqrt(8).
CounterexampleSetup build_counterexample_dictionary(double epsilon, double delta);

// ----------------------------------------------------------------------
// Sequence dictionary {k^{-alpha} e_k} in l^2
// ----------------------------------------------------------------------

template <typename Scalar_>
class SequenceDictionary {
public:
  using Scalar = Scalar_;
  using Space = SequenceSpace<Scalar>;
  using Vector = typename Space::Vector;

  SequenceDictionary(Scalar alpha, Eigen::Index k_max) : alpha_(alpha), k_max_(k_max) {
    if (!(alpha > Scalar(0))) throw ParameterError("sequence dictionary: alpha must be positive");
    if (k_max < 1) throw ParameterError("sequence dictionary: k_max must be at least 1");
  }

  Space space() const { return Space{k_max_}; }
  Scalar alpha() const { return alpha_; }
  Eigen::Index k_max() const { return k_max_; }

  Scalar weight(Eigen::Index k) const {
    using std::pow;
    return pow(static_cast<Scalar>(k), -alpha_);
  }

  /// k maximizing k^{-alpha} |r_k|, smallest k on ties; (1, 0) on an empty
  /// or all-zero support.
  Selection<Scalar> argmax(const Vector& r) const {
    Eigen::Index best_k = 1;
    Scalar best(0);
    for (typename Vector::InnerIterator it(r); it; ++it) {
      const Eigen::Index k = it.index() + 1;
      if (k > k_max_) throw DimensionError("sequence_argmax: residual support exceeds k_max");
      using std::abs;
      const Scalar value = weight(k) * abs(it.value());
      if (value > best) {
        best = value;
        best_k = k;
      }
    }
    return {SequenceAtom{best_k}, best};
  }

  Vector realize(const DictionaryElement& e) const {
    const auto* atom = std::get_if<SequenceAtom>(&e);
    if (atom == nullptr || atom->k < 1 || atom->k > k_max_)
      throw ParameterError("sequence dictionary cannot realize " + describe(e));
    Vector v(k_max_);
    v.insert(atom->k - 1) = weight(atom->k);
    return v;
  }

private:
  Scalar alpha_;
  Eigen::Index k_max_;
};

template <typename Scalar>
Selection<Scalar> sequence_argmax(const Eigen::SparseVector<Scalar>& r, Scalar alpha, Eigen::Index k_max) {
  return SequenceDictionary<Scalar>(alpha, k_max).argmax(r);
}

/// f_N = (1/N) sum_{k=1}^N k^{-alpha} e_k, of unit variation norm over the
/// sequence dictionary.
template <typename Scalar>
Eigen::SparseVector<Scalar> sequence_target(Scalar alpha, Eigen::Index N) {
  using std::pow;
  Eigen::SparseVector<Scalar> f(N);
  f.reserve(N);
  for (Eigen::Index k = 1; k <= N; ++k)
    f.insertBack(k - 1) = pow(static_cast<Scalar>(k), -alpha) / static_cast<Scalar>(N);
  return f;
}

} // namespace greedylab
