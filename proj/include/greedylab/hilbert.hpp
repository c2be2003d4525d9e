#pragma once

// Ambient Hilbert spaces, the empirical sample set, and incremental
// orthonormalization of selected atoms.

#include <greedylab/errors.hpp>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace greedylab {

// ----------------------------------------------------------------------
// Sample sets
// ----------------------------------------------------------------------

/// N distinct points in [0,1]^d, stored one point per column.
class SampleSet {
public:
  /// Draws `count` i.i.d. uniform points from the sample-point stream of
  /// `seed`. Bitwise duplicates are redrawn.
  static SampleSet uniform(Eigen::Index count, Eigen::Index dim, std::uint64_t seed);

  /// Wraps explicit points; throws ParameterError if a coordinate falls
  /// outside [0,1], two points coincide, or there are no points.
  explicit SampleSet(Eigen::MatrixXd points, std::uint64_t seed = 0);

  Eigen::Index size() const { return points_.cols(); }
  Eigen::Index dim() const { return points_.rows(); }
  std::uint64_t seed() const { return seed_; }
  const Eigen::MatrixXd& points() const { return points_; }
  auto point(Eigen::Index i) const { return points_.col(i); }

private:
  Eigen::MatrixXd points_;
  std::uint64_t seed_;
};

// ----------------------------------------------------------------------
// Spaces
// ----------------------------------------------------------------------
//
// A space bundles the vector representation with its inner product. All
// algorithms below are written against this small interface:
//   Vector, Scalar, inner(u, v), zero(), conforms(v), all_finite(v).

/// R^n with the standard dot product.
template <typename Scalar_>
struct EuclideanSpace {
  using Scalar = Scalar_;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Eigen::Index dimension = 0;

  Scalar inner(const Vector& u, const Vector& v) const { return u.dot(v); }
  Vector zero() const { return Vector::Zero(dimension); }
  bool conforms(const Vector& v) const { return v.size() == dimension; }
  bool all_finite(const Vector& v) const { return v.allFinite(); }
};

/// Functions sampled on N points with <u,v> = (1/N) sum_i u_i v_i.
template <typename Scalar_>
struct EmpiricalSpace {
  using Scalar = Scalar_;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Eigen::Index num_samples = 0;

  explicit EmpiricalSpace(Eigen::Index n = 0) : num_samples(n) {}
  explicit EmpiricalSpace(const SampleSet& X) : num_samples(X.size()) {}

  Scalar inner(const Vector& u, const Vector& v) const {
    return u.dot(v) / static_cast<Scalar>(num_samples);
  }
  Vector zero() const { return Vector::Zero(num_samples); }
  bool conforms(const Vector& v) const { return v.size() == num_samples; }
  bool all_finite(const Vector& v) const { return v.allFinite(); }
};

/// Finitely supported elements of l^2. Eigen stores coordinate k >= 1 at
/// index k - 1; `capacity` bounds the largest usable k.
template <typename Scalar_>
struct SequenceSpace {
  using Scalar = Scalar_;
  using Vector = Eigen::SparseVector<Scalar>;

  Eigen::Index capacity = 0;

  Scalar inner(const Vector& u, const Vector& v) const { return u.dot(v); }
  Vector zero() const { return Vector(capacity); }
  bool conforms(const Vector& v) const { return v.size() == capacity; }
  bool all_finite(const Vector& v) const {
    for (typename Vector::InnerIterator it(v); it; ++it)
      if (!std::isfinite(it.value())) return false;
    return true;
  }
};

template <class Space>
typename Space::Scalar norm(const Space& space, const typename Space::Vector& v) {
  using std::sqrt;
  return sqrt(space.inner(v, v));
}

/// Sparse sequence vector from 1-based (k, value) pairs.
template <typename Scalar>
Eigen::SparseVector<Scalar> make_sequence(Eigen::Index capacity,
                                          const std::vector<std::pair<Eigen::Index, Scalar>>& entries) {
  Eigen::SparseVector<Scalar> v(capacity);
  for (const auto& [k, value] : entries) {
    if (k < 1 || k > capacity) throw DimensionError("sequence index " + std::to_string(k) + " outside 1.." + std::to_string(capacity));
    v.coeffRef(k - 1) += value;
  }
  return v;
}

/// (1/N) sum_i u_i v_i over the points of X.
template <typename DerivedU, typename DerivedV>
typename DerivedU::Scalar empirical_inner_product(const Eigen::MatrixBase<DerivedU>& u,
                                                  const Eigen::MatrixBase<DerivedV>& v,
                                                  const SampleSet& X) {
  if (u.size() != X.size() || v.size() != X.size())
    throw DimensionError("empirical inner product: vectors of length " + std::to_string(u.size()) + " and " +
                         std::to_string(v.size()) + " on " + std::to_string(X.size()) + " samples");
  using Scalar = typename DerivedU::Scalar;
  return u.dot(v) / static_cast<Scalar>(X.size());
}

/// Sum over common indices of u_k v_k. Vectors may have different capacities.
template <typename Scalar>
Scalar sequence_inner_product(const Eigen::SparseVector<Scalar>& u, const Eigen::SparseVector<Scalar>& v) {
  typename Eigen::SparseVector<Scalar>::InnerIterator a(u), b(v);
  Scalar sum(0);
  while (a && b) {
    if (a.index() < b.index()) {
      ++a;
    } else if (b.index() < a.index()) {
      ++b;
    } else {
      sum += a.value() * b.value();
      ++a;
      ++b;
    }
  }
  return sum;
}

// ----------------------------------------------------------------------
// Orthonormal basis of selected atoms
// ----------------------------------------------------------------------

/// Gram-Schmidt vectors q_1..q_k of the accepted atoms g_1..g_k together with
/// the upper-triangular R such that g_j = sum_{i<=j} R(i,j) q_i. The diagonal
/// R(k,k) is the norm of the component of g_k orthogonal to g_1..g_{k-1}.
template <class Space>
struct OrthoBasis {
  using Scalar = typename Space::Scalar;
  using Vector = typename Space::Vector;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  std::vector<Vector> q;
  Matrix r;
  Scalar drop_tolerance = Scalar(1e-10);

  Eigen::Index size() const { return static_cast<Eigen::Index>(q.size()); }
  bool empty() const { return q.empty(); }
};

template <typename Scalar>
struct ExtendResult {
  bool accepted = false;
  /// Norm of the component of the atom orthogonal to the previous span.
  Scalar component_norm = Scalar(0);
};

/// Appends the normalized orthogonal component of `g` to `basis` when its norm
/// exceeds the drop tolerance; otherwise leaves `basis` untouched and reports
/// the rejected norm. Classical Gram-Schmidt with one reorthogonalization pass.
template <class Space>
ExtendResult<typename Space::Scalar> orthonormal_extend(const Space& space, OrthoBasis<Space>& basis,
                                                        const typename Space::Vector& g) {
  using Scalar = typename Space::Scalar;
  using Vector = typename Space::Vector;
  if (!space.conforms(g)) throw DimensionError("orthonormal_extend: atom does not belong to the basis space");
  if (!space.all_finite(g)) throw NumericError("orthonormal_extend: non-finite atom");

  const Eigen::Index k = basis.size();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> coeffs = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(k);
  Vector w = g;
  for (int pass = 0; pass < 2; ++pass) {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> h(k);
    for (Eigen::Index i = 0; i < k; ++i) h(i) = space.inner(basis.q[i], w);
    for (Eigen::Index i = 0; i < k; ++i) w -= h(i) * basis.q[i];
    coeffs += h;
  }
  const Scalar component = norm(space, w);
  if (!(component > basis.drop_tolerance)) return {false, component};

  basis.q.push_back(w / component);
  basis.r.conservativeResize(k + 1, k + 1);
  basis.r.row(k).setZero();
  basis.r.col(k).head(k) = coeffs;
  basis.r(k, k) = component;
  return {true, component};
}

template <class Space>
struct Projection {
  typename Space::Vector projection;
  typename Space::Vector residual;
};

/// Orthogonal projection of f onto span(basis) and the residual f - Pf.
template <class Space>
Projection<Space> project_and_residual(const Space& space, const OrthoBasis<Space>& basis,
                                       const typename Space::Vector& f) {
  if (!space.conforms(f)) throw DimensionError("project_and_residual: target does not belong to the basis space");
  typename Space::Vector projection = space.zero();
  for (const auto& q : basis.q) projection += space.inner(f, q) * q;
  typename Space::Vector residual = f - projection;
  return {std::move(projection), std::move(residual)};
}

template <typename Scalar>
struct ExpansionCoefficients {
  /// Coefficients with respect to the accepted atoms, in selection order.
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> coefficients;
  Scalar l1 = Scalar(0);
};

/// Coefficients a with f = sum_k a_k g_k, from R a = (<f, q_i>)_i by back
/// substitution. Throws ResidualTooLarge if f is farther than `tolerance`
/// from span(basis).
template <class Space>
ExpansionCoefficients<typename Space::Scalar> coefficients_wrt_atoms(const Space& space, const OrthoBasis<Space>& basis,
                                                                     const typename Space::Vector& f,
                                                                     typename Space::Scalar tolerance = 1e-8) {
  using Scalar = typename Space::Scalar;
  if (!space.conforms(f)) throw DimensionError("coefficients_wrt_atoms: target does not belong to the basis space");
  const Eigen::Index k = basis.size();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> c(k);
  typename Space::Vector residual = f;
  for (Eigen::Index i = 0; i < k; ++i) {
    c(i) = space.inner(f, basis.q[i]);
    residual -= c(i) * basis.q[i];
  }
  const Scalar distance = norm(space, residual);
  if (!(distance <= tolerance))
    throw ResidualTooLarge("coefficients_wrt_atoms: target lies " + std::to_string(static_cast<double>(distance)) +
                           " away from the span of the selected atoms");
  ExpansionCoefficients<Scalar> out;
  out.coefficients = k == 0 ? c : Eigen::Matrix<Scalar, Eigen::Dynamic, 1>(basis.r.template triangularView<Eigen::Upper>().solve(c));
  out.l1 = out.coefficients.cwiseAbs().sum();
  return out;
}

} // namespace greedylab
