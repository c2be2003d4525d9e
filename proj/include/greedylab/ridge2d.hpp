#pragma once

// Heaviside ridge dictionary {x -> [omega . x + b >= 0]} on a planar sample
// set, with the exact argmax over all halfplane splittings.
//
// Every nontrivial splitting of the points by a closed halfplane is obtained
// from some line through two sample points by taking the strict side of the
// line plus a contiguous run of the on-line points starting at one end. The
// oracle rotates a line around each pivot point, visiting those lines in
// angular order, so one argmax costs O(N^2) after an O(N^2 log N) angular
// sort that depends only on the sample set and is done once.
//
// Values are reported exactly: the winning splitting is re-evaluated as
// (1/N) |sum_{i in S} r_i| summed in increasing index order, a function of the
// set alone. The sweep's running sums only prune candidates, with a rigorous
// rounding bound, so the result does not depend on sweep order or threads.

#include <greedylab/dictionary.hpp>
#include <greedylab/hilbert.hpp>

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

namespace greedylab {

/// (1/N) * sum_{i in captured} r_i, summed in increasing index order.
double split_inner_product(std::span<const double> r, std::span<const int> captured);

class RidgeDictionary2D {
public:
  using Scalar = double;
  using Space = EmpiricalSpace<double>;
  using Vector = Eigen::VectorXd;

  /// Precomputes the angular order around every sample point. `threads`
  /// parallelizes over pivot points (0 = hardware concurrency); results are
  /// identical for every thread count.
  explicit RidgeDictionary2D(SampleSet samples, int threads = 1);

  Space space() const { return Space(samples_.size()); }
  const SampleSet& samples() const { return samples_; }
  int threads() const { return threads_; }

  /// Halfplane maximizing |<sigma_0(omega . x + b), r>| over every distinct
  /// splitting, including the empty and full sets. Ties go to the first
  /// candidate in canonical order: full set, empty set, then by pivot index
  /// and angular position.
  Selection<double> argmax(const Vector& r) const;

  /// Indicator vector of the captured indices.
  Vector realize(const DictionaryElement& e) const;

  /// True iff (omega, offset) captures exactly `atom.captured` on the samples.
  bool consistent(const RidgeAtom& atom) const;

private:
  SampleSet samples_;
  int threads_;
  // Pivot-major, N - 1 entries per pivot: bits 0..29 point index, bit 30 set
  // when the point lies in the lower half-plane around the pivot (its line
  // direction is flipped), bit 31 set on the first entry of each line.
  std::vector<std::uint32_t> order_;
};

/// One-shot convenience: builds the dictionary (including the angular sort)
/// and returns the argmax for r.
Selection<double> ridge2d_argmax(const Eigen::VectorXd& r, const SampleSet& X);

} // namespace greedylab
