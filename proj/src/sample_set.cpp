#include <greedylab/hilbert.hpp>
#include <greedylab/random.hpp>

#include <algorithm>
#include <set>
#include <vector>

namespace greedylab {

namespace {

void check_points(const Eigen::MatrixXd& points) {
  if (points.cols() < 1) throw ParameterError("sample set needs at least one point");
  if (points.rows() < 1) throw ParameterError("sample set points need at least one coordinate");
  if (!points.allFinite() || points.minCoeff() < 0.0 || points.maxCoeff() > 1.0)
    throw ParameterError("sample set coordinates must lie in [0,1]");
  std::set<std::vector<double>> seen;
  for (Eigen::Index i = 0; i < points.cols(); ++i) {
    std::vector<double> key(points.col(i).data(), points.col(i).data() + points.rows());
    if (!seen.insert(std::move(key)).second)
      throw ParameterError("sample set contains duplicate point " + std::to_string(i));
  }
}

} // namespace

SampleSet::SampleSet(Eigen::MatrixXd points, std::uint64_t seed) : points_(std::move(points)), seed_(seed) {
  check_points(points_);
}

SampleSet SampleSet::uniform(Eigen::Index count, Eigen::Index dim, std::uint64_t seed) {
  if (count < 1) throw ParameterError("sample set needs at least one point");
  if (dim < 1) throw ParameterError("sample set dimension must be positive");
  auto rng = make_stream(seed, Stream::sample_points);
  Eigen::MatrixXd points(dim, count);
  std::set<std::vector<double>> seen;
  for (Eigen::Index i = 0; i < count; ++i) {
    std::vector<double> key(static_cast<std::size_t>(dim));
    do {
      for (auto& c : key) c = uniform01(rng);
    } while (!seen.insert(key).second);
    for (Eigen::Index j = 0; j < dim; ++j) points(j, i) = key[static_cast<std::size_t>(j)];
  }
  return SampleSet(std::move(points), seed);
}

} // namespace greedylab
