#include <greedylab/errors.hpp>
#include <greedylab/random.hpp>
#include <greedylab/ridge2d.hpp>

#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace greedylab;

namespace {

Eigen::VectorXd random_residual(Eigen::Index n, std::uint64_t seed) {
  auto rng = make_stream(seed, Stream::test_data);
  std::normal_distribution<double> g;
  Eigen::VectorXd r(n);
  for (auto& x : r) x = g(rng);
  return r;
}

// Points on a coarse dyadic grid: many triples are exactly collinear.
SampleSet grid_points(int n, int cells, std::uint64_t seed) {
  auto rng = make_stream(seed, Stream::test_data);
  std::uniform_int_distribution<int> c(0, cells);
  std::vector<std::pair<int, int>> seen;
  Eigen::MatrixXd P(2, n);
  int filled = 0;
  while (filled < n) {
    const std::pair<int, int> p{c(rng), c(rng)};
    if (std::find(seen.begin(), seen.end(), p) != seen.end()) continue;
    seen.push_back(p);
    P(0, filled) = static_cast<double>(p.first) / cells;
    P(1, filled) = static_cast<double>(p.second) / cells;
    ++filled;
  }
  return SampleSet(P, seed);
}

} // namespace

TEST(RidgeArgmax, CollinearExample) {
  Eigen::MatrixXd P(2, 3);
  P << 0.1, 0.2, 0.9, 0.1, 0.2, 0.9;
  const SampleSet X(P);
  const auto sel = ridge2d_argmax(Eigen::Vector3d(1, 1, -1), X);
  EXPECT_EQ(std::get<RidgeAtom>(sel.element).captured, (std::vector<int>{0, 1}));
  EXPECT_DOUBLE_EQ(sel.value, 2.0 / 3.0);
}

TEST(RidgeArgmax, ZeroAndConstantResiduals) {
  const auto X = SampleSet::uniform(4, 2, 3);
  EXPECT_EQ(ridge2d_argmax(Eigen::VectorXd::Zero(4), X).value, 0.0);
  const auto full = ridge2d_argmax(Eigen::VectorXd::Ones(4), X);
  EXPECT_EQ(full.value, 1.0);
  EXPECT_EQ(std::get<RidgeAtom>(full.element).captured, (std::vector<int>{0, 1, 2, 3}));
}

TEST(RidgeArgmax, SinglePoint) {
  const auto X = SampleSet::uniform(1, 2, 3);
  const auto sel = ridge2d_argmax(Eigen::VectorXd::Constant(1, -2.0), X);
  EXPECT_EQ(sel.value, 2.0);
}

TEST(RidgeArgmax, RejectsWrongDimension) {
  const auto X = SampleSet::uniform(5, 2, 3);
  EXPECT_THROW(ridge2d_argmax(Eigen::VectorXd::Zero(4), X), DimensionError);
  EXPECT_THROW(RidgeDictionary2D(SampleSet::uniform(5, 3, 1)), DimensionError);
}

TEST(RidgeArgmax, MatchesBruteForceOnRandomPoints) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto X = SampleSet::uniform(5 + static_cast<Eigen::Index>(seed % 40), 2, seed);
    const auto r = random_residual(X.size(), seed);
    const auto sel = ridge2d_argmax(r, X);
    const auto oracle = oracle::ridge_bruteforce(r, X);
    EXPECT_EQ(sel.value, oracle.value) << "seed " << seed;
  }
}

TEST(RidgeArgmax, MatchesBruteForceWithCollinearPoints) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto X = grid_points(6 + static_cast<int>(seed % 30), 8, seed);
    auto r = random_residual(X.size(), seed + 100);
    if (seed % 3 == 0) r = r.array().sign();  // many exact ties
    const RidgeDictionary2D D(X);
    const auto sel = D.argmax(r);
    const auto oracle = oracle::ridge_bruteforce(r, X);
    EXPECT_EQ(sel.value, oracle.value) << "seed " << seed;
    EXPECT_TRUE(D.consistent(std::get<RidgeAtom>(sel.element))) << "seed " << seed << " " << describe(sel.element);
  }
}

TEST(RidgeArgmax, WinnerIsRealizableHalfplane) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto X = seed % 2 ? SampleSet::uniform(60, 2, seed) : grid_points(40, 8, seed);
    const RidgeDictionary2D D(X);
    const auto r = random_residual(X.size(), seed);
    const auto sel = D.argmax(r);
    const auto& atom = std::get<RidgeAtom>(sel.element);
    EXPECT_TRUE(D.consistent(atom)) << describe(sel.element);
    EXPECT_TRUE(std::is_sorted(atom.captured.begin(), atom.captured.end()));
    const Eigen::VectorXd g = D.realize(sel.element);
    EXPECT_DOUBLE_EQ(std::abs(D.space().inner(g, r)), sel.value);
    EXPECT_EQ(sel.value, oracle::canonical_split_value(r, atom.captured));
  }
}

TEST(RidgeArgmax, IdenticalAcrossThreadCounts) {
  const auto X = SampleSet::uniform(700, 2, 5);
  const auto r = random_residual(700, 5);
  const auto one = RidgeDictionary2D(X, 1).argmax(r);
  for (int threads : {2, 3, 8}) {
    const auto many = RidgeDictionary2D(X, threads).argmax(r);
    EXPECT_EQ(many.value, one.value);
    const auto& a = std::get<RidgeAtom>(one.element);
    const auto& b = std::get<RidgeAtom>(many.element);
    EXPECT_EQ(a.captured, b.captured);
    EXPECT_EQ(a.omega, b.omega);
    EXPECT_EQ(a.offset, b.offset);
  }
}

TEST(SplitInnerProduct, SumsInIndexOrder) {
  const std::vector<double> r{1.0, 2.0, 4.0, -1.0};
  const std::vector<int> set{0, 2};
  EXPECT_DOUBLE_EQ(split_inner_product(r, set), 5.0 / 4.0);
}
