#pragma once

// Exact geometric predicates on double-precision coordinates.
//
// The orientation test uses a floating-point filter and falls back to
// error-free transformations (two-sum / fma two-product) summed into a
// nonoverlapping expansion. Valid as long as no intermediate product
// underflows, which holds for coordinates in [0,1] that are not subnormal.

#include <cmath>
#include <vector>

namespace greedylab::exact {

struct TwoTerm {
  double hi;
  double lo;
};

inline TwoTerm two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  const double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}

inline TwoTerm two_product(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

/// Adds x into a nonoverlapping expansion sorted by increasing magnitude.
inline void grow_expansion(std::vector<double>& partials, double x) {
  std::size_t i = 0;
  for (double y : partials) {
    if (std::abs(x) < std::abs(y)) std::swap(x, y);
    const double hi = x + y;
    const double lo = y - (hi - x);
    if (lo != 0.0) partials[i++] = lo;
    x = hi;
  }
  partials.resize(i);
  if (x != 0.0) partials.push_back(x);
}

/// Sign (-1, 0, +1) of the exact sum of `terms`.
inline int exact_sum_sign(const double* terms, std::size_t n) {
  std::vector<double> partials;
  partials.reserve(8);
  for (std::size_t i = 0; i < n; ++i) grow_expansion(partials, terms[i]);
  if (partials.empty()) return 0;
  return partials.back() > 0.0 ? 1 : -1;
}

namespace detail {

inline int orient2d_exact(double ax, double ay, double bx, double by, double cx, double cy) {
  const TwoTerm u[2] = {two_sum(bx, -ax), two_sum(by, -ay)};
  const TwoTerm v[2] = {two_sum(cx, -ax), two_sum(cy, -ay)};
  // (u.x)(v.y) - (u.y)(v.x), every partial product split exactly.
  double terms[16];
  int n = 0;
  const double ux[2] = {u[0].hi, u[0].lo}, uy[2] = {u[1].hi, u[1].lo};
  const double vx[2] = {v[0].hi, v[0].lo}, vy[2] = {v[1].hi, v[1].lo};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const TwoTerm p = two_product(ux[i], vy[j]);
      const TwoTerm q = two_product(uy[i], vx[j]);
      terms[n++] = p.hi;
      terms[n++] = p.lo;
      terms[n++] = -q.hi;
      terms[n++] = -q.lo;
    }
  }
  return exact_sum_sign(terms, 16);
}

} // namespace detail

/// Sign of the cross product (b - a) x (c - a): +1 if c lies strictly to the
/// left of the directed line a -> b, -1 if strictly right, 0 if collinear.
inline int orient2d(double ax, double ay, double bx, double by, double cx, double cy) {
  const double left = (bx - ax) * (cy - ay);
  const double right = (by - ay) * (cx - ax);
  const double det = left - right;
  constexpr double kEps = 0x1p-53;
  constexpr double kErrBound = (3.0 + 16.0 * kEps) * kEps;
  const double bound = kErrBound * (std::abs(left) + std::abs(right));
  if (det > bound) return 1;
  if (-det > bound) return -1;
  return detail::orient2d_exact(ax, ay, bx, by, cx, cy);
}

} // namespace greedylab::exact
