#include <greedylab/ridge2d.hpp>

#include <greedylab/exact.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

namespace greedylab {

namespace {

constexpr std::uint32_t kIndexMask = (1u << 30) - 1;
constexpr std::uint32_t kFlipped = 1u << 30;
constexpr std::uint32_t kGroupStart = 1u << 31;

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

template <class Fn>
void parallel_chunks(int threads, Eigen::Index count, Fn&& fn) {
  const int workers = static_cast<int>(std::min<Eigen::Index>(threads, std::max<Eigen::Index>(count, 1)));
  if (workers <= 1) {
    fn(0, Eigen::Index(0), count);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    const Eigen::Index begin = count * w / workers;
    const Eigen::Index end = count * (w + 1) / workers;
    pool.emplace_back([&fn, w, begin, end] { fn(w, begin, end); });
  }
}

struct Point {
  double x;
  double y;
};

// Direction of q around p folded into the half-open upper half-plane.
bool lower_half(const Point& p, const Point& q) {
  return q.y < p.y || (q.y == p.y && q.x < p.x);
}

int orient(const Point& a, const Point& b, const Point& c) {
  return exact::orient2d(a.x, a.y, b.x, b.y, c.x, c.y);
}

// Strict weak order of the other points around pivot p: by folded angle, then
// by position along the (upward-directed) line through p.
struct AngularLess {
  const std::vector<Point>* pts;
  Point p;

  bool operator()(std::uint32_t ea, std::uint32_t eb) const {
    const Point& a = (*pts)[ea & kIndexMask];
    const Point& b = (*pts)[eb & kIndexMask];
    const int sa = (ea & kFlipped) ? -1 : 1;
    const int sb = (eb & kFlipped) ? -1 : 1;
    const int s = sa * sb * orient(p, a, b);
    if (s != 0) return s > 0;
    // Same line through p. Upward direction d; compare positions along d.
    if (a.x != p.x) {
      const bool d_positive_x = (sa > 0) == (a.x > p.x);
      return d_positive_x ? a.x < b.x : a.x > b.x;
    }
    return a.y < b.y;
  }
};

struct Keyed {
  double angle;
  double position;
  std::uint32_t entry;
};

enum class Side : std::uint8_t { left, right };
enum class Run : std::uint8_t { prefix, suffix };

// One candidate splitting: the strict `side` of the line through pivot and
// the group's points, plus `length` on-line points taken from one end.
struct Candidate {
  std::uint32_t pivot;
  std::uint32_t group;  // offset of the group's first entry within the pivot's row
  Side side;
  Run run;
  std::uint32_t length;
  double approx;
};

struct ChunkResult {
  double best_approx = 0.0;
  std::vector<Candidate> survivors;
};

// Points of the line through `pivot` and group `group`, in order along the
// upward line direction; the pivot sits between flipped and unflipped points.
std::vector<int> online_points(std::span<const std::uint32_t> row, std::size_t group, int pivot) {
  std::vector<int> line;
  bool pivot_placed = false;
  std::size_t j = group;
  do {
    if (!(row[j] & kFlipped) && !pivot_placed) {
      line.push_back(pivot);
      pivot_placed = true;
    }
    line.push_back(static_cast<int>(row[j] & kIndexMask));
    ++j;
  } while (j < row.size() && !(row[j] & kGroupStart));
  if (!pivot_placed) line.push_back(pivot);
  return line;
}

} // namespace

double split_inner_product(std::span<const double> r, std::span<const int> captured) {
  double sum = 0.0;
  for (int i : captured) sum += r[static_cast<std::size_t>(i)];
  return sum / static_cast<double>(r.size());
}

RidgeDictionary2D::RidgeDictionary2D(SampleSet samples, int threads)
    : samples_(std::move(samples)), threads_(resolve_threads(threads)) {
  if (samples_.dim() != 2) throw DimensionError("ridge dictionary requires planar samples");
  const Eigen::Index n = samples_.size();
  if (n > static_cast<Eigen::Index>(kIndexMask)) throw ParameterError("ridge dictionary: too many samples");
  std::vector<Point> pts(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) pts[i] = {samples_.points()(0, i), samples_.points()(1, i)};

  const std::size_t width = static_cast<std::size_t>(n - 1);
  order_.assign(static_cast<std::size_t>(n) * width, 0);
  parallel_chunks(threads_, n, [&](int, Eigen::Index begin, Eigen::Index end) {
    std::vector<Keyed> keyed;
    keyed.reserve(width);
    for (Eigen::Index p = begin; p < end; ++p) {
      std::uint32_t* row = order_.data() + static_cast<std::size_t>(p) * width;
      std::size_t j = 0;
      for (Eigen::Index q = 0; q < n; ++q) {
        if (q == p) continue;
        row[j++] = static_cast<std::uint32_t>(q) | (lower_half(pts[p], pts[q]) ? kFlipped : 0u);
      }
      // Sort on a floating-point angle key, then let insertion sort with the
      // exact comparator repair the few pairs the key gets wrong.
      keyed.clear();
      for (std::size_t k = 0; k < width; ++k) {
        const Point& q = pts[row[k] & kIndexMask];
        const double s = (row[k] & kFlipped) ? -1.0 : 1.0;
        const double dx = s * (q.x - pts[p].x), dy = s * (q.y - pts[p].y);
        keyed.push_back({std::atan2(dy, dx), s * std::hypot(dx, dy), row[k]});
      }
      std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
        return a.angle != b.angle ? a.angle < b.angle : a.position < b.position;
      });
      for (std::size_t k = 0; k < width; ++k) row[k] = keyed[k].entry;
      const AngularLess less{&pts, pts[p]};
      for (std::size_t k = 1; k < width; ++k) {
        const std::uint32_t e = row[k];
        std::size_t j = k;
        while (j > 0 && less(e, row[j - 1])) {
          row[j] = row[j - 1];
          --j;
        }
        row[j] = e;
      }
      for (std::size_t k = 0; k < width; ++k) {
        const bool same_line =
            k > 0 && orient(pts[p], pts[row[k - 1] & kIndexMask], pts[row[k] & kIndexMask]) == 0;
        if (!same_line) row[k] |= kGroupStart;
      }
    }
  });
}

Selection<double> RidgeDictionary2D::argmax(const Vector& r) const {
  const Eigen::Index n = samples_.size();
  if (r.size() != n) throw DimensionError("ridge2d_argmax: residual length does not match the sample set");
  if (!r.allFinite()) throw NumericError("ridge2d_argmax: non-finite residual");

  const std::span<const double> rv(r.data(), static_cast<std::size_t>(n));
  const double total = std::accumulate(rv.begin(), rv.end(), 0.0);
  const double abs_total = r.cwiseAbs().sum();
  // Bound on |running sum - exact sum| plus |canonical sum - exact sum| for
  // every candidate; each sweep value involves at most ~6N roundings of
  // quantities bounded by sum |r_i|.
  const double slack = 10.0 * static_cast<double>(n + 2) * 0x1p-53 * abs_total * 1.01 +
                       std::numeric_limits<double>::denorm_min();

  const std::size_t width = static_cast<std::size_t>(n - 1);
  std::vector<ChunkResult> chunks(static_cast<std::size_t>(threads_));

  parallel_chunks(threads_, n, [&](int worker, Eigen::Index begin, Eigen::Index end) {
    ChunkResult& out = chunks[static_cast<std::size_t>(worker)];
    auto consider = [&out, slack](const Candidate& c) {
      const double a = c.approx;
      if (a < out.best_approx - 2.0 * slack) return;
      if (a > out.best_approx) {
        out.best_approx = a;
        if (out.survivors.size() > 256) {
          const double cut = a - 2.0 * slack;
          std::erase_if(out.survivors, [cut](const Candidate& s) { return s.approx < cut; });
        }
      }
      out.survivors.push_back(c);
    };

    std::vector<double> line;
    for (Eigen::Index p = begin; p < end; ++p) {
      const std::uint32_t* row = order_.data() + static_cast<std::size_t>(p) * width;
      double left = 0.0;
      for (std::size_t k = 0; k < width; ++k)
        if (!(row[k] & kFlipped)) left += rv[row[k] & kIndexMask];

      std::size_t g = 0;
      while (g < width) {
        std::size_t ge = g + 1;
        while (ge < width && !(row[ge] & kGroupStart)) ++ge;

        // Fast path for a line holding only the pivot and one other point:
        // every candidate is base + {0, r_p, r_q, r_p + r_q} for either side.
        if (ge == g + 1) {
          const double rq = rv[row[g] & kIndexMask];
          const double rp = rv[static_cast<std::size_t>(p)];
          const bool flipped = row[g] & kFlipped;
          if (!flipped) left -= rq;
          const double right = total - left - rp - rq;
          const double hi = std::max({std::abs(left), std::abs(left + rp), std::abs(left + rq), std::abs(left + rp + rq),
                                      std::abs(right), std::abs(right + rp), std::abs(right + rq),
                                      std::abs(right + rp + rq)});
          if (hi >= out.best_approx - 2.0 * slack) {
            const double first = flipped ? rq : rp;
            const double second = flipped ? rp : rq;
            for (Side side : {Side::left, Side::right}) {
              const double base = side == Side::left ? left : right;
              const auto pc = static_cast<std::uint32_t>(p);
              const auto gc = static_cast<std::uint32_t>(g);
              consider({pc, gc, side, Run::prefix, 0, std::abs(base)});
              consider({pc, gc, side, Run::prefix, 1, std::abs(base + first)});
              consider({pc, gc, side, Run::prefix, 2, std::abs(base + first + second)});
              consider({pc, gc, side, Run::suffix, 1, std::abs(base + second)});
            }
          }
          if (flipped) left += rq;
          g = ge;
          continue;
        }

        // Unflipped points of this line leave the open left side.
        line.clear();
        double flipped_sum = 0.0;
        bool pivot_added = false;
        for (std::size_t k = g; k < ge; ++k) {
          const double v = rv[row[k] & kIndexMask];
          if (row[k] & kFlipped) {
            flipped_sum += v;
          } else {
            if (!pivot_added) {
              line.push_back(rv[static_cast<std::size_t>(p)]);
              pivot_added = true;
            }
            left -= v;
          }
          line.push_back(v);
        }
        if (!pivot_added) line.push_back(rv[static_cast<std::size_t>(p)]);

        const double on_line = std::accumulate(line.begin(), line.end(), 0.0);
        const double right = total - left - on_line;
        const auto m = static_cast<std::uint32_t>(line.size());
        for (Side side : {Side::left, Side::right}) {
          const double base = side == Side::left ? left : right;
          double acc = base;
          consider({static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(g), side, Run::prefix, 0, std::abs(acc)});
          for (std::uint32_t t = 1; t <= m; ++t) {
            acc += line[t - 1];
            consider({static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(g), side, Run::prefix, t, std::abs(acc)});
          }
          acc = base;
          for (std::uint32_t t = 1; t < m; ++t) {
            acc += line[m - t];
            consider({static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(g), side, Run::suffix, t, std::abs(acc)});
          }
        }

        // Flipped points of this line enter the open left side.
        left += flipped_sum;
        g = ge;
      }
    }
  });

  std::vector<Point> pts(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) pts[i] = {samples_.points()(0, i), samples_.points()(1, i)};

  RidgeAtom best_atom;
  best_atom.captured.resize(static_cast<std::size_t>(n));
  std::iota(best_atom.captured.begin(), best_atom.captured.end(), 0);
  double best_signed = split_inner_product(rv, best_atom.captured);
  double best = std::abs(best_signed);

  double global_approx = 0.0;
  for (const auto& c : chunks) global_approx = std::max(global_approx, c.best_approx);
  const double cut = global_approx - 2.0 * slack;

  const Candidate* winner = nullptr;
  std::vector<int> captured;
  std::vector<signed char> side_of(static_cast<std::size_t>(n));
  for (const auto& chunk : chunks) {
    for (const auto& c : chunk.survivors) {
      if (c.approx < cut) continue;
      const std::span<const std::uint32_t> row(order_.data() + static_cast<std::size_t>(c.pivot) * width, width);
      const std::vector<int> line = online_points(row, c.group, static_cast<int>(c.pivot));
      const Point& p = pts[c.pivot];
      const std::uint32_t first = row[c.group];
      const Point& q0 = pts[first & kIndexMask];
      const int sign0 = (first & kFlipped) ? -1 : 1;
      const int want = c.side == Side::left ? 1 : -1;

      std::vector<char> in(static_cast<std::size_t>(n), 0);
      for (Eigen::Index i = 0; i < n; ++i) side_of[i] = static_cast<signed char>(sign0 * orient(p, q0, pts[i]));
      for (Eigen::Index i = 0; i < n; ++i)
        if (side_of[i] == want) in[i] = 1;
      const std::size_t m = line.size();
      for (std::uint32_t t = 0; t < c.length; ++t)
        in[line[c.run == Run::prefix ? t : m - 1 - t]] = 1;
      captured.clear();
      for (Eigen::Index i = 0; i < n; ++i)
        if (in[i]) captured.push_back(static_cast<int>(i));
      const double value_signed = split_inner_product(rv, captured);
      if (std::abs(value_signed) > best) {
        best = std::abs(value_signed);
        best_signed = value_signed;
        winner = &c;
        best_atom.captured = captured;
      }
    }
  }
  if (winner == nullptr) {
    best_atom.omega.setZero();
    best_atom.offset = 0.0;
  } else {
    const Candidate& c = *winner;
    const std::span<const std::uint32_t> row(order_.data() + static_cast<std::size_t>(c.pivot) * width, width);
    const std::vector<int> line = online_points(row, c.group, static_cast<int>(c.pivot));
    const Point& p = pts[c.pivot];
    const std::uint32_t first = row[c.group];
    const Point& q0 = pts[first & kIndexMask];
    const double sign0 = (first & kFlipped) ? -1.0 : 1.0;
    Eigen::Vector2d dir(sign0 * (q0.x - p.x), sign0 * (q0.y - p.y));
    dir.normalize();
    const Eigen::Vector2d normal(-dir.y(), dir.x());
    const double side = c.side == Side::left ? 1.0 : -1.0;
    const double kappa = c.run == Run::prefix ? -1.0 : 1.0;
    const Eigen::Vector2d pv(p.x, p.y);

    auto along = [&](int i) { return dir.dot(samples_.point(i) - pv); };
    const std::size_t m = line.size();
    double cut_at;
    if (c.length == 0) {
      cut_at = c.run == Run::prefix ? along(line.front()) - 1.0 : along(line.back()) + 1.0;
    } else if (c.length == m) {
      cut_at = c.run == Run::prefix ? along(line.back()) + 1.0 : along(line.front()) - 1.0;
    } else if (c.run == Run::prefix) {
      cut_at = 0.5 * (along(line[c.length - 1]) + along(line[c.length]));
    } else {
      cut_at = 0.5 * (along(line[m - c.length - 1]) + along(line[m - c.length]));
    }
    double margin = std::numeric_limits<double>::infinity();
    double reach = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double s = std::abs(normal.dot(samples_.point(i) - pv));
      if (std::find(line.begin(), line.end(), static_cast<int>(i)) == line.end()) margin = std::min(margin, s);
      reach = std::max(reach, std::abs(along(static_cast<int>(i)) - cut_at));
    }
    const double eta = std::isfinite(margin) && reach > 0.0 ? 0.5 * margin / reach : 1.0;
    best_atom.omega = side * normal + kappa * eta * dir;
    best_atom.offset = -best_atom.omega.dot(pv) - kappa * eta * cut_at;
  }
  if (best_atom.captured.empty()) {
    best_atom.omega.setZero();
    best_atom.offset = -1.0;
  }
  return {std::move(best_atom), best};
}

Eigen::VectorXd RidgeDictionary2D::realize(const DictionaryElement& e) const {
  const auto* atom = std::get_if<RidgeAtom>(&e);
  if (atom == nullptr) throw ParameterError("ridge dictionary cannot realize " + describe(e));
  Eigen::VectorXd g = Eigen::VectorXd::Zero(samples_.size());
  for (int i : atom->captured) {
    if (i < 0 || i >= samples_.size()) throw ParameterError("ridge atom captures an index outside the sample set");
    g(i) = 1.0;
  }
  return g;
}

bool RidgeDictionary2D::consistent(const RidgeAtom& atom) const {
  std::size_t next = 0;
  for (Eigen::Index i = 0; i < samples_.size(); ++i) {
    const bool inside = atom.omega.dot(samples_.point(i)) + atom.offset >= 0.0;
    const bool listed = next < atom.captured.size() && atom.captured[next] == i;
    if (inside != listed) return false;
    if (listed) ++next;
  }
  return next == atom.captured.size();
}

Selection<double> ridge2d_argmax(const Eigen::VectorXd& r, const SampleSet& X) {
  return RidgeDictionary2D(X).argmax(r);
}

} // namespace greedylab
