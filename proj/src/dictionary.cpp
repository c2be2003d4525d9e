#include <greedylab/dictionary.hpp>

#include <cmath>
#include <sstream>

namespace greedylab {

std::string describe(const DictionaryElement& element) {
  std::ostringstream out;
  std::visit(
      [&out](const auto& atom) {
        using T = std::decay_t<decltype(atom)>;
        if constexpr (std::is_same_v<T, RidgeAtom>) {
          out << "ridge(omega=(" << atom.omega.x() << "," << atom.omega.y() << "), b=" << atom.offset
              << ", captured=" << atom.captured.size() << ")";
        } else if constexpr (std::is_same_v<T, SequenceAtom>) {
          out << "sequence(k=" << atom.k << ")";
        } else {
          out << "finite(" << atom.index << ")";
        }
      },
      element);
  return out.str();
}

CounterexampleSetup build_counterexample_dictionary(double epsilon, double delta) {
  if (!(epsilon > 0.0 && epsilon < 0.5))
    throw ParameterError("counterexample: epsilon must lie in (0, 1/2)");
  if (!(delta > 0.0 && delta < epsilon / std::sqrt(8.0)))
    throw ParameterError("counterexample: delta must lie in (0, epsilon/sqrt(8))");
  const double c2 = 1.0 - epsilon * epsilon / 8.0 - 0.25 - delta * delta;
  if (!(c2 > 0.0)) throw ParameterError("counterexample: no real c makes the atoms unit norm");
  const double c = std::sqrt(c2);
  const double s = std::sqrt(1.0 - epsilon * epsilon);
  const double q = epsilon / 4.0;

  Eigen::Matrix<double, 5, 5> x;
  // clang-format off
  x << epsilon, 0.0,     0.0, q,     q,
       -s,      epsilon, 0.0, q,     q,
       0.0,     s,       1.0, 0.5,   0.5,
       0.0,     0.0,     0.0, c,     -c,
       0.0,     0.0,     0.0, delta, delta;
  // clang-format on
  Eigen::VectorXd f(5);
  f << q, q, 0.5, 0.0, delta;
  return {FiniteDictionary<double>(x, {"x1", "x2", "x3", "x4", "x5"}), f, epsilon, delta, c};
}

} // namespace greedylab
