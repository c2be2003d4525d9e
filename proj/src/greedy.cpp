#include <greedylab/greedy.hpp>

namespace greedylab {

std::string to_string(Algorithm a) {
  switch (a) {
  case Algorithm::oga: return "oga";
  case Algorithm::pga: return "pga";
  case Algorithm::pga_shrink: return "pga-shrink";
  case Algorithm::rga: return "rga";
  }
  return "?";
}

std::string to_string(RunStatus s) {
  switch (s) {
  case RunStatus::running: return "running";
  case RunStatus::completed: return "completed";
  case RunStatus::converged: return "converged";
  case RunStatus::stalled: return "stalled";
  }
  return "?";
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "oga") return Algorithm::oga;
  if (name == "pga") return Algorithm::pga;
  if (name == "pga-shrink") return Algorithm::pga_shrink;
  if (name == "rga") return Algorithm::rga;
  throw ParameterError("unknown algorithm '" + name + "' (expected oga, pga, pga-shrink or rga)");
}

} // namespace greedylab
