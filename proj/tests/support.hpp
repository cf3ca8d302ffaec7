#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "wsnfd/model.hpp"

namespace wsnfd::fixtures {

inline ValidatedScenario good_network(TopologyKind kind = TopologyKind::interior_square) {
  const std::vector<double> probs = kind == TopologyKind::hexagon_interior
                                        ? std::vector<double>{0.9, 0.5}
                                        : std::vector<double>{0.9, 0.5, 0.3};
  return validate({0.9, 0.1}, builtin_topology(kind, probs));
}

inline ValidatedScenario weak_network(TopologyKind kind = TopologyKind::interior_square) {
  const std::vector<double> probs = kind == TopologyKind::hexagon_interior
                                        ? std::vector<double>{0.7, 0.3}
                                        : std::vector<double>{0.7, 0.3, 0.1};
  return validate({0.8, 0.2}, builtin_topology(kind, probs));
}

inline std::vector<double> descending_probs(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> p(n);
  do {
    for (auto& v : p) v = u(rng);
    std::sort(p.begin(), p.end(), std::greater<>());
  } while (std::adjacent_find(p.begin(), p.end(), [](double a, double b) { return a - b < 1e-3; }) != p.end());
  return p;
}

/// Random non-degenerate scenario with at most 12 nodes.
inline ValidatedScenario random_scenario(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double pw = 0.01 + 0.39 * u(rng);
  const double pc = pw + 0.05 + (0.99 - pw - 0.05) * u(rng);
  std::uniform_int_distribution<int> n_classes(1, 4);
  std::uniform_int_distribution<int> count(1, 3);
  const auto probs = descending_probs(rng, static_cast<std::size_t>(n_classes(rng)), 0.02, 0.98);
  std::vector<int> counts;
  for (std::size_t i = 0; i < probs.size(); ++i) counts.push_back(count(rng));
  return validate({pc, pw}, builtin_topology(TopologyKind::custom, probs, counts));
}

}  // namespace wsnfd::fixtures
