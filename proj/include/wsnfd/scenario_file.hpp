// scenario_file.hpp -- JSON scenario documents for the command-line tool.
//
// Schema version 1:
//
//   {
//     "schema": 1,                                  required
//     "name": "good-network",                       optional
//     "channel": {"p_c": 0.9, "p_w": 0.1},          required
//     "topology": {"kind": "interior_square",       required; also corner_square,
//                  "detect_probs": [0.9, 0.5, 0.3]}  edge_square, hexagon_interior
//              or {"kind": "custom",
//                  "classes": [{"label": "center", "count": 1, "p_detect": 0.9}, ...]},
//     "prior": {"p_e": 0.1 | [0.1, 0.2, ...]},      event priors to sweep
//     "loss_ratio": 5 | [5, 20],                    l = l_e / l_n
//     "size_alpha": [0.1, 0.05],                    MP sizes, Pr(reject H0 | H0)
//     "levels": [0.9, 0.95],                        printed acceptance levels; size = 1 - level
//     "simulation": {"n_trials": 100000, "master_seed": 1},
//     "weight_mode": "exact" | "paper_approx",
//     "paper_approx": {"weights": [5, 3, 2], "alarm_probs": [0.8, 0.5, 0.35]}
//   }
//
// Unknown keys anywhere are rejected.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wsnfd/decision_tests.hpp"
#include "wsnfd/model.hpp"

namespace wsnfd {

inline constexpr int kScenarioSchema = 1;

enum class WeightMode {
  exact,
  paper_approx,
};

[[nodiscard]] WeightMode parse_weight_mode(std::string_view name);
[[nodiscard]] std::string_view to_string(WeightMode mode) noexcept;

struct SimulationSettings {
  std::uint64_t n_trials = 100000;
  std::uint64_t master_seed = 1;
};

struct ScenarioFile {
  std::string name;
  ChannelModel channel;
  TopologyKind kind = TopologyKind::interior_square;
  Topology topology;
  std::vector<double> p_e;
  std::vector<double> loss_ratios;
  std::vector<double> sizes;
  std::vector<double> levels;
  SimulationSettings simulation;
  WeightMode weight_mode = WeightMode::exact;
  std::optional<ApproxWeights> approx;

  [[nodiscard]] ValidatedScenario validated() const;
  /// `sizes` followed by 1 - level for every entry of `levels`.
  [[nodiscard]] std::vector<double> all_sizes() const;
};

/// Throws DomainError naming the offending field (or parse position).
[[nodiscard]] ScenarioFile parse_scenario(std::string_view text);
[[nodiscard]] ScenarioFile load_scenario(const std::filesystem::path& path);

}  // namespace wsnfd
