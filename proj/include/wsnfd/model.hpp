// model.hpp -- scenario parameters, sensor topologies and per-class derived
// quantities for fault-aware event detection on a sensor grid.
//
// A scenario is the set of sensors that can see one candidate event cell,
// grouped into classes by distance. Every sensor in class i detects an event
// with probability p_detect[i] and then reports through a faulty channel:
//
//   Pr(alarm | detected)     = p_c
//   Pr(alarm | not detected) = p_w
//
// Everything downstream (node errors, score distributions, tests, the
// simulator) takes a ValidatedScenario, so the invariants below are checked
// exactly once.
#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wsnfd {

/// Raised whenever an input violates a model invariant. The message names the
/// violated constraint.
class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct ChannelModel {
  double p_c = 0.0;  // Pr(alarm | detection)
  double p_w = 0.0;  // Pr(alarm | no detection)
};

struct SensorClass {
  std::string label;
  int count = 0;
  double p_detect = 0.0;
};

struct Topology {
  std::vector<SensorClass> classes;

  [[nodiscard]] int total_nodes() const noexcept;
  [[nodiscard]] std::vector<int> counts() const;
  [[nodiscard]] std::vector<double> detect_probs() const;
};

struct Prior {
  double p_e = 0.0;
  [[nodiscard]] double p_n() const noexcept { return 1.0 - p_e; }
};

/// l = l_e / l_n, loss of missing an event relative to a false declaration.
struct LossRatio {
  double l = 1.0;
};

enum class TopologyKind {
  interior_square,
  corner_square,
  edge_square,
  hexagon_interior,
  custom,
};

[[nodiscard]] TopologyKind parse_topology_kind(std::string_view name);
[[nodiscard]] std::string_view to_string(TopologyKind kind) noexcept;

/// Node counts per class for the built-in shapes: interior square (1,4,4),
/// corner square (1,2,1), edge square (1,3,2), hexagon interior (1,6).
/// For `custom`, `custom_counts` supplies the counts.
[[nodiscard]] Topology builtin_topology(TopologyKind kind, std::span<const double> detect_probs,
                                        std::span<const int> custom_counts = {});

class ValidatedScenario;

[[nodiscard]] ValidatedScenario validate(const ChannelModel& channel, Topology topology,
                                         std::optional<Prior> prior = std::nullopt);

/// Prior with 0 < p_e < 1.
[[nodiscard]] Prior validate_prior(Prior prior);
[[nodiscard]] LossRatio validate_loss(LossRatio loss);

/// Immutable, checked scenario. Classes are ordered by strictly decreasing
/// detection probability.
class ValidatedScenario {
public:
  [[nodiscard]] const ChannelModel& channel() const noexcept { return channel_; }
  [[nodiscard]] const Topology& topology() const noexcept { return topology_; }
  [[nodiscard]] const std::optional<Prior>& prior() const noexcept { return prior_; }
  [[nodiscard]] std::size_t num_classes() const noexcept { return topology_.classes.size(); }

  /// p_w == 0: every likelihood-ratio weight is infinite and the tests
  /// reduce to "reject H0 only when every sensor is silent".
  [[nodiscard]] bool degenerate() const noexcept { return channel_.p_w == 0.0; }

  [[nodiscard]] ValidatedScenario with_prior(Prior prior) const;

private:
  ValidatedScenario(ChannelModel channel, Topology topology, std::optional<Prior> prior)
      : channel_(channel), topology_(std::move(topology)), prior_(prior) {}

  friend ValidatedScenario validate(const ChannelModel&, Topology, std::optional<Prior>);

  ChannelModel channel_;
  Topology topology_;
  std::optional<Prior> prior_;
};

/// Closed-form per-class quantities.
///   alarm_event[i]  = P_E[i] = p_w + p_i d
///   silent_event[i] = Q_E[i] = 1 - P_E[i]
///   weight[i]       = ln(1 + p_i d / (p_w (1 - p_w - p_i d))), +inf when p_w = 0
struct DerivedStats {
  double d = 0.0;
  std::vector<double> alarm_event;
  std::vector<double> silent_event;
  std::vector<double> weight;
  bool infinite_weights = false;
};

[[nodiscard]] DerivedStats derived_stats(const ValidatedScenario& scenario);

}  // namespace wsnfd
