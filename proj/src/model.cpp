#include "wsnfd/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace wsnfd {

namespace {

std::string fmt_prob(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

void require(bool ok, const std::string& message) {
  if (!ok) throw DomainError(message);
}

std::vector<std::string> default_labels(TopologyKind kind, std::size_t n) {
  switch (kind) {
    case TopologyKind::interior_square:
    case TopologyKind::corner_square:
    case TopologyKind::edge_square:
      return {"center", "distance-one", "distance-two"};
    case TopologyKind::hexagon_interior:
      return {"center", "adjacent"};
    case TopologyKind::custom:
      break;
  }
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("class-" + std::to_string(i + 1));
  return labels;
}

}  // namespace

int Topology::total_nodes() const noexcept {
  int total = 0;
  for (const auto& c : classes) total += c.count;
  return total;
}

std::vector<int> Topology::counts() const {
  std::vector<int> out;
  out.reserve(classes.size());
  for (const auto& c : classes) out.push_back(c.count);
  return out;
}

std::vector<double> Topology::detect_probs() const {
  std::vector<double> out;
  out.reserve(classes.size());
  for (const auto& c : classes) out.push_back(c.p_detect);
  return out;
}

TopologyKind parse_topology_kind(std::string_view name) {
  if (name == "interior_square") return TopologyKind::interior_square;
  if (name == "corner_square") return TopologyKind::corner_square;
  if (name == "edge_square") return TopologyKind::edge_square;
  if (name == "hexagon_interior") return TopologyKind::hexagon_interior;
  if (name == "custom") return TopologyKind::custom;
  throw DomainError("unknown topology kind '" + std::string(name) + "'");
}

std::string_view to_string(TopologyKind kind) noexcept {
  switch (kind) {
    case TopologyKind::interior_square: return "interior_square";
    case TopologyKind::corner_square: return "corner_square";
    case TopologyKind::edge_square: return "edge_square";
    case TopologyKind::hexagon_interior: return "hexagon_interior";
    case TopologyKind::custom: return "custom";
  }
  return "custom";
}

Topology builtin_topology(TopologyKind kind, std::span<const double> detect_probs,
                          std::span<const int> custom_counts) {
  std::vector<int> counts;
  switch (kind) {
    case TopologyKind::interior_square: counts = {1, 4, 4}; break;
    case TopologyKind::corner_square: counts = {1, 2, 1}; break;
    case TopologyKind::edge_square: counts = {1, 3, 2}; break;
    case TopologyKind::hexagon_interior: counts = {1, 6}; break;
    case TopologyKind::custom: counts.assign(custom_counts.begin(), custom_counts.end()); break;
  }
  if (detect_probs.size() != counts.size()) {
    throw DomainError(std::string(to_string(kind)) + " topology needs " +
                      std::to_string(counts.size()) + " detection probabilities, got " +
                      std::to_string(detect_probs.size()));
  }
  const auto labels = default_labels(kind, counts.size());
  Topology topo;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    topo.classes.push_back({labels[i], counts[i], detect_probs[i]});
  }
  return topo;
}

Prior validate_prior(Prior prior) {
  require(std::isfinite(prior.p_e) && prior.p_e > 0.0 && prior.p_e < 1.0,
          "event prior p_e must lie in (0,1), got " + fmt_prob(prior.p_e));
  return prior;
}

LossRatio validate_loss(LossRatio loss) {
  require(std::isfinite(loss.l) && loss.l > 0.0,
          "loss ratio l must be a positive finite number, got " + fmt_prob(loss.l));
  return loss;
}

ValidatedScenario validate(const ChannelModel& channel, Topology topology,
                           std::optional<Prior> prior) {
  const double pc = channel.p_c;
  const double pw = channel.p_w;
  require(std::isfinite(pc) && pc > 0.0 && pc <= 1.0,
          "p_c must lie in (0,1], got " + fmt_prob(pc));
  require(std::isfinite(pw) && pw >= 0.0 && pw < 1.0,
          "p_w must lie in [0,1), got " + fmt_prob(pw));
  require(pc > pw, "p_c must exceed p_w (d = p_c - p_w > 0), got p_c=" + fmt_prob(pc) +
                       " p_w=" + fmt_prob(pw));

  require(!topology.classes.empty(), "topology must contain at least one sensor class");
  for (const auto& c : topology.classes) {
    require(c.count >= 1, "class '" + c.label + "' must contain at least one node");
    require(std::isfinite(c.p_detect) && c.p_detect > 0.0 && c.p_detect <= 1.0,
            "class '" + c.label + "' detection probability must lie in (0,1], got " +
                fmt_prob(c.p_detect));
    // With p_w > 0 a class that alarms with certainty under Event has an
    // unbounded likelihood ratio on every non-saturated observation.
    require(pw == 0.0 || !(pc == 1.0 && c.p_detect == 1.0),
            "class '" + c.label + "' alarms with certainty under Event (p_detect = p_c = 1) "
                                   "while p_w > 0; weights are undefined");
  }

  std::stable_sort(topology.classes.begin(), topology.classes.end(),
                   [](const SensorClass& a, const SensorClass& b) { return a.p_detect > b.p_detect; });
  for (std::size_t i = 1; i < topology.classes.size(); ++i) {
    require(topology.classes[i].p_detect < topology.classes[i - 1].p_detect,
            "detection probabilities must be strictly decreasing across classes; classes '" +
                topology.classes[i - 1].label + "' and '" + topology.classes[i].label +
                "' share p_detect=" + fmt_prob(topology.classes[i].p_detect) + " (merge them)");
  }

  if (prior) prior = validate_prior(*prior);
  return ValidatedScenario(channel, std::move(topology), prior);
}

ValidatedScenario ValidatedScenario::with_prior(Prior prior) const {
  return ValidatedScenario(channel_, topology_, validate_prior(prior));
}

DerivedStats derived_stats(const ValidatedScenario& scenario) {
  const auto& ch = scenario.channel();
  DerivedStats out;
  out.d = ch.p_c - ch.p_w;
  out.infinite_weights = scenario.degenerate();
  for (const auto& c : scenario.topology().classes) {
    const double alarm = ch.p_w + c.p_detect * out.d;
    out.alarm_event.push_back(alarm);
    out.silent_event.push_back(1.0 - alarm);
    if (out.infinite_weights) {
      out.weight.push_back(std::numeric_limits<double>::infinity());
    } else {
      const double silent_excess = 1.0 - ch.p_w - c.p_detect * out.d;
      out.weight.push_back(std::log1p(c.p_detect * out.d / (ch.p_w * silent_excess)));
    }
  }
  return out;
}

}  // namespace wsnfd
