#pragma once

#include <string>
#include <vector>

#include "wsnfd/model.hpp"

namespace wsnfd {

/// Error probabilities of a single node of one class.
struct NodeErrorRow {
  std::string label;
  double type1 = 0.0;                    // Q_E: silent although an event occurred
  double type2 = 0.0;                    // p_w: alarm although the region is normal
  double post_event_given_silent = 0.0;  // Pr(Event | x = 0)
  double post_normal_given_alarm = 0.0;  // Pr(Normal | x = 1)
};

struct NodeErrorReport {
  double p_e = 0.0;
  std::vector<NodeErrorRow> classes;
};

/// Full-precision node errors for every class of `scenario` under `prior`.
[[nodiscard]] NodeErrorReport node_error_report(const ValidatedScenario& scenario, Prior prior);

}  // namespace wsnfd
