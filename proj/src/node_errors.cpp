#include "wsnfd/node_errors.hpp"

namespace wsnfd {

NodeErrorReport node_error_report(const ValidatedScenario& scenario, Prior prior) {
  prior = validate_prior(prior);
  const auto stats = derived_stats(scenario);
  const double pe = prior.p_e;
  const double pn = prior.p_n();
  const double pw = scenario.channel().p_w;

  NodeErrorReport report;
  report.p_e = pe;
  const auto& classes = scenario.topology().classes;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const double silent = stats.silent_event[i];
    const double alarm = stats.alarm_event[i];
    NodeErrorRow row;
    row.label = classes[i].label;
    row.type1 = silent;
    row.type2 = pw;
    row.post_event_given_silent = pe * silent / (pn * (1.0 - pw) + pe * silent);
    row.post_normal_given_alarm = pn * pw / (pn * pw + pe * alarm);
    report.classes.push_back(std::move(row));
  }
  return report;
}

}  // namespace wsnfd
