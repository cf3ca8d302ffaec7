// estimation.hpp -- recover p_i, p_w and p_c from calibration experiments.
//
// A controlled-event log records, for one experiment in which an event was
// staged in the candidate cell, every sensor's detection bit y and response
// bit x. A normal log records the responses while the region is quiet (y is
// always 0). Estimates average the per-log proportions; their standard errors
// come from the spread of those proportions between logs.
//
// Log file format (CSV, one sensor record per line, '#' starts a comment):
//
//   condition,trial,class,y,x
//   event,0,1,1,1
//   normal,7,3,0,0
//
// `condition` is `event` or `normal`, `trial` groups records into logs,
// `class` is 1-based (1 = center), y and x are 0/1.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace wsnfd {

enum class Condition {
  ControlledEvent,
  Normal,
};

struct SensorRecord {
  int class_index = 0;  // 0-based
  int y = 0;
  int x = 0;
};

struct TrialLog {
  Condition condition = Condition::ControlledEvent;
  std::uint64_t trial_id = 0;
  std::vector<SensorRecord> records;
};

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n_logs = 0;  // logs that contributed a proportion
};

/// Per-class detection probability from controlled-event logs. Throws
/// DomainError if a class below the highest index has no sensor records.
[[nodiscard]] std::vector<Estimate> estimate_detection(std::span<const TrialLog> logs);

/// p_w from normal-condition logs.
[[nodiscard]] Estimate estimate_false_response(std::span<const TrialLog> logs);

/// p_c from controlled-event logs: proportion of alarms among detecting
/// sensors. Logs without a detection are skipped.
[[nodiscard]] Estimate estimate_correct_response(std::span<const TrialLog> logs);

/// Parses the CSV log format; records sharing (condition, trial) form one log,
/// in order of first appearance. Errors name the offending line.
[[nodiscard]] std::vector<TrialLog> read_trial_logs(std::istream& in);
void write_trial_logs(std::ostream& out, std::span<const TrialLog> logs);

}  // namespace wsnfd
