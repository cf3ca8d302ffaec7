#include "wsnfd/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "wsnfd/model.hpp"

namespace wsnfd {

namespace {

Estimate mean_of_proportions(const std::vector<double>& props) {
  Estimate est;
  est.n_logs = props.size();
  if (props.empty()) return est;
  double sum = 0.0;
  for (double p : props) sum += p;
  const double mean = sum / static_cast<double>(props.size());
  est.value = mean;
  if (props.size() > 1) {
    double ss = 0.0;
    for (double p : props) ss += (p - mean) * (p - mean);
    const double var = ss / static_cast<double>(props.size() - 1);
    est.std_error = std::sqrt(var / static_cast<double>(props.size()));
  }
  return est;
}

void require_condition(const TrialLog& log, Condition expected, const char* what) {
  if (log.condition != expected) {
    throw DomainError(std::string(what) + " needs " +
                      (expected == Condition::Normal ? "normal" : "controlled-event") +
                      " logs; trial " + std::to_string(log.trial_id) + " has the other condition");
  }
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) {
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    fields.push_back(b == std::string::npos ? std::string{} : field.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

long long parse_int(const std::string& s, std::size_t line_no, const char* name) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw DomainError("log line " + std::to_string(line_no) + ": field '" + name +
                    "' is not an integer: '" + s + "'");
}

}  // namespace

std::vector<Estimate> estimate_detection(std::span<const TrialLog> logs) {
  if (logs.empty()) throw DomainError("detection estimate needs at least one controlled-event log");
  int n_classes = 0;
  for (const auto& log : logs) {
    require_condition(log, Condition::ControlledEvent, "detection estimate");
    for (const auto& r : log.records) n_classes = std::max(n_classes, r.class_index + 1);
  }
  std::vector<std::vector<double>> props(static_cast<std::size_t>(n_classes));
  std::vector<int> seen(static_cast<std::size_t>(n_classes));
  std::vector<int> hits(static_cast<std::size_t>(n_classes));
  for (const auto& log : logs) {
    std::fill(seen.begin(), seen.end(), 0);
    std::fill(hits.begin(), hits.end(), 0);
    for (const auto& r : log.records) {
      ++seen[static_cast<std::size_t>(r.class_index)];
      hits[static_cast<std::size_t>(r.class_index)] += r.y;
    }
    for (std::size_t c = 0; c < props.size(); ++c) {
      if (seen[c] > 0) props[c].push_back(static_cast<double>(hits[c]) / seen[c]);
    }
  }
  std::vector<Estimate> out;
  for (std::size_t c = 0; c < props.size(); ++c) {
    if (props[c].empty()) {
      throw DomainError("class " + std::to_string(c + 1) + " has no sensor records in any log");
    }
    out.push_back(mean_of_proportions(props[c]));
  }
  return out;
}

Estimate estimate_false_response(std::span<const TrialLog> logs) {
  if (logs.empty()) throw DomainError("false-response estimate needs at least one normal log");
  std::vector<double> props;
  for (const auto& log : logs) {
    require_condition(log, Condition::Normal, "false-response estimate");
    if (log.records.empty()) continue;
    int alarms = 0;
    for (const auto& r : log.records) alarms += r.x;
    props.push_back(static_cast<double>(alarms) / static_cast<double>(log.records.size()));
  }
  if (props.empty()) throw DomainError("normal logs contain no sensor records");
  return mean_of_proportions(props);
}

Estimate estimate_correct_response(std::span<const TrialLog> logs) {
  std::vector<double> props;
  for (const auto& log : logs) {
    require_condition(log, Condition::ControlledEvent, "correct-response estimate");
    int detected = 0;
    int alarms = 0;
    for (const auto& r : log.records) {
      if (r.y == 1) {
        ++detected;
        alarms += r.x;
      }
    }
    if (detected > 0) props.push_back(static_cast<double>(alarms) / detected);
  }
  if (props.empty()) throw DomainError("correct-response estimate needs at least one detection");
  return mean_of_proportions(props);
}

std::vector<TrialLog> read_trial_logs(std::istream& in) {
  std::vector<TrialLog> logs;
  std::map<std::pair<int, std::uint64_t>, std::size_t> index;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto f = split_csv(line);
    if (f.size() != 5) {
      throw DomainError("log line " + std::to_string(line_no) + ": expected 5 fields "
                        "(condition,trial,class,y,x), got " + std::to_string(f.size()));
    }
    if (f[0] == "condition") continue;  // header

    Condition cond;
    if (f[0] == "event") {
      cond = Condition::ControlledEvent;
    } else if (f[0] == "normal") {
      cond = Condition::Normal;
    } else {
      throw DomainError("log line " + std::to_string(line_no) + ": condition must be 'event' or "
                        "'normal', got '" + f[0] + "'");
    }
    const auto trial = parse_int(f[1], line_no, "trial");
    const auto cls = parse_int(f[2], line_no, "class");
    const auto y = parse_int(f[3], line_no, "y");
    const auto x = parse_int(f[4], line_no, "x");
    if (trial < 0) throw DomainError("log line " + std::to_string(line_no) + ": trial id must be >= 0");
    if (cls < 1) throw DomainError("log line " + std::to_string(line_no) + ": class index is 1-based");
    if ((y != 0 && y != 1) || (x != 0 && x != 1)) {
      throw DomainError("log line " + std::to_string(line_no) + ": y and x must be 0 or 1");
    }
    if (cond == Condition::Normal && y != 0) {
      throw DomainError("log line " + std::to_string(line_no) + ": normal-condition records have y = 0");
    }

    const auto key = std::make_pair(static_cast<int>(cond), static_cast<std::uint64_t>(trial));
    auto [it, inserted] = index.try_emplace(key, logs.size());
    if (inserted) logs.push_back({cond, static_cast<std::uint64_t>(trial), {}});
    logs[it->second].records.push_back({static_cast<int>(cls - 1), static_cast<int>(y), static_cast<int>(x)});
  }
  return logs;
}

void write_trial_logs(std::ostream& out, std::span<const TrialLog> logs) {
  out << "condition,trial,class,y,x\n";
  for (const auto& log : logs) {
    const char* cond = log.condition == Condition::Normal ? "normal" : "event";
    for (const auto& r : log.records) {
      out << cond << ',' << log.trial_id << ',' << (r.class_index + 1) << ',' << r.y << ',' << r.x
          << '\n';
    }
  }
}

}  // namespace wsnfd
