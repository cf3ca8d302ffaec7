#include "wsnfd/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "wsnfd/node_errors.hpp"

namespace wsnfd {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kCoinStream = 0xC0FFEE5EED000000ULL;

std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

void check_simulation_prior(Prior prior) {
  if (!(prior.p_e >= 0.0 && prior.p_e <= 1.0)) {
    throw DomainError("simulation prior p_e must lie in [0,1], got " + std::to_string(prior.p_e));
  }
}

std::vector<int> sensor_classes(const ValidatedScenario& scenario) {
  std::vector<int> out;
  const auto& classes = scenario.topology().classes;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    out.insert(out.end(), static_cast<std::size_t>(classes[c].count), static_cast<int>(c));
  }
  return out;
}

// Fills `out` in place so run_trials can reuse its buffers.
void draw_trial(const ValidatedScenario& scenario, const std::vector<double>& detect,
                Prior prior, std::uint64_t seed, std::span<const NamedTest> tests,
                TrialOutcome& out) {
  SplitMix64 rng(seed);
  const auto& ch = scenario.channel();
  out.truth = rng.uniform() < prior.p_e ? Truth::Event : Truth::Normal;
  const bool event = out.truth == Truth::Event;
  const std::size_t n = out.sensor_class.size();
  out.detected.assign(n, 0);
  out.alarmed.assign(n, 0);
  for (std::size_t s = 0; s < n; ++s) {
    const bool y = event && rng.uniform() < detect[static_cast<std::size_t>(out.sensor_class[s])];
    const bool x = rng.uniform() < (y ? ch.p_c : ch.p_w);
    out.detected[s] = y ? 1 : 0;
    out.alarmed[s] = x ? 1 : 0;
  }

  out.decisions.clear();
  if (tests.empty()) return;
  const auto obs = out.observation(detect.size());
  for (std::size_t t = 0; t < tests.size(); ++t) {
    const auto& rule = tests[t].rule;
    if (const auto* mp = std::get_if<MPTest>(&rule)) {
      SplitMix64 coin(trial_seed(seed ^ kCoinStream, t));
      out.decisions.push_back(mp_decide(*mp, obs, [&coin] { return coin.uniform(); }));
    } else {
      out.decisions.push_back(bayes_decide(std::get<BayesTest>(rule), obs));
    }
  }
}

SimReport empty_report(const ValidatedScenario& scenario, Prior prior,
                       std::span<const NamedTest> tests, const SimOptions& options) {
  SimReport report;
  report.trials = options.n_trials;
  report.seed = options.master_seed;
  report.p_e = prior.p_e;
  for (const auto& c : scenario.topology().classes) report.classes.push_back({c.label, {}, {}, {}});
  for (const auto& t : tests) report.tests.push_back({t.name, {}, {}});
  return report;
}

void tally(const TrialOutcome& trial, const std::vector<std::size_t>& reference, SimReport& acc) {
  const bool event = trial.truth == Truth::Event;
  (event ? acc.n_event : acc.n_normal) += 1;
  if (event) {
    for (std::size_t s = 0; s < trial.alarmed.size(); ++s) {
      auto& rc = acc.classes[static_cast<std::size_t>(trial.sensor_class[s])].silent_given_event;
      ++rc.total;
      rc.hits += trial.alarmed[s] == 0 ? 1 : 0;
    }
  }
  for (std::size_t c = 0; c < reference.size(); ++c) {
    auto& stats = acc.classes[c];
    if (trial.alarmed[reference[c]] == 0) {
      ++stats.event_given_silent.total;
      stats.event_given_silent.hits += event ? 1 : 0;
    } else {
      ++stats.normal_given_alarm.total;
      stats.normal_given_alarm.hits += event ? 0 : 1;
    }
  }
  for (std::size_t t = 0; t < trial.decisions.size(); ++t) {
    auto& stats = acc.tests[t];
    const bool reject = trial.decisions[t].verdict == Verdict::RejectH0;
    if (event) {
      ++stats.accept_given_event.total;
      stats.accept_given_event.hits += reject ? 0 : 1;
    } else {
      ++stats.reject_given_normal.total;
      stats.reject_given_normal.hits += reject ? 1 : 0;
    }
  }
}

void add_counts(RateCount& into, const RateCount& from) {
  into.hits += from.hits;
  into.total += from.total;
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t index) noexcept {
  return mix64(mix64(master_seed + kGolden) ^ (index * kGolden + 0xD1B54A32D192ED03ULL));
}

Observation TrialOutcome::observation(std::size_t num_classes) const {
  Observation obs{std::vector<int>(num_classes, 0)};
  for (std::size_t s = 0; s < alarmed.size(); ++s) {
    obs.alarms[static_cast<std::size_t>(sensor_class[s])] += alarmed[s];
  }
  return obs;
}

TrialOutcome simulate_trial(const ValidatedScenario& scenario, Prior prior, std::uint64_t seed,
                            std::span<const NamedTest> tests) {
  check_simulation_prior(prior);
  TrialOutcome out;
  out.sensor_class = sensor_classes(scenario);
  draw_trial(scenario, scenario.topology().detect_probs(), prior, seed, tests, out);
  return out;
}

SimReport run_trials(const ValidatedScenario& scenario, Prior prior,
                     std::span<const NamedTest> tests, const SimOptions& options) {
  check_simulation_prior(prior);
  if (options.n_trials == 0) throw DomainError("simulation needs at least one trial");

  const auto classes = sensor_classes(scenario);
  const auto detect = scenario.topology().detect_probs();
  std::vector<std::size_t> reference(scenario.num_classes());
  for (std::size_t s = classes.size(); s-- > 0;) reference[static_cast<std::size_t>(classes[s])] = s;

  unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                          : options.threads;
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, options.n_trials));

  std::vector<SimReport> partial(threads, empty_report(scenario, prior, tests, options));
  auto work = [&](unsigned worker) {
    const std::uint64_t begin = options.n_trials * worker / threads;
    const std::uint64_t end = options.n_trials * (worker + 1) / threads;
    TrialOutcome trial;
    trial.sensor_class = classes;
    for (std::uint64_t i = begin; i < end; ++i) {
      draw_trial(scenario, detect, prior, trial_seed(options.master_seed, i), tests, trial);
      tally(trial, reference, partial[worker]);
    }
  };

  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
  }

  SimReport report = empty_report(scenario, prior, tests, options);
  for (const auto& part : partial) {
    report.n_event += part.n_event;
    report.n_normal += part.n_normal;
    for (std::size_t c = 0; c < report.classes.size(); ++c) {
      add_counts(report.classes[c].silent_given_event, part.classes[c].silent_given_event);
      add_counts(report.classes[c].event_given_silent, part.classes[c].event_given_silent);
      add_counts(report.classes[c].normal_given_alarm, part.classes[c].normal_given_alarm);
    }
    for (std::size_t t = 0; t < report.tests.size(); ++t) {
      add_counts(report.tests[t].accept_given_event, part.tests[t].accept_given_event);
      add_counts(report.tests[t].reject_given_normal, part.tests[t].reject_given_normal);
    }
  }
  return report;
}

double StatComparison::band3() const noexcept {
  if (count.total == 0) return std::numeric_limits<double>::quiet_NaN();
  return 3.0 * std::sqrt(exact * (1.0 - exact) / static_cast<double>(count.total));
}

bool StatComparison::within_band() const noexcept {
  if (count.total == 0) return false;
  return std::fabs(empirical() - exact) <= band3();
}

std::vector<StatComparison> compare_to_exact(const SimReport& report, const ValidatedScenario& scenario,
                                             std::span<const NamedTest> tests) {
  if (tests.size() != report.tests.size()) {
    throw DomainError("comparison needs the same tests the simulation ran");
  }
  const auto errors = node_error_report(scenario, Prior{report.p_e});
  std::vector<StatComparison> out;
  for (std::size_t c = 0; c < report.classes.size(); ++c) {
    const auto& sim = report.classes[c];
    const auto& ref = errors.classes[c];
    out.push_back({"q_E", sim.label, sim.silent_given_event, ref.type1});
    out.push_back({"p1_hat", sim.label, sim.event_given_silent, ref.post_event_given_silent});
    out.push_back({"p2_hat", sim.label, sim.normal_given_alarm, ref.post_normal_given_alarm});
  }
  for (std::size_t t = 0; t < tests.size(); ++t) {
    const auto oc = std::visit([&](const auto& rule) { return operating_characteristics(rule, scenario); },
                               tests[t].rule);
    out.push_back({"accept_given_event", report.tests[t].name, report.tests[t].accept_given_event,
                   1.0 - oc.type1});
    out.push_back({"reject_given_normal", report.tests[t].name, report.tests[t].reject_given_normal,
                   oc.power});
  }
  return out;
}

std::vector<TrialLog> simulate_calibration_logs(const ValidatedScenario& scenario, Condition condition,
                                                std::size_t n_logs, std::uint64_t master_seed) {
  const Prior forced{condition == Condition::ControlledEvent ? 1.0 : 0.0};
  const auto detect = scenario.topology().detect_probs();
  TrialOutcome trial;
  trial.sensor_class = sensor_classes(scenario);
  std::vector<TrialLog> logs;
  logs.reserve(n_logs);
  for (std::size_t l = 0; l < n_logs; ++l) {
    draw_trial(scenario, detect, forced, trial_seed(master_seed, l), {}, trial);
    TrialLog log{condition, l, {}};
    for (std::size_t s = 0; s < trial.sensor_class.size(); ++s) {
      log.records.push_back({trial.sensor_class[s], trial.detected[s], trial.alarmed[s]});
    }
    logs.push_back(std::move(log));
  }
  return logs;
}

}  // namespace wsnfd
