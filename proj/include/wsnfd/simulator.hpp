// simulator.hpp -- seeded Monte Carlo of the two-stage detection/response
// model, with node-level error tallies and empirical test operating
// characteristics.
//
// Every trial draws from its own generator, seeded by hashing
// (master_seed, trial index), so a run is bit-reproducible regardless of
// how trials are distributed over threads.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "wsnfd/decision_tests.hpp"
#include "wsnfd/estimation.hpp"
#include "wsnfd/model.hpp"

namespace wsnfd {

/// SplitMix64 (Steele, Lea & Flood). Satisfies UniformRandomBitGenerator.
class SplitMix64 {
public:
  using result_type = std::uint64_t;
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

private:
  std::uint64_t state_;
};

inline constexpr const char* kGeneratorName = "splitmix64";

/// Counter-based seed for trial `index` of a run.
[[nodiscard]] std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t index) noexcept;

enum class Truth {
  Event,
  Normal,
};

using TestRule = std::variant<MPTest, BayesTest>;

struct NamedTest {
  std::string name;
  TestRule rule;
};

struct TrialOutcome {
  Truth truth = Truth::Normal;
  std::vector<int> sensor_class;      // class index of each sensor
  std::vector<std::uint8_t> detected; // y
  std::vector<std::uint8_t> alarmed;  // x
  std::vector<Decision> decisions;    // one per supplied test

  [[nodiscard]] Observation observation(std::size_t num_classes) const;
};

/// One world. `prior.p_e` may be 0 or 1 here (forced truth).
[[nodiscard]] TrialOutcome simulate_trial(const ValidatedScenario& scenario, Prior prior,
                                          std::uint64_t seed, std::span<const NamedTest> tests = {});

/// hits / total, with the denominator kept.
struct RateCount {
  std::uint64_t hits = 0;
  std::uint64_t total = 0;
  [[nodiscard]] double rate() const noexcept {
    return total == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total);
  }
  friend bool operator==(const RateCount&, const RateCount&) = default;
};

struct ClassSimStats {
  std::string label;
  RateCount silent_given_event;   // q_E: pooled over all class sensors in Event trials
  RateCount event_given_silent;   // p1-hat: reference sensor (first of class) silent
  RateCount normal_given_alarm;   // p2-hat: reference sensor alarmed
  friend bool operator==(const ClassSimStats&, const ClassSimStats&) = default;
};

struct TestSimStats {
  std::string name;
  RateCount accept_given_event;   // 1 - type I error
  RateCount reject_given_normal;  // power
  friend bool operator==(const TestSimStats&, const TestSimStats&) = default;
};

struct SimReport {
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::string generator = kGeneratorName;
  double p_e = 0.0;
  std::uint64_t n_event = 0;
  std::uint64_t n_normal = 0;
  std::vector<ClassSimStats> classes;
  std::vector<TestSimStats> tests;

  friend bool operator==(const SimReport&, const SimReport&) = default;
};

struct SimOptions {
  std::uint64_t n_trials = 100000;
  std::uint64_t master_seed = 1;
  unsigned threads = 1;  // 0 = hardware concurrency
};

/// Throws DomainError if n_trials == 0.
[[nodiscard]] SimReport run_trials(const ValidatedScenario& scenario, Prior prior,
                                   std::span<const NamedTest> tests, const SimOptions& options);

/// One simulated statistic next to its closed-form counterpart.
struct StatComparison {
  std::string statistic;  // q_E, p1_hat, p2_hat, accept_given_event, reject_given_normal
  std::string subject;    // class label or test name
  RateCount count;
  double exact = 0.0;

  [[nodiscard]] double empirical() const noexcept { return count.rate(); }
  /// 3 * sqrt(exact (1 - exact) / denominator); NaN when the denominator is 0.
  [[nodiscard]] double band3() const noexcept;
  /// False when there is nothing to compare (denominator 0).
  [[nodiscard]] bool within_band() const noexcept;
};

/// Pairs every statistic in `report` with its exact value (node error report
/// for the per-class rates, operating characteristics for the tests). `tests`
/// must be the list the report was produced with; `report.p_e` must lie in (0,1).
[[nodiscard]] std::vector<StatComparison> compare_to_exact(const SimReport& report,
                                                           const ValidatedScenario& scenario,
                                                           std::span<const NamedTest> tests);

/// Calibration experiments for the estimators: `n_logs` logs under a staged
/// event or a quiet region.
[[nodiscard]] std::vector<TrialLog> simulate_calibration_logs(const ValidatedScenario& scenario,
                                                              Condition condition,
                                                              std::size_t n_logs,
                                                              std::uint64_t master_seed);

}  // namespace wsnfd
