// score_dist.hpp -- exact distribution of the weighted alarm score
//
//   X = sum_i w_i * x_i,   x_i ~ Binomial(n_i, q_i) independently,
//
// where x_i is the number of alarming sensors in class i. Both hypotheses
// share this shape: under Event q_i = P_E[i], under Normal q_i = p_w.
//
// The distribution is kept as sorted atoms. Count tuples whose scores agree
// within kScoreRelTol are merged into one atom so that integer-valued weight
// approximations (e.g. 5:3:2) put all equal scores on a single point.
#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "wsnfd/model.hpp"

namespace wsnfd {

inline constexpr double kScoreRelTol = 1e-9;

/// Node count above which the per-sensor enumeration oracles refuse to run.
inline constexpr int kMaxEnumerationNodes = 20;

/// True when two scores are the same atom: |a - b| <= 1e-9 * max(1, |a|, |b|).
[[nodiscard]] bool same_score(double a, double b) noexcept;

/// Per-class alarm law: class i has counts[i] sensors, each alarming
/// independently with probability alarm_probs[i].
struct ClassAlarmLaw {
  std::vector<int> counts;
  std::vector<double> alarm_probs;

  [[nodiscard]] std::size_t num_classes() const noexcept { return counts.size(); }
  [[nodiscard]] int total_nodes() const noexcept;
};

/// Alarm law under H0 (Event): q_i = p_w + p_i d.
[[nodiscard]] ClassAlarmLaw event_law(const ValidatedScenario& scenario);
/// Alarm law under H1 (Normal): q_i = p_w for every class.
[[nodiscard]] ClassAlarmLaw normal_law(const ValidatedScenario& scenario);

using CountTuple = std::vector<int>;

struct Atom {
  double value = 0.0;
  double prob = 0.0;
  std::vector<CountTuple> support;
};

class ScoreDistribution {
public:
  ScoreDistribution() = default;

  /// Builds atoms from raw (score, probability, tuple) entries.
  struct Entry {
    double score;
    double prob;
    CountTuple tuple;
  };
  static ScoreDistribution from_entries(std::vector<Entry> entries);

  [[nodiscard]] const std::vector<Atom>& atoms() const noexcept { return atoms_; }

  /// Pr(X < v), excluding any atom that matches v.
  [[nodiscard]] double prob_below(double v) const noexcept;
  /// Pr(X = v) for the atom matching v, 0 if none does.
  [[nodiscard]] double prob_at(double v) const noexcept;
  [[nodiscard]] double total_mass() const noexcept;
  [[nodiscard]] double mean() const noexcept;

private:
  std::vector<Atom> atoms_;
};

/// Binomial(n, q) mass at k.
[[nodiscard]] double binomial_pmf(int n, int k, double q) noexcept;

/// Calls `fn(tuple, prob)` for every count tuple (x_1..x_m), x_i in 0..n_i,
/// with its product-binomial probability.
void for_each_count_tuple(const ClassAlarmLaw& law,
                          const std::function<void(const CountTuple&, double)>& fn);

/// Score of a count tuple. Classes with zero alarms contribute nothing, so
/// infinite weights are only ever multiplied by positive counts.
[[nodiscard]] double weighted_score(std::span<const double> weights, std::span<const int> counts) noexcept;

/// Exact distribution by enumerating all prod_i (n_i + 1) count tuples.
/// Throws DomainError for non-positive or non-finite weights.
[[nodiscard]] ScoreDistribution score_distribution(std::span<const double> weights,
                                                   const ClassAlarmLaw& law);

/// Independent oracle: enumerates all 2^N individual response vectors, each
/// with its own product of Bernoulli masses. Throws DomainError when
/// N > kMaxEnumerationNodes.
[[nodiscard]] ScoreDistribution brute_force_distribution(std::span<const double> weights,
                                                         const ClassAlarmLaw& law);

}  // namespace wsnfd
