#include "wsnfd/score_dist.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace wsnfd {

namespace {

void check_inputs(std::span<const double> weights, const ClassAlarmLaw& law) {
  if (law.counts.size() != law.alarm_probs.size()) {
    throw DomainError("alarm law needs one probability per class");
  }
  if (weights.size() != law.counts.size()) {
    throw DomainError("score needs one weight per class: got " + std::to_string(weights.size()) +
                      " weights for " + std::to_string(law.counts.size()) + " classes");
  }
  for (double w : weights) {
    if (!std::isfinite(w) || w <= 0.0) {
      throw DomainError("score weights must be finite and positive");
    }
  }
  for (std::size_t i = 0; i < law.counts.size(); ++i) {
    if (law.counts[i] < 1) throw DomainError("every class needs at least one node");
    const double q = law.alarm_probs[i];
    if (!(q >= 0.0 && q <= 1.0)) throw DomainError("alarm probabilities must lie in [0,1]");
  }
}

}  // namespace

bool same_score(double a, double b) noexcept {
  if (a == b) return true;
  if (!std::isfinite(a) || !std::isfinite(b)) return false;
  const double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
  return std::fabs(a - b) <= kScoreRelTol * scale;
}

int ClassAlarmLaw::total_nodes() const noexcept {
  int total = 0;
  for (int c : counts) total += c;
  return total;
}

ClassAlarmLaw event_law(const ValidatedScenario& scenario) {
  return {scenario.topology().counts(), derived_stats(scenario).alarm_event};
}

ClassAlarmLaw normal_law(const ValidatedScenario& scenario) {
  const auto counts = scenario.topology().counts();
  return {counts, std::vector<double>(counts.size(), scenario.channel().p_w)};
}

ScoreDistribution ScoreDistribution::from_entries(std::vector<Entry> entries) {
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.score < b.score; });
  ScoreDistribution dist;
  for (auto& e : entries) {
    if (e.prob <= 0.0) continue;
    if (dist.atoms_.empty() || !same_score(e.score, dist.atoms_.back().value)) {
      dist.atoms_.push_back({e.score, 0.0, {}});
    }
    auto& atom = dist.atoms_.back();
    atom.prob += e.prob;
    atom.support.push_back(std::move(e.tuple));
  }
  for (auto& atom : dist.atoms_) std::sort(atom.support.begin(), atom.support.end());
  return dist;
}

double ScoreDistribution::prob_below(double v) const noexcept {
  double total = 0.0;
  for (const auto& atom : atoms_) {
    if (atom.value >= v || same_score(atom.value, v)) break;
    total += atom.prob;
  }
  return total;
}

double ScoreDistribution::prob_at(double v) const noexcept {
  for (const auto& atom : atoms_) {
    if (same_score(atom.value, v)) return atom.prob;
    if (atom.value > v) break;
  }
  return 0.0;
}

double ScoreDistribution::total_mass() const noexcept {
  double total = 0.0;
  for (const auto& atom : atoms_) total += atom.prob;
  return total;
}

double ScoreDistribution::mean() const noexcept {
  double total = 0.0;
  for (const auto& atom : atoms_) total += atom.value * atom.prob;
  return total;
}

double binomial_pmf(int n, int k, double q) noexcept {
  if (k < 0 || k > n) return 0.0;
  double coeff = 1.0;
  for (int j = 1; j <= k; ++j) coeff = coeff * (n - k + j) / j;
  return coeff * std::pow(q, k) * std::pow(1.0 - q, n - k);
}

void for_each_count_tuple(const ClassAlarmLaw& law,
                          const std::function<void(const CountTuple&, double)>& fn) {
  const std::size_t m = law.counts.size();
  std::vector<std::vector<double>> pmf(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (int k = 0; k <= law.counts[i]; ++k) {
      pmf[i].push_back(binomial_pmf(law.counts[i], k, law.alarm_probs[i]));
    }
  }
  CountTuple tuple(m, 0);
  while (true) {
    double prob = 1.0;
    for (std::size_t i = 0; i < m; ++i) prob *= pmf[i][tuple[i]];
    fn(tuple, prob);
    // mixed-radix increment, last class fastest
    std::size_t i = m;
    while (i > 0) {
      --i;
      if (tuple[i] < law.counts[i]) {
        ++tuple[i];
        break;
      }
      tuple[i] = 0;
      if (i == 0) return;
    }
    if (m == 0) return;
  }
}

double weighted_score(std::span<const double> weights, std::span<const int> counts) noexcept {
  double score = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] != 0) score += weights[i] * counts[i];
  }
  return score;
}

ScoreDistribution score_distribution(std::span<const double> weights, const ClassAlarmLaw& law) {
  check_inputs(weights, law);
  std::vector<ScoreDistribution::Entry> entries;
  for_each_count_tuple(law, [&](const CountTuple& tuple, double prob) {
    entries.push_back({weighted_score(weights, tuple), prob, tuple});
  });
  return ScoreDistribution::from_entries(std::move(entries));
}

ScoreDistribution brute_force_distribution(std::span<const double> weights, const ClassAlarmLaw& law) {
  check_inputs(weights, law);
  const int n_nodes = law.total_nodes();
  if (n_nodes > kMaxEnumerationNodes) {
    throw DomainError("brute-force enumeration supports at most " +
                      std::to_string(kMaxEnumerationNodes) + " nodes, got " +
                      std::to_string(n_nodes));
  }
  std::vector<std::size_t> sensor_class;
  for (std::size_t i = 0; i < law.counts.size(); ++i) {
    sensor_class.insert(sensor_class.end(), static_cast<std::size_t>(law.counts[i]), i);
  }

  // (score, prob) accumulated per count tuple
  std::map<CountTuple, std::pair<double, double>> by_tuple;
  const std::uint64_t n_vectors = std::uint64_t{1} << n_nodes;
  for (std::uint64_t bits = 0; bits < n_vectors; ++bits) {
    double prob = 1.0;
    double score = 0.0;
    CountTuple tuple(law.counts.size(), 0);
    for (int s = 0; s < n_nodes; ++s) {
      const std::size_t c = sensor_class[static_cast<std::size_t>(s)];
      const double q = law.alarm_probs[c];
      if ((bits >> s) & 1U) {
        prob *= q;
        score += weights[c];
        ++tuple[c];
      } else {
        prob *= 1.0 - q;
      }
    }
    auto [it, inserted] = by_tuple.try_emplace(std::move(tuple), score, 0.0);
    it->second.second += prob;
  }

  std::vector<ScoreDistribution::Entry> entries;
  entries.reserve(by_tuple.size());
  for (auto& [tuple, sp] : by_tuple) entries.push_back({sp.first, sp.second, tuple});
  return ScoreDistribution::from_entries(std::move(entries));
}

}  // namespace wsnfd
