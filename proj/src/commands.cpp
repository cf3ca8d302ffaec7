#include "wsnfd/commands.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "wsnfd/decision_tests.hpp"
#include "wsnfd/estimation.hpp"
#include "wsnfd/node_errors.hpp"
#include "wsnfd/report.hpp"
#include "wsnfd/scenario_file.hpp"
#include "wsnfd/score_dist.hpp"
#include "wsnfd/simulator.hpp"

namespace wsnfd {

namespace {

struct CommonOptions {
  std::string scenario;
  std::string format = "text";
  std::string out;
  std::string weight_mode;
  std::vector<double> sizes;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  unsigned threads = 1;
  std::string logs;
  std::string condition = "event";
  std::size_t n_logs = 1000;
  std::string hypothesis = "h0";
};

OutputFormat output_format(const CommonOptions& o) {
  return o.format == "csv" ? OutputFormat::csv : OutputFormat::text;
}

WeightMode weight_mode(const CommonOptions& o, const ScenarioFile& sc) {
  if (o.weight_mode.empty()) return sc.weight_mode;
  const auto mode = parse_weight_mode(o.weight_mode);
  if (mode == WeightMode::paper_approx && !sc.approx) {
    throw DomainError("--weight-mode paper-approx needs a paper_approx block in the scenario file");
  }
  return mode;
}

std::string class_col(const char* stem, std::size_t i) { return std::string(stem) + "_" + std::to_string(i + 1); }

std::string bayes_rule(const BayesTest& t) {
  if (!t.applicable) return "never reject H0 (declare event)";
  if (t.degenerate) return "reject H0 iff no sensor alarms";
  std::string rule = "reject H0 if ";
  for (std::size_t i = 0; i < t.weights.size(); ++i) {
    if (i > 0) rule += " + ";
    rule += fixed(t.weights[i], 4) + " x" + std::to_string(i + 1);
  }
  return rule + " < " + fixed(t.threshold, 4);
}

std::string mp_rule(const MPTest& t) {
  if (t.degenerate) return "if no sensor alarms, reject H0 w.p. " + fixed(t.k, 4);
  return "reject H0 if X < " + fixed(t.threshold, 4) + "; if X = " + fixed(t.threshold, 4) +
         ", reject w.p. " + fixed(t.k, 4);
}

MPTest solve_for_mode(const ValidatedScenario& vs, const ScenarioFile& sc, WeightMode mode, double size) {
  return mode == WeightMode::paper_approx ? solve_mp_test(vs, size, *sc.approx) : solve_mp_test(vs, size);
}

std::string size_label(double size) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", size);
  return buf;
}

Table cmd_errors(const ScenarioFile& sc) {
  const auto vs = sc.validated();
  std::vector<std::string> header{"p_e"};
  for (std::size_t i = 0; i < vs.num_classes(); ++i) {
    header.push_back(class_col("Q_E", i));
    header.push_back(class_col("P1", i));
    header.push_back(class_col("P2", i));
  }
  Table table(header);
  for (double pe : sc.p_e) {
    const auto rep = node_error_report(vs, Prior{pe});
    std::vector<std::string> row{num(pe)};
    for (const auto& c : rep.classes) {
      row.push_back(num(c.type1));
      row.push_back(num(c.post_event_given_silent));
      row.push_back(num(c.post_normal_given_alarm));
    }
    table.add_row(std::move(row));
  }
  return table;
}

Table cmd_bayes(const ScenarioFile& sc) {
  const auto vs = sc.validated();
  std::vector<std::string> header{"p_e", "l", "t", "applicable"};
  for (std::size_t i = 0; i < vs.num_classes(); ++i) header.push_back(class_col("t", i));
  header.push_back("rule");
  Table table(header);
  for (double pe : sc.p_e) {
    for (double l : sc.loss_ratios) {
      const auto test = bayes_test(vs, Prior{pe}, LossRatio{l});
      std::vector<std::string> row{num(pe), num(l), num(test.threshold), test.applicable ? "yes" : "no"};
      for (double w : test.weights) row.push_back(num(w));
      row.push_back(bayes_rule(test));
      table.add_row(std::move(row));
    }
  }
  return table;
}

Table cmd_mp(const ScenarioFile& sc, const CommonOptions& o) {
  const auto vs = sc.validated();
  const auto mode = weight_mode(o, sc);
  const auto sizes = o.sizes.empty() ? sc.all_sizes() : o.sizes;
  Table table({"level", "size", "weight_mode", "lambda", "k", "exact_size", "exact_power", "true_size",
               "true_power", "rule"});
  for (double size : sizes) {
    const auto test = solve_for_mode(vs, sc, mode, size);
    const auto oc = operating_characteristics(test, vs);
    table.add_row({num(1.0 - size), num(size), std::string(to_string(mode)), num(test.threshold),
                   num(test.k), num(test.exact_size), num(test.exact_power), num(oc.type1),
                   num(oc.power), mp_rule(test)});
  }
  return table;
}

Table cmd_simulate(const ScenarioFile& sc, const CommonOptions& o) {
  const auto vs = sc.validated();
  const auto mode = weight_mode(o, sc);
  if (sc.p_e.empty()) throw DomainError("simulate needs at least one prior p_e in the scenario");
  SimOptions opts;
  opts.n_trials = o.trials.value_or(sc.simulation.n_trials);
  opts.master_seed = o.seed.value_or(sc.simulation.master_seed);
  opts.threads = o.threads;
  const auto sizes = o.sizes.empty() ? sc.all_sizes() : o.sizes;

  Table table({"p_e", "seed", "trials", "generator", "statistic", "subject", "empirical", "exact",
               "abs_diff", "hits", "denominator", "band3", "within"});
  for (double pe : sc.p_e) {
    std::vector<NamedTest> tests;
    for (double l : sc.loss_ratios) {
      tests.push_back({"bayes l=" + size_label(l), bayes_test(vs, Prior{pe}, LossRatio{l})});
    }
    for (double size : sizes) {
      tests.push_back({"mp size=" + size_label(size), solve_for_mode(vs, sc, mode, size)});
    }
    const auto report = run_trials(vs, Prior{pe}, tests, opts);
    for (const auto& cmp : compare_to_exact(report, vs, tests)) {
      const bool empty = cmp.count.total == 0;
      table.add_row({num(pe), std::to_string(report.seed), std::to_string(report.trials),
                     report.generator, cmp.statistic, cmp.subject,
                     empty ? "nan" : num(cmp.empirical()), num(cmp.exact),
                     empty ? "nan" : num(std::fabs(cmp.empirical() - cmp.exact)),
                     std::to_string(cmp.count.hits), std::to_string(cmp.count.total), num(cmp.band3()),
                     empty ? "n/a" : (cmp.within_band() ? "yes" : "no")});
    }
  }
  return table;
}

Table cmd_dist(const ScenarioFile& sc, const CommonOptions& o) {
  const auto vs = sc.validated();
  const auto mode = weight_mode(o, sc);
  const bool h0 = o.hypothesis == "h0";
  std::vector<double> weights;
  ClassAlarmLaw law = h0 ? event_law(vs) : normal_law(vs);
  if (mode == WeightMode::paper_approx) {
    weights = sc.approx->weights;
    if (h0) law.alarm_probs = sc.approx->alarm_probs;
  } else {
    weights = derived_stats(vs).weight;
  }
  Table table({"value", "prob", "cumulative"});
  const auto dist = score_distribution(weights, law);
  double cum = 0.0;
  for (const auto& atom : dist.atoms()) {
    cum += atom.prob;
    table.add_row({num(atom.value), num(atom.prob), num(cum)});
  }
  return table;
}

Table cmd_estimate(const CommonOptions& o) {
  std::ifstream in(o.logs);
  if (!in) throw DomainError("cannot open log file '" + o.logs + "'");
  const auto logs = read_trial_logs(in);
  std::vector<TrialLog> event;
  std::vector<TrialLog> normal;
  for (const auto& log : logs) (log.condition == Condition::Normal ? normal : event).push_back(log);
  if (event.empty() && normal.empty()) throw DomainError("log file '" + o.logs + "' has no records");

  Table table({"parameter", "class", "estimate", "std_error", "n_logs"});
  const auto add = [&](const std::string& name, const std::string& cls, const Estimate& e) {
    table.add_row({name, cls, num(e.value), num(e.std_error), std::to_string(e.n_logs)});
  };
  if (!event.empty()) {
    const auto det = estimate_detection(event);
    for (std::size_t i = 0; i < det.size(); ++i) add("p_detect", std::to_string(i + 1), det[i]);
    add("p_c", "all", estimate_correct_response(event));
  }
  if (!normal.empty()) add("p_w", "all", estimate_false_response(normal));
  return table;
}

void gen_logs(const ScenarioFile& sc, const CommonOptions& o, std::ostream& out) {
  const auto vs = sc.validated();
  const std::uint64_t seed = o.seed.value_or(sc.simulation.master_seed);
  if (o.condition == "event" || o.condition == "both") {
    write_trial_logs(out, simulate_calibration_logs(vs, Condition::ControlledEvent, o.n_logs, seed));
  }
  if (o.condition == "normal" || o.condition == "both") {
    std::ostringstream normal;
    write_trial_logs(normal, simulate_calibration_logs(vs, Condition::Normal, o.n_logs, seed + 1));
    auto text = normal.str();
    // one header per file
    if (o.condition == "both") text.erase(0, text.find('\n') + 1);
    out << text;
  }
}

void add_output_options(CLI::App* sub, CommonOptions& o) {
  sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "csv"}));
  sub->add_option("--out", o.out, "Write output to PATH instead of stdout");
}

void add_scenario_option(CLI::App* sub, CommonOptions& o) {
  sub->add_option("--scenario", o.scenario, "Scenario file (JSON)")->required();
}

void add_weight_mode_option(CLI::App* sub, CommonOptions& o) {
  sub->add_option("--weight-mode", o.weight_mode, "Override the scenario weight mode")
      ->check(CLI::IsMember({"exact", "paper-approx", "paper_approx"}));
}

void add_sizes_option(CLI::App* sub, CommonOptions& o) {
  sub->add_option("--sizes", o.sizes, "Comma-separated test sizes, overriding the scenario")
      ->delimiter(',');
}

void emit(const std::string& text, const CommonOptions& o, std::ostream& out) {
  if (o.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(o.out);
  if (!file) throw DomainError("cannot open output file '" + o.out + "'");
  file << text;
  if (!file) throw DomainError("failed writing output file '" + o.out + "'");
}

}  // namespace

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fault-aware event detection analyses for sensor networks", "wsnfd"};
  app.require_subcommand(1);
  CommonOptions o;

  auto* errors = app.add_subcommand("errors", "Node error probabilities per prior p_e");
  auto* bayes = app.add_subcommand("bayes", "Bayes test weights and thresholds per (p_e, l)");
  auto* mp = app.add_subcommand("mp", "Most powerful randomized test per size");
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo report next to exact values");
  auto* dist = app.add_subcommand("dist", "Atoms of the weighted alarm score distribution");
  auto* genlogs = app.add_subcommand("gen-logs", "Simulated calibration logs (CSV)");
  auto* estimate = app.add_subcommand("estimate", "Parameter estimates from calibration logs");

  for (auto* sub : {errors, bayes, mp, simulate, dist, genlogs}) add_scenario_option(sub, o);
  for (auto* sub : {errors, bayes, mp, simulate, dist, estimate}) add_output_options(sub, o);
  genlogs->add_option("--out", o.out, "Write output to PATH instead of stdout");
  for (auto* sub : {mp, simulate, dist}) add_weight_mode_option(sub, o);
  for (auto* sub : {mp, simulate}) add_sizes_option(sub, o);
  for (auto* sub : {simulate, genlogs}) sub->add_option("--seed", o.seed, "Master seed");
  simulate->add_option("--trials", o.trials, "Number of trials per prior");
  simulate->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
  dist->add_option("--hypothesis", o.hypothesis, "h0 (event) or h1 (normal)")
      ->check(CLI::IsMember({"h0", "h1"}));
  genlogs->add_option("--condition", o.condition, "event, normal or both")
      ->check(CLI::IsMember({"event", "normal", "both"}));
  genlogs->add_option("--logs", o.n_logs, "Number of logs per condition");
  estimate->add_option("--logs", o.logs, "Log file (condition,trial,class,y,x)")->required();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    std::ostringstream buf;
    if (genlogs->parsed()) {
      gen_logs(load_scenario(o.scenario), o, buf);
    } else {
      std::optional<Table> table;
      if (estimate->parsed()) {
        table = cmd_estimate(o);
      } else {
        const auto sc = load_scenario(o.scenario);
        if (errors->parsed()) table = cmd_errors(sc);
        if (bayes->parsed()) table = cmd_bayes(sc);
        if (mp->parsed()) table = cmd_mp(sc, o);
        if (simulate->parsed()) table = cmd_simulate(sc, o);
        if (dist->parsed()) table = cmd_dist(sc, o);
      }
      table->render(buf, output_format(o));
    }
    emit(buf.str(), o, out);
  } catch (const std::exception& e) {
    err << "wsnfd: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace wsnfd
