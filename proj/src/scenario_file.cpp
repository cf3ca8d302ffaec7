#include "wsnfd/scenario_file.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace wsnfd {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw DomainError("scenario field '" + path + "': " + what);
}

void allow_keys(const json& obj, const std::string& path, std::set<std::string> allowed) {
  if (!obj.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) fail(path.empty() ? key : path + "." + key, "unknown key");
  }
}

const json& required(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) fail(path.empty() ? key : path + "." + key, "missing required key");
  return obj.at(key);
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

std::uint64_t unsigned_int(const json& v, const std::string& path) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    fail(path, "expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::string text(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

std::vector<double> number_list(const json& v, const std::string& path, bool scalar_ok) {
  std::vector<double> out;
  if (scalar_ok && v.is_number()) return {v.get<double>()};
  if (!v.is_array()) fail(path, scalar_ok ? "expected a number or a list of numbers" : "expected a list of numbers");
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace

WeightMode parse_weight_mode(std::string_view name) {
  if (name == "exact") return WeightMode::exact;
  if (name == "paper_approx" || name == "paper-approx") return WeightMode::paper_approx;
  throw DomainError("unknown weight mode '" + std::string(name) + "' (expected exact or paper_approx)");
}

std::string_view to_string(WeightMode mode) noexcept {
  return mode == WeightMode::exact ? "exact" : "paper_approx";
}

ValidatedScenario ScenarioFile::validated() const { return validate(channel, topology); }

std::vector<double> ScenarioFile::all_sizes() const {
  auto out = sizes;
  for (double level : levels) out.push_back(1.0 - level);
  return out;
}

ScenarioFile parse_scenario(std::string_view source) {
  json doc;
  try {
    doc = json::parse(source.begin(), source.end());
  } catch (const json::parse_error& e) {
    throw DomainError(std::string("scenario is not valid JSON: ") + e.what());
  }
  allow_keys(doc, "", {"schema", "name", "channel", "topology", "prior", "loss_ratio", "size_alpha",
                       "levels", "simulation", "weight_mode", "paper_approx"});

  const auto schema = unsigned_int(required(doc, "schema", ""), "schema");
  if (schema != kScenarioSchema) {
    fail("schema", "unsupported version " + std::to_string(schema) + " (expected " +
                       std::to_string(kScenarioSchema) + ")");
  }

  ScenarioFile sc;
  if (doc.contains("name")) sc.name = text(doc["name"], "name");

  const auto& channel = required(doc, "channel", "");
  allow_keys(channel, "channel", {"p_c", "p_w"});
  sc.channel.p_c = number(required(channel, "p_c", "channel"), "channel.p_c");
  sc.channel.p_w = number(required(channel, "p_w", "channel"), "channel.p_w");

  const auto& topo = required(doc, "topology", "");
  allow_keys(topo, "topology", {"kind", "detect_probs", "classes"});
  try {
    sc.kind = parse_topology_kind(text(required(topo, "kind", "topology"), "topology.kind"));
  } catch (const DomainError& e) {
    fail("topology.kind", e.what());
  }
  if (sc.kind == TopologyKind::custom) {
    if (topo.contains("detect_probs")) fail("topology.detect_probs", "custom topologies list 'classes' instead");
    const auto& classes = required(topo, "classes", "topology");
    if (!classes.is_array()) fail("topology.classes", "expected a list");
    for (std::size_t i = 0; i < classes.size(); ++i) {
      const std::string path = "topology.classes[" + std::to_string(i) + "]";
      allow_keys(classes[i], path, {"label", "count", "p_detect"});
      SensorClass c;
      c.label = classes[i].contains("label") ? text(classes[i]["label"], path + ".label")
                                             : "class-" + std::to_string(i + 1);
      c.count = static_cast<int>(unsigned_int(required(classes[i], "count", path), path + ".count"));
      c.p_detect = number(required(classes[i], "p_detect", path), path + ".p_detect");
      sc.topology.classes.push_back(std::move(c));
    }
  } else {
    if (topo.contains("classes")) fail("topology.classes", "only custom topologies list classes");
    const auto probs = number_list(required(topo, "detect_probs", "topology"), "topology.detect_probs", false);
    try {
      sc.topology = builtin_topology(sc.kind, probs);
    } catch (const DomainError& e) {
      fail("topology.detect_probs", e.what());
    }
  }

  if (doc.contains("prior")) {
    allow_keys(doc["prior"], "prior", {"p_e"});
    sc.p_e = number_list(required(doc["prior"], "p_e", "prior"), "prior.p_e", true);
    for (double pe : sc.p_e) {
      try {
        (void)validate_prior(Prior{pe});
      } catch (const DomainError& e) {
        fail("prior.p_e", e.what());
      }
    }
  }
  if (doc.contains("loss_ratio")) {
    sc.loss_ratios = number_list(doc["loss_ratio"], "loss_ratio", true);
    for (double l : sc.loss_ratios) {
      try {
        (void)validate_loss(LossRatio{l});
      } catch (const DomainError& e) {
        fail("loss_ratio", e.what());
      }
    }
  }
  if (doc.contains("size_alpha")) sc.sizes = number_list(doc["size_alpha"], "size_alpha", true);
  if (doc.contains("levels")) sc.levels = number_list(doc["levels"], "levels", true);
  for (double s : sc.all_sizes()) {
    if (!(s > 0.0 && s < 1.0)) fail(doc.contains("levels") ? "levels" : "size_alpha", "sizes must lie in (0,1)");
  }

  if (doc.contains("simulation")) {
    const auto& sim = doc["simulation"];
    allow_keys(sim, "simulation", {"n_trials", "master_seed"});
    if (sim.contains("n_trials")) sc.simulation.n_trials = unsigned_int(sim["n_trials"], "simulation.n_trials");
    if (sim.contains("master_seed")) {
      sc.simulation.master_seed = unsigned_int(sim["master_seed"], "simulation.master_seed");
    }
  }
  if (doc.contains("weight_mode")) {
    try {
      sc.weight_mode = parse_weight_mode(text(doc["weight_mode"], "weight_mode"));
    } catch (const DomainError& e) {
      fail("weight_mode", e.what());
    }
  }
  if (doc.contains("paper_approx")) {
    const auto& pa = doc["paper_approx"];
    allow_keys(pa, "paper_approx", {"weights", "alarm_probs"});
    ApproxWeights approx;
    approx.weights = number_list(required(pa, "weights", "paper_approx"), "paper_approx.weights", false);
    approx.alarm_probs =
        number_list(required(pa, "alarm_probs", "paper_approx"), "paper_approx.alarm_probs", false);
    if (approx.weights.size() != sc.topology.classes.size() ||
        approx.alarm_probs.size() != sc.topology.classes.size()) {
      fail("paper_approx", "needs one weight and one alarm probability per class");
    }
    sc.approx = std::move(approx);
  }
  if (sc.weight_mode == WeightMode::paper_approx && !sc.approx) {
    fail("paper_approx", "weight_mode paper_approx requires a paper_approx block");
  }

  try {
    (void)sc.validated();
  } catch (const DomainError& e) {
    fail("channel/topology", e.what());
  }
  return sc;
}

ScenarioFile load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open scenario file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

}  // namespace wsnfd
