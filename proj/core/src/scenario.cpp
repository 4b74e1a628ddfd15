#include "commtrust/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "commtrust/error.hpp"

namespace commtrust {
namespace {

using json = nlohmann::json;

std::string_view experiment_name(Experiment e) {
  return e == Experiment::kAuthBound ? "auth_bound" : "community";
}

/// Collects type and key errors while walking the document so a single
/// validation error can list all of them.
class Reader {
 public:
  explicit Reader(std::vector<std::string>& problems) : problems_(problems) {}

  template <typename T>
  void read(const json& obj, const char* key, T& out, const std::string& path) {
    if (!obj.contains(key)) return;
    try {
      out = obj.at(key).get<T>();
    } catch (const json::exception&) {
      problems_.push_back(path + key + ": wrong type");
    }
  }

  bool object(const json& j, const std::string& path) {
    if (j.is_object()) return true;
    problems_.push_back(path.empty() ? "document: expected an object" : path + ": expected an object");
    return false;
  }

  void allow_only(const json& obj, std::initializer_list<const char*> keys,
                  const std::string& path) {
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (!allowed.contains(it.key())) problems_.push_back(path + it.key() + ": unknown field");
    }
  }

  void problem(std::string text) { problems_.push_back(std::move(text)); }

 private:
  std::vector<std::string>& problems_;
};

AppId read_app_label(Reader& r, const std::string& label, const std::string& path) {
  try {
    return AppId::parse(label);
  } catch (const Error&) {
    r.problem(path + ": malformed app label '" + label + "'");
    return {};
  }
}

Scenario from_json(const json& doc, std::vector<std::string>& problems) {
  Reader r(problems);
  Scenario s;
  if (!r.object(doc, "")) return s;
  r.allow_only(doc,
               {"schema", "name", "seed", "experiment", "node_count", "types", "epochs",
                "node_defaults", "formation", "trust", "protocol", "apps", "compromise",
                "workload", "nodes", "edges", "auth_bound"},
               "");

  std::string schema;
  r.read(doc, "schema", schema, "");
  if (schema != kScenarioSchema) {
    r.problem("schema: expected \"" + std::string(kScenarioSchema) + "\"");
  }
  r.read(doc, "name", s.name, "");
  r.read(doc, "seed", s.seed, "");
  std::string experiment = "community";
  r.read(doc, "experiment", experiment, "");
  if (experiment == "community") {
    s.experiment = Experiment::kCommunity;
  } else if (experiment == "auth_bound") {
    s.experiment = Experiment::kAuthBound;
  } else {
    r.problem("experiment: expected \"community\" or \"auth_bound\"");
  }
  r.read(doc, "node_count", s.node_count, "");
  r.read(doc, "epochs", s.epochs, "");

  if (doc.contains("types") && r.object(doc["types"], "types")) {
    s.type_distribution.clear();
    for (auto it = doc["types"].begin(); it != doc["types"].end(); ++it) {
      double w = 0.0;
      r.read(doc["types"], it.key().c_str(), w, "types.");
      s.type_distribution.emplace_back(it.key(), w);
    }
  }

  if (doc.contains("node_defaults") && r.object(doc["node_defaults"], "node_defaults")) {
    const json& j = doc["node_defaults"];
    const std::string p = "node_defaults.";
    r.allow_only(j, {"key_length_bits", "max_degree", "old_device_fraction", "old_key_length_bits"}, p);
    r.read(j, "key_length_bits", s.node_defaults.key_length_bits, p);
    r.read(j, "max_degree", s.node_defaults.max_degree, p);
    r.read(j, "old_device_fraction", s.node_defaults.old_device_fraction, p);
    r.read(j, "old_key_length_bits", s.node_defaults.old_key_length_bits, p);
  }

  if (doc.contains("formation") && r.object(doc["formation"], "formation")) {
    const json& j = doc["formation"];
    const std::string p = "formation.";
    r.allow_only(j,
                 {"beta_same", "beta_diff", "link_cost", "trust_weight", "join_rate",
                  "leave_rate", "proposals_per_node", "severance_threshold", "supernodes",
                  "supernode_multiplier"},
                 p);
    auto& f = s.formation;
    r.read(j, "beta_same", f.beta_same, p);
    r.read(j, "beta_diff", f.beta_diff, p);
    r.read(j, "link_cost", f.link_cost, p);
    r.read(j, "trust_weight", f.trust_weight, p);
    r.read(j, "join_rate", f.join_rate, p);
    r.read(j, "leave_rate", f.leave_rate, p);
    r.read(j, "proposals_per_node", f.proposals_per_node, p);
    r.read(j, "severance_threshold", f.severance_threshold, p);
    r.read(j, "supernodes", s.supernodes, p);
    r.read(j, "supernode_multiplier", f.supernode_degree_multiplier, p);
  }

  if (doc.contains("trust") && r.object(doc["trust"], "trust")) {
    r.allow_only(doc["trust"], {"alpha"}, "trust.");
    r.read(doc["trust"], "alpha", s.trust_alpha, "trust.");
  }

  if (doc.contains("protocol") && r.object(doc["protocol"], "protocol")) {
    const json& j = doc["protocol"];
    const std::string p = "protocol.";
    r.allow_only(j,
                 {"digest_width", "mac_fanout", "quorum", "min_key_bits", "hop_limit",
                  "store_blocked"},
                 p);
    auto& pr = s.protocol;
    r.read(j, "digest_width", pr.digest_width, p);
    r.read(j, "mac_fanout", pr.mac_fanout, p);
    r.read(j, "quorum", pr.quorum, p);
    r.read(j, "min_key_bits", pr.min_key_bits, p);
    r.read(j, "hop_limit", pr.hop_limit, p);
    r.read(j, "store_blocked", pr.store_blocked, p);
  }

  if (doc.contains("apps")) {
    if (!doc["apps"].is_array()) {
      r.problem("apps: expected an array");
    } else {
      for (std::size_t i = 0; i < doc["apps"].size(); ++i) {
        const json& j = doc["apps"][i];
        const std::string p = "apps[" + std::to_string(i) + "].";
        if (!r.object(j, p)) continue;
        r.allow_only(j, {"name", "version", "payload_bytes", "initial_holders", "initial_infected"}, p);
        AppSpec app;
        r.read(j, "name", app.id.name, p);
        r.read(j, "version", app.id.version, p);
        r.read(j, "payload_bytes", app.payload_bytes, p);
        r.read(j, "initial_holders", app.initial_holders, p);
        r.read(j, "initial_infected", app.initial_infected, p);
        s.apps.push_back(std::move(app));
      }
    }
  }

  if (doc.contains("compromise") && r.object(doc["compromise"], "compromise")) {
    const json& j = doc["compromise"];
    r.allow_only(j, {"fraction", "mix"}, "compromise.");
    r.read(j, "fraction", s.compromise_fraction, "compromise.");
    if (j.contains("mix") && r.object(j["mix"], "compromise.mix")) {
      for (auto it = j["mix"].begin(); it != j["mix"].end(); ++it) {
        auto b = parse_behavior(it.key());
        if (!b) {
          r.problem("compromise.mix." + it.key() + ": unknown strategy");
          continue;
        }
        double w = 0.0;
        r.read(j["mix"], it.key().c_str(), w, "compromise.mix.");
        s.strategy_mix.emplace_back(*b, w);
      }
    }
  }

  if (doc.contains("workload") && r.object(doc["workload"], "workload")) {
    const json& j = doc["workload"];
    r.allow_only(j, {"requests_per_epoch", "requests"}, "workload.");
    r.read(j, "requests_per_epoch", s.workload.requests_per_epoch, "workload.");
    if (j.contains("requests")) {
      if (!j["requests"].is_array()) {
        r.problem("workload.requests: expected an array");
      } else {
        for (std::size_t i = 0; i < j["requests"].size(); ++i) {
          const json& q = j["requests"][i];
          const std::string p = "workload.requests[" + std::to_string(i) + "].";
          if (!r.object(q, p)) continue;
          r.allow_only(q, {"epoch", "node", "app"}, p);
          Request req;
          std::uint32_t node = 0;
          std::string app;
          r.read(q, "epoch", req.epoch, p);
          r.read(q, "node", node, p);
          r.read(q, "app", app, p);
          req.node = NodeId{node};
          req.app = read_app_label(r, app, p + "app");
          s.workload.requests.push_back(std::move(req));
        }
      }
    }
  }

  if (doc.contains("nodes")) {
    if (!doc["nodes"].is_array()) {
      r.problem("nodes: expected an array");
    } else {
      for (std::size_t i = 0; i < doc["nodes"].size(); ++i) {
        const json& j = doc["nodes"][i];
        const std::string p = "nodes[" + std::to_string(i) + "].";
        if (!r.object(j, p)) continue;
        r.allow_only(j, {"id", "type", "behavior", "key_length_bits", "max_degree", "apps"}, p);
        NodeSpec n;
        std::uint32_t id = static_cast<std::uint32_t>(i);
        r.read(j, "id", id, p);
        n.id = NodeId{id};
        n.node_type = s.type_distribution.front().first;
        r.read(j, "type", n.node_type, p);
        std::string behavior = "Honest";
        r.read(j, "behavior", behavior, p);
        if (auto b = parse_behavior(behavior)) {
          n.behavior = *b;
        } else {
          r.problem(p + "behavior: unknown strategy '" + behavior + "'");
        }
        if (j.contains("key_length_bits")) {
          int v = 0;
          r.read(j, "key_length_bits", v, p);
          n.key_length_bits = v;
        }
        if (j.contains("max_degree")) {
          int v = 0;
          r.read(j, "max_degree", v, p);
          n.max_degree = v;
        }
        if (j.contains("apps") && r.object(j["apps"], p + "apps")) {
          for (auto it = j["apps"].begin(); it != j["apps"].end(); ++it) {
            const AppId app = read_app_label(r, it.key(), p + "apps");
            std::string copy;
            r.read(j["apps"], it.key().c_str(), copy, p + "apps.");
            if (copy == "clean") {
              n.apps[app] = InitialCopy::kClean;
            } else if (copy == "tampered") {
              n.apps[app] = InitialCopy::kTampered;
            } else {
              r.problem(p + "apps." + it.key() + ": expected \"clean\" or \"tampered\"");
            }
          }
        }
        s.nodes.push_back(std::move(n));
      }
      if (!doc.contains("node_count")) s.node_count = s.nodes.size();
    }
  }

  if (doc.contains("edges")) {
    try {
      for (const auto& e : doc["edges"].get<std::vector<std::array<std::uint32_t, 2>>>()) {
        s.edges.emplace_back(NodeId{e[0]}, NodeId{e[1]});
      }
    } catch (const json::exception&) {
      r.problem("edges: expected an array of [id, id] pairs");
    }
  }

  if (doc.contains("auth_bound") && r.object(doc["auth_bound"], "auth_bound")) {
    const json& j = doc["auth_bound"];
    r.allow_only(j, {"verifiers", "compromise_p", "trials"}, "auth_bound.");
    r.read(j, "verifiers", s.auth_bound.verifiers, "auth_bound.");
    r.read(j, "compromise_p", s.auth_bound.compromise_p, "auth_bound.");
    r.read(j, "trials", s.auth_bound.trials, "auth_bound.");
  }
  return s;
}

json to_json(const Scenario& s) {
  json doc;
  doc["schema"] = kScenarioSchema;
  doc["name"] = s.name;
  doc["seed"] = s.seed;
  doc["experiment"] = experiment_name(s.experiment);
  doc["node_count"] = s.node_count;
  doc["epochs"] = s.epochs;
  json& types = doc["types"] = json::object();
  for (const auto& [t, w] : s.type_distribution) types[t] = w;
  doc["node_defaults"] = {{"key_length_bits", s.node_defaults.key_length_bits},
                          {"max_degree", s.node_defaults.max_degree},
                          {"old_device_fraction", s.node_defaults.old_device_fraction},
                          {"old_key_length_bits", s.node_defaults.old_key_length_bits}};
  const auto& f = s.formation;
  doc["formation"] = {{"beta_same", f.beta_same},
                      {"beta_diff", f.beta_diff},
                      {"link_cost", f.link_cost},
                      {"trust_weight", f.trust_weight},
                      {"join_rate", f.join_rate},
                      {"leave_rate", f.leave_rate},
                      {"proposals_per_node", f.proposals_per_node},
                      {"severance_threshold", f.severance_threshold},
                      {"supernodes", s.supernodes},
                      {"supernode_multiplier", f.supernode_degree_multiplier}};
  doc["trust"] = {{"alpha", s.trust_alpha}};
  const auto& p = s.protocol;
  doc["protocol"] = {{"digest_width", p.digest_width}, {"mac_fanout", p.mac_fanout},
                     {"quorum", p.quorum},             {"min_key_bits", p.min_key_bits},
                     {"hop_limit", p.hop_limit},       {"store_blocked", p.store_blocked}};
  json& apps = doc["apps"] = json::array();
  for (const auto& a : s.apps) {
    apps.push_back({{"name", a.id.name},
                    {"version", a.id.version},
                    {"payload_bytes", a.payload_bytes},
                    {"initial_holders", a.initial_holders},
                    {"initial_infected", a.initial_infected}});
  }
  json mix = json::object();
  for (const auto& [b, w] : s.strategy_mix) mix[std::string(to_string(b))] = w;
  doc["compromise"] = {{"fraction", s.compromise_fraction}, {"mix", mix}};
  json requests = json::array();
  for (const auto& q : s.workload.requests) {
    requests.push_back({{"epoch", q.epoch}, {"node", q.node.value}, {"app", q.app.label()}});
  }
  doc["workload"] = {{"requests_per_epoch", s.workload.requests_per_epoch},
                     {"requests", requests}};
  if (!s.nodes.empty()) {
    json& nodes = doc["nodes"] = json::array();
    for (const auto& n : s.nodes) {
      json j = {{"id", n.id.value},
                {"type", n.node_type},
                {"behavior", std::string(to_string(n.behavior))}};
      if (n.key_length_bits) j["key_length_bits"] = *n.key_length_bits;
      if (n.max_degree) j["max_degree"] = *n.max_degree;
      json napps = json::object();
      for (const auto& [app, copy] : n.apps) {
        napps[app.label()] = copy == InitialCopy::kClean ? "clean" : "tampered";
      }
      j["apps"] = napps;
      nodes.push_back(std::move(j));
    }
  }
  if (!s.edges.empty()) {
    json& edges = doc["edges"] = json::array();
    for (const auto& [a, b] : s.edges) edges.push_back({a.value, b.value});
  }
  doc["auth_bound"] = {{"verifiers", s.auth_bound.verifiers},
                       {"compromise_p", s.auth_bound.compromise_p},
                       {"trials", s.auth_bound.trials}};
  return doc;
}

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

}  // namespace

std::vector<std::string> Scenario::problems() const {
  std::vector<std::string> out;
  auto check = [&](bool ok, const std::string& what) {
    if (!ok) out.push_back(what);
  };

  const bool explicit_nodes = !nodes.empty();
  if (experiment == Experiment::kCommunity) {
    check(node_count >= 1 || explicit_nodes, "node_count: must be at least 1");
  }
  check(!type_distribution.empty(), "types: at least one node type required");
  double type_total = 0.0;
  for (const auto& [t, w] : type_distribution) {
    check(w >= 0.0, "types." + t + ": weight must be nonnegative");
    type_total += w;
  }
  check(std::abs(type_total - 1.0) <= 1e-9, "types: weights must sum to 1");

  check(node_defaults.key_length_bits > 0, "node_defaults.key_length_bits: must be positive");
  check(node_defaults.max_degree > 0, "node_defaults.max_degree: must be positive");
  check(in_unit(node_defaults.old_device_fraction),
        "node_defaults.old_device_fraction: must lie in [0, 1]");
  check(node_defaults.old_key_length_bits > 0,
        "node_defaults.old_key_length_bits: must be positive");

  try {
    formation.validate();
  } catch (const Error& e) {
    out.push_back(std::string("formation: ") + e.what());
  }
  const std::size_t population = explicit_nodes ? nodes.size() : node_count;
  check(supernodes <= population, "formation.supernodes: exceeds node count");
  check(trust_alpha > 0.0 && trust_alpha <= 1.0, "trust.alpha: must lie in (0, 1]");

  check(is_supported_width(protocol.digest_width), "protocol.digest_width: must be 224 or 256");
  check(protocol.mac_fanout >= 1, "protocol.mac_fanout: must be at least 1");
  check(protocol.quorum >= 0.0 && protocol.quorum < 1.0, "protocol.quorum: must lie in [0, 1)");
  check(protocol.min_key_bits > 0, "protocol.min_key_bits: must be positive");
  check(protocol.hop_limit >= 0, "protocol.hop_limit: must be nonnegative");

  std::set<AppId> app_ids;
  for (std::size_t i = 0; i < apps.size(); ++i) {
    const auto& a = apps[i];
    const std::string p = "apps[" + std::to_string(i) + "].";
    check(!a.id.name.empty() && !a.id.version.empty(), p + "name/version: must be nonempty");
    check(a.id.name.find('@') == std::string::npos, p + "name: may not contain '@'");
    check(app_ids.insert(a.id).second, p + "name: duplicate app " + a.id.label());
    check(a.payload_bytes >= 1, p + "payload_bytes: must be at least 1");
    check(in_unit(a.initial_holders), p + "initial_holders: must lie in [0, 1]");
    check(in_unit(a.initial_infected), p + "initial_infected: must lie in [0, 1]");
    check(a.initial_holders + a.initial_infected <= 1.0 + 1e-9,
          p + "initial_holders + initial_infected: must not exceed 1");
  }

  try {
    CompromisePlan{compromise_fraction, strategy_mix, 0}.validate();
  } catch (const Error& e) {
    out.push_back(std::string("compromise: ") + e.what());
  }

  std::set<NodeId> ids;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    const std::string p = "nodes[" + std::to_string(i) + "].";
    check(ids.insert(n.id).second, p + "id: duplicate node " + to_string(n.id));
    check(!n.node_type.empty(), p + "type: must be nonempty");
    if (n.key_length_bits) check(*n.key_length_bits > 0, p + "key_length_bits: must be positive");
    if (n.max_degree) check(*n.max_degree > 0, p + "max_degree: must be positive");
    for (const auto& [app, copy] : n.apps) {
      check(app_ids.contains(app), p + "apps: unknown app " + app.label());
    }
  }
  auto node_exists = [&](NodeId id) {
    return explicit_nodes ? ids.contains(id) : id.value < node_count;
  };

  std::set<Edge> seen;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& [a, b] = edges[i];
    const std::string p = "edges[" + std::to_string(i) + "]";
    check(a != b, p + ": self-loop");
    check(node_exists(a) && node_exists(b), p + ": unknown endpoint");
    check(seen.insert(a < b ? Edge{a, b} : Edge{b, a}).second, p + ": duplicate edge");
  }

  for (std::size_t i = 0; i < workload.requests.size(); ++i) {
    const auto& q = workload.requests[i];
    const std::string p = "workload.requests[" + std::to_string(i) + "].";
    check(node_exists(q.node), p + "node: unknown node " + to_string(q.node));
    check(app_ids.contains(q.app), p + "app: unknown app " + q.app.label());
  }
  if (experiment == Experiment::kCommunity && workload.requests_per_epoch > 0) {
    check(!apps.empty(), "workload.requests_per_epoch: needs at least one app");
  }

  if (experiment == Experiment::kAuthBound) {
    check(auth_bound.verifiers >= 1, "auth_bound.verifiers: must be at least 1");
    check(in_unit(auth_bound.compromise_p), "auth_bound.compromise_p: must lie in [0, 1]");
    check(auth_bound.trials >= 1, "auth_bound.trials: must be at least 1");
  }
  return out;
}

void Scenario::validate() const {
  const auto list = problems();
  if (list.empty()) return;
  std::string text = "invalid scenario:";
  for (const auto& p : list) text += "\n  - " + p;
  throw Error(ErrorKind::kValidation, text);
}

Scenario parse_scenario(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kValidation, std::string("scenario is not valid JSON: ") + e.what());
  }
  std::vector<std::string> problems;
  Scenario s = from_json(doc, problems);
  for (auto& p : s.problems()) problems.push_back(std::move(p));
  if (!problems.empty()) {
    std::string text = "invalid scenario:";
    for (const auto& p : problems) text += "\n  - " + p;
    throw Error(ErrorKind::kValidation, text);
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open scenario file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

std::string to_json_text(const Scenario& scenario) { return to_json(scenario).dump(2); }

const std::vector<std::string>& sweepable_parameters() {
  static const std::vector<std::string> kNames = {
      "seed",
      "node_count",
      "epochs",
      "types",
      "node_defaults.key_length_bits",
      "node_defaults.max_degree",
      "node_defaults.old_device_fraction",
      "node_defaults.old_key_length_bits",
      "formation.beta_same",
      "formation.beta_diff",
      "formation.link_cost",
      "formation.trust_weight",
      "formation.join_rate",
      "formation.leave_rate",
      "formation.proposals_per_node",
      "formation.severance_threshold",
      "formation.supernodes",
      "formation.supernode_multiplier",
      "trust.alpha",
      "protocol.digest_width",
      "protocol.mac_fanout",
      "protocol.quorum",
      "protocol.min_key_bits",
      "protocol.hop_limit",
      "protocol.store_blocked",
      "compromise.fraction",
      "compromise.mix",
      "workload.requests_per_epoch",
      "auth_bound.verifiers",
      "auth_bound.compromise_p",
      "auth_bound.trials",
  };
  return kNames;
}

Scenario with_parameter(const Scenario& base, const std::string& name,
                        const std::string& json_value) {
  const auto& names = sweepable_parameters();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    throw Error(ErrorKind::kUnknownParameter, "unknown sweep parameter '" + name + "'");
  }
  json doc = to_json(base);
  std::string pointer = "/" + name;
  for (auto& c : pointer) {
    if (c == '.') c = '/';
  }
  try {
    doc[json::json_pointer(pointer)] = json::parse(json_value);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kValidation,
                "bad value for parameter '" + name + "': " + std::string(e.what()));
  }
  return parse_scenario(doc.dump());
}

}  // namespace commtrust
