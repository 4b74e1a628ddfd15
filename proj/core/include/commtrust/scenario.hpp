#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "commtrust/adversary.hpp"
#include "commtrust/artifact.hpp"
#include "commtrust/community.hpp"
#include "commtrust/crypto.hpp"
#include "commtrust/multipath.hpp"
#include "commtrust/trust.hpp"

namespace commtrust {

inline constexpr std::string_view kScenarioSchema = "commtrust.scenario/1";

enum class Experiment {
  kCommunity,  // epochs of churn, formation and retrievals
  kAuthBound,  // Monte Carlo acceptance of forged deliveries
};

struct NodeDefaults {
  int key_length_bits = 128;
  int max_degree = 8;
  double old_device_fraction = 0.0;
  int old_key_length_bits = 64;
};

struct ProtocolParams {
  int digest_width = kDefaultDigestBits;
  std::size_t mac_fanout = kDefaultMacFanout;
  double quorum = 0.5;
  int min_key_bits = kDefaultMinKeyBits;
  int hop_limit = 0;  // 0 = whole connected component
  bool store_blocked = true;
};

struct AppSpec {
  AppId id;
  std::size_t payload_bytes = 1024;
  double initial_holders = 0.0;   // fraction of nodes starting with the clean package
  double initial_infected = 0.0;  // fraction of nodes starting with the tampered one
};

enum class InitialCopy { kClean, kTampered };

/// Fully specified node, used instead of generated nodes when present.
struct NodeSpec {
  NodeId id;
  std::string node_type;
  Behavior behavior = Behavior::kHonest;
  std::optional<int> key_length_bits;
  std::optional<int> max_degree;
  std::map<AppId, InitialCopy> apps;
};

struct Request {
  std::uint32_t epoch = 0;
  NodeId node;
  AppId app;
};

struct Workload {
  std::size_t requests_per_epoch = 0;  // random pairs, nodes lacking the app first
  std::vector<Request> requests;       // explicit requests, run before random ones
};

struct AuthBoundParams {
  std::size_t verifiers = 10;
  double compromise_p = 0.1;
  std::size_t trials = 10000;
};

struct Scenario {
  std::string name = "scenario";
  std::uint64_t seed = 1;
  Experiment experiment = Experiment::kCommunity;
  std::size_t node_count = 0;
  std::vector<std::pair<std::string, double>> type_distribution{{"device", 1.0}};
  NodeDefaults node_defaults;
  FormationParams formation;
  std::size_t supernodes = 0;
  double trust_alpha = kDefaultSmoothing;
  ProtocolParams protocol;
  std::vector<AppSpec> apps;
  double compromise_fraction = 0.0;
  std::vector<std::pair<Behavior, double>> strategy_mix;
  std::uint32_t epochs = 1;
  Workload workload;
  std::vector<NodeSpec> nodes;
  std::vector<Edge> edges;
  AuthBoundParams auth_bound;

  /// Throws ErrorKind::kValidation listing every offending field.
  void validate() const;
  std::vector<std::string> problems() const;
};

/// Parses the JSON scenario format. Unknown keys and schema mismatches are
/// validation errors.
Scenario parse_scenario(std::string_view json_text);
Scenario load_scenario(const std::string& path);
std::string to_json_text(const Scenario& scenario);

/// Dotted parameter names a sweep grid may vary (e.g. "protocol.quorum").
const std::vector<std::string>& sweepable_parameters();

/// Returns the scenario with the named parameter replaced by a JSON value.
/// Throws ErrorKind::kUnknownParameter for names outside sweepable_parameters().
Scenario with_parameter(const Scenario& base, const std::string& name,
                        const std::string& json_value);

}  // namespace commtrust
