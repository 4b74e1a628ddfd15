#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "commtrust/artifact.hpp"
#include "commtrust/community.hpp"
#include "commtrust/event_log.hpp"
#include "commtrust/metrics.hpp"
#include "commtrust/rng.hpp"
#include "commtrust/scenario.hpp"
#include "commtrust/trust.hpp"

namespace commtrust {

/// Tampered provenance of the shared variant when no adversarial node exists
/// (a drive-by repack from outside the community).
inline constexpr NodeId kExternalAdversary{0xffffffffu};

struct SimulationState {
  CommunityGraph graph;
  InstallState installs;
  TrustBook trust;
  AppCatalog catalog;
  std::set<std::pair<NodeId, AppId>> suspects;  // flagged by a suspicion notice
};

struct RunResult {
  EventLog log;
  MetricsReport metrics;
  SimulationState final_state;
};

/// Single-threaded deterministic engine. Every random choice is drawn from a
/// stream split off the scenario seed by a stable label.
class Simulation {
 public:
  /// Validates the scenario and builds the initial community.
  explicit Simulation(Scenario scenario);

  const Scenario& scenario() const noexcept { return scenario_; }
  const SimulationState& state() const noexcept { return state_; }
  SimulationState& mutable_state() noexcept { return state_; }
  const EventLog& log() const noexcept { return log_; }
  const MetricsReport& metrics() const noexcept { return metrics_; }

  /// Store refresh, churn, one formation stage, the epoch's retrievals and a
  /// metrics snapshot.
  void run_epoch(std::uint32_t epoch);

  /// One five-step retrieval of app by requester.
  RetrievalRecord retrieve(NodeId requester, const AppId& app, std::uint32_t epoch);

  /// Runs every epoch (or the Monte Carlo experiment) and hands back the results.
  RunResult run() &&;

  static std::vector<std::string> assumptions();

 private:
  void setup();
  void setup_nodes(Rng& rng);
  void setup_installs(Rng& rng);
  void run_auth_bound();
  void refresh_suspects(EpochMetrics& metrics);
  void snapshot(EpochMetrics& metrics);
  NodeProfile make_newcomer(NodeId id, Rng& rng) const;
  std::uint64_t message_tick() { return ++tick_; }
  void log_event(EventKind kind, std::vector<NodeId> participants, std::string detail = {});
  template <typename Msg>
  void log_message(EventKind kind, const Msg& msg, NodeId from, NodeId to,
                   std::string detail = {});
  bool fallback_to_store(NodeId requester, const AppId& app, RetrievalRecord& record);

  Scenario scenario_;
  Rng root_;
  SimulationState state_;
  EventLog log_;
  MetricsReport metrics_;
  std::uint64_t tick_ = 0;
  std::map<NodeId, std::uint64_t> rounds_;
  std::uint64_t retrieval_counter_ = 0;
  EpochMetrics* current_epoch_ = nullptr;
};

/// One requester, `peers` clean holders in a clique with it, and one extra
/// node linked to every holder, so a retrieval sees `peers` replies and
/// `peers` MACs.
Scenario bandwidth_scenario(std::size_t peers, int width_bits = kDefaultDigestBits);

/// Convenience wrapper: Simulation(scenario).run().
RunResult run(const Scenario& scenario);

}  // namespace commtrust
