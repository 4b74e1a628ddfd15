#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "commtrust/artifact.hpp"
#include "commtrust/event_log.hpp"
#include "commtrust/multipath.hpp"
#include "commtrust/node_id.hpp"

namespace commtrust {

/// Protocol overhead of one retrieval under the fingerprint-unit cost model.
struct OverheadRecord {
  std::uint64_t call_out_bits = 0;      // fingerprint replies
  std::uint64_t mac_block_bits = 0;     // tags attached to the delivery
  std::uint64_t verification_bits = 0;  // digest + tag per verification request
  std::uint64_t total_bits = 0;         // sum of the three parts
  std::uint64_t payload_bytes = 0;      // app bytes, outside the cost model
  std::uint64_t messages = 0;
  std::uint64_t wire_bytes = 0;

  friend bool operator==(const OverheadRecord&, const OverheadRecord&) = default;
};

/// Prices the message events of one retrieval trace.
OverheadRecord account_overhead(std::span<const Event> trace);

/// The closed-form cost: responders * w + macs * w + 2 * macs * w.
OverheadRecord bandwidth_estimate(std::uint64_t responders, std::uint64_t macs, int width_bits);

enum class VoteResult { kUnanimous, kMajority, kNoSource, kNoMajority };
enum class InstallSource { kNone, kCommunity, kStore };

std::string_view to_string(VoteResult v);
std::string_view to_string(InstallSource s);

struct RetrievalRecord {
  std::uint32_t epoch = 0;
  NodeId requester;
  AppId app;
  std::size_t replies = 0;
  std::size_t filtered_old = 0;
  VoteResult vote = VoteResult::kNoSource;
  std::optional<NodeId> source;
  std::optional<AcceptanceDecision> decision;
  InstallSource installed_from = InstallSource::kNone;
  bool installed_tampered = false;
  std::size_t notices = 0;
  std::size_t false_accusations = 0;
  std::optional<double> subjective_trust;
  OverheadRecord overhead;
  std::size_t first_event = 0;  // [first_event, last_event) in the event log
  std::size_t last_event = 0;
};

struct EpochMetrics {
  std::uint32_t epoch = 0;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t infections = 0;
  std::optional<double> homophily;
  std::size_t retrievals = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t tampered_accepted = 0;
  std::size_t notices = 0;
  std::size_t false_accusations = 0;
  std::size_t store_refreshes = 0;
  std::size_t store_fetches = 0;
};

struct TrustSample {
  std::uint32_t epoch = 0;
  NodeId owner;
  NodeId peer;
  double resp_prob = 0.0;
  double cond_trust = 0.0;
  double combined = 0.0;
};

struct VoteTally {
  std::size_t unanimous = 0;
  std::size_t majority = 0;
  std::size_t no_source = 0;
  std::size_t no_majority = 0;
};

struct AuthBoundSummary {
  std::size_t verifiers = 0;
  double compromise_p = 0.0;
  std::size_t trials = 0;
  std::size_t accepted = 0;
  double acceptance_rate() const {
    return trials ? static_cast<double>(accepted) / static_cast<double>(trials) : 0.0;
  }
};

struct MetricsReport {
  std::vector<RetrievalRecord> retrievals;
  std::vector<EpochMetrics> epochs;
  std::vector<TrustSample> trust;
  VoteTally votes;
  std::optional<AuthBoundSummary> auth_bound;
  std::vector<std::string> assumptions;
  std::string parameters_json;
  std::string event_log_digest;

  /// Share of retrievals that ended with a tampered package accepted from the
  /// community (forged deliveries accepted, for auth-bound runs).
  double tampered_acceptance_rate() const;
  double acceptance_rate() const;
  std::size_t final_infections() const;
  std::optional<double> final_homophily() const;
};

/// Writes events.jsonl, metrics.jsonl, epochs.csv, retrievals.csv and
/// summary.json into dir (created if missing).
void write_run_directory(const std::string& dir, const EventLog& log, const MetricsReport& report);

/// Human-readable summary of a run directory written by write_run_directory.
std::string summarize_run_directory(const std::string& dir);

std::string epochs_csv(const MetricsReport& report);
std::string retrievals_csv(const MetricsReport& report);
std::string metrics_jsonl(const MetricsReport& report);

}  // namespace commtrust
