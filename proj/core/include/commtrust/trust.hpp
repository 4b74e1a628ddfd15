#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>

#include "commtrust/node_id.hpp"

namespace commtrust {

inline constexpr double kStrangerPrior = 0.5;
inline constexpr double kDefaultSmoothing = 0.1;

/// What one node believes about one peer.
struct TrustRecord {
  double resp_prob = kStrangerPrior;   // estimate of Pr(peer responds)
  double cond_trust = kStrangerPrior;  // estimate of Pr(reply correct | responded)
  std::uint64_t observations = 0;
};

/// Single-peer trust used by link utilities and severance: the geometric
/// mean of the two estimates. Equals the stranger prior for an unobserved
/// peer and drops to zero if the peer never answers or is always outvoted.
double combined_trust(const TrustRecord& record);

/// One observer's view of the community, updated by exponential smoothing.
class Ledger {
 public:
  explicit Ledger(NodeId owner, double smoothing_alpha = kDefaultSmoothing);

  NodeId owner() const noexcept { return owner_; }
  double smoothing_alpha() const noexcept { return alpha_; }

  /// Stored record, or the stranger default. Throws for the owner itself.
  TrustRecord record(NodeId peer) const;
  bool has_record(NodeId peer) const { return records_.contains(peer); }
  const std::map<NodeId, TrustRecord>& records() const noexcept { return records_; }
  void set_record(NodeId peer, TrustRecord record);
  void forget(NodeId peer);

  double combined(NodeId peer) const { return combined_trust(record(peer)); }

  /// Starts a protocol round; only peers marked as responders within the
  /// current round may be scored for correctness.
  void begin_round();
  void update_response(NodeId peer, bool responded);
  /// Throws ErrorKind::kNotResponder if peer did not respond this round.
  void update_correctness(NodeId peer, bool agreed_with_majority);

 private:
  TrustRecord& slot(NodeId peer);

  NodeId owner_;
  double alpha_;
  std::map<NodeId, TrustRecord> records_;
  std::set<NodeId> round_responders_;
};

/// Probability that the retrieved app is trustworthy, as a convex
/// combination of the responders' conditional trust weighted by their
/// normalized response likelihoods. Uniform weights if all of those are 0.
/// Throws ErrorKind::kInvalidArgument on an empty responder list.
double subjective_trust(const Ledger& ledger, std::span<const NodeId> responders);

/// All ledgers of a community, keyed by owner.
class TrustBook {
 public:
  explicit TrustBook(double smoothing_alpha = kDefaultSmoothing)
      : alpha_(smoothing_alpha) {}

  Ledger& ledger(NodeId owner);
  const Ledger* find(NodeId owner) const;
  /// owner's combined trust in peer; stranger prior when nothing is known.
  double combined(NodeId owner, NodeId peer) const;
  /// Drops the node's ledger and every record other ledgers hold about it.
  void remove_node(NodeId node);

  const std::map<NodeId, Ledger>& ledgers() const noexcept { return ledgers_; }

 private:
  double alpha_;
  std::map<NodeId, Ledger> ledgers_;
};

}  // namespace commtrust
