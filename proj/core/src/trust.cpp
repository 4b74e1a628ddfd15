#include "commtrust/trust.hpp"

#include <algorithm>
#include <cmath>

#include "commtrust/error.hpp"

namespace commtrust {
namespace {

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

double smooth(double current, double alpha, bool hit) {
  return std::clamp((1.0 - alpha) * current + alpha * (hit ? 1.0 : 0.0), 0.0, 1.0);
}

}  // namespace

double combined_trust(const TrustRecord& record) {
  return std::sqrt(record.resp_prob * record.cond_trust);
}

Ledger::Ledger(NodeId owner, double smoothing_alpha)
    : owner_(owner), alpha_(smoothing_alpha) {
  if (!(smoothing_alpha > 0.0 && smoothing_alpha <= 1.0)) {
    throw Error(ErrorKind::kConfiguration, "smoothing alpha must lie in (0, 1]");
  }
}

TrustRecord Ledger::record(NodeId peer) const {
  if (peer == owner_) {
    throw Error(ErrorKind::kInvalidArgument, "a ledger holds no record of its owner");
  }
  auto it = records_.find(peer);
  return it == records_.end() ? TrustRecord{} : it->second;
}

TrustRecord& Ledger::slot(NodeId peer) {
  if (peer == owner_) {
    throw Error(ErrorKind::kInvalidArgument, "a ledger holds no record of its owner");
  }
  return records_[peer];
}

void Ledger::set_record(NodeId peer, TrustRecord record) {
  if (!is_probability(record.resp_prob) || !is_probability(record.cond_trust)) {
    throw Error(ErrorKind::kInvalidArgument, "trust values must lie in [0, 1]");
  }
  slot(peer) = record;
}

void Ledger::forget(NodeId peer) {
  records_.erase(peer);
  round_responders_.erase(peer);
}

void Ledger::begin_round() { round_responders_.clear(); }

void Ledger::update_response(NodeId peer, bool responded) {
  auto& r = slot(peer);
  r.resp_prob = smooth(r.resp_prob, alpha_, responded);
  ++r.observations;
  if (responded) round_responders_.insert(peer);
}

void Ledger::update_correctness(NodeId peer, bool agreed_with_majority) {
  if (!round_responders_.contains(peer)) {
    throw Error(ErrorKind::kNotResponder,
                "node " + to_string(peer) + " did not respond in this round");
  }
  auto& r = slot(peer);
  r.cond_trust = smooth(r.cond_trust, alpha_, agreed_with_majority);
}

double subjective_trust(const Ledger& ledger, std::span<const NodeId> responders) {
  if (responders.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "subjective trust needs at least one responder");
  }
  double weight_sum = 0.0;
  double weighted = 0.0;
  double plain = 0.0;
  double lo = 1.0;
  double hi = 0.0;
  for (NodeId peer : responders) {
    const TrustRecord r = ledger.record(peer);
    weight_sum += r.resp_prob;
    weighted += r.resp_prob * r.cond_trust;
    plain += r.cond_trust;
    lo = std::min(lo, r.cond_trust);
    hi = std::max(hi, r.cond_trust);
  }
  const double value = weight_sum > 0.0
                           ? weighted / weight_sum
                           : plain / static_cast<double>(responders.size());
  // The exact value is a convex combination; rounding must not leave the hull.
  return std::clamp(value, lo, hi);
}

Ledger& TrustBook::ledger(NodeId owner) {
  auto it = ledgers_.find(owner);
  if (it == ledgers_.end()) it = ledgers_.emplace(owner, Ledger(owner, alpha_)).first;
  return it->second;
}

const Ledger* TrustBook::find(NodeId owner) const {
  auto it = ledgers_.find(owner);
  return it == ledgers_.end() ? nullptr : &it->second;
}

double TrustBook::combined(NodeId owner, NodeId peer) const {
  const Ledger* l = find(owner);
  return l ? l->combined(peer) : combined_trust(TrustRecord{});
}

void TrustBook::remove_node(NodeId node) {
  ledgers_.erase(node);
  for (auto& [owner, l] : ledgers_) l.forget(node);
}

}  // namespace commtrust
