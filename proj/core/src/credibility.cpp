#include "commtrust/credibility.hpp"

#include <algorithm>
#include <map>

#include "commtrust/error.hpp"
#include "commtrust/rng.hpp"

namespace commtrust {

std::vector<NodeId> holders_in_scope(NodeId requester, const AppId& app_id,
                                     const CommunityGraph& graph,
                                     const InstallState& installs, int hop_limit) {
  std::vector<NodeId> out;
  for (NodeId id : graph.reachable(requester, hop_limit)) {
    if (installs.holds(id, app_id)) out.push_back(id);
  }
  return out;
}

std::vector<FingerprintReply> broadcast_call_out(const CallOut& call_out,
                                                 const CommunityGraph& graph,
                                                 const InstallState& installs,
                                                 const AdversaryContext& ctx,
                                                 int hop_limit) {
  std::vector<FingerprintReply> replies;
  for (NodeId holder : holders_in_scope(call_out.requester, call_out.app_id, graph,
                                        installs, hop_limit)) {
    const NodeProfile& profile = graph.profile(holder);
    const AppPackage* pkg = installs.find(holder, call_out.app_id);
    FingerprintReply reply{holder, call_out.app_id, pkg->digest(ctx.width_bits),
                           profile.key_length_bits};
    auto out = intercept(profile.behavior, std::move(reply), ctx);
    if (out) replies.push_back(std::get<FingerprintReply>(std::move(*out)));
  }
  return replies;
}

FilteredReplies filter_old_devices(std::vector<FingerprintReply> replies, int min_key_bits) {
  FilteredReplies out;
  for (auto& r : replies) {
    if (r.key_length_bits >= min_key_bits) {
      out.kept.push_back(std::move(r));
    } else {
      out.removed.push_back(r.responder);
    }
  }
  return out;
}

VoteOutcome majority_vote(const std::vector<FingerprintReply>& replies) {
  if (replies.empty()) {
    throw Error(ErrorKind::kNoSource, "no fingerprints to vote on");
  }
  std::map<Digest, std::vector<NodeId>> classes;
  for (const auto& r : replies) classes[r.digest].push_back(r.responder);

  auto best = classes.end();
  bool tied = false;
  for (auto it = classes.begin(); it != classes.end(); ++it) {
    if (best == classes.end() || it->second.size() > best->second.size()) {
      best = it;
      tied = false;
    } else if (it->second.size() == best->second.size()) {
      tied = true;
    }
  }
  if (tied) {
    throw Error(ErrorKind::kNoMajority,
                "largest fingerprint classes tie at " + std::to_string(best->second.size()));
  }

  VoteOutcome outcome;
  outcome.majority_digest = best->first;
  outcome.supporters = best->second;
  for (const auto& [digest, ids] : classes) {
    if (digest != best->first) {
      outcome.dissenters.insert(outcome.dissenters.end(), ids.begin(), ids.end());
    }
  }
  std::sort(outcome.supporters.begin(), outcome.supporters.end());
  std::sort(outcome.dissenters.begin(), outcome.dissenters.end());
  outcome.unanimous = classes.size() == 1;
  return outcome;
}

NodeId choose_source(const VoteOutcome& outcome, Rng& rng) {
  if (outcome.supporters.empty()) {
    throw Error(ErrorKind::kNoSource, "vote outcome has no supporters");
  }
  return outcome.supporters[static_cast<std::size_t>(rng.below(outcome.supporters.size()))];
}

std::vector<SuspicionNotice> notify_dissenters(const VoteOutcome& outcome,
                                               const std::vector<FingerprintReply>& replies,
                                               NodeId requester, const AppId& app_id) {
  std::vector<SuspicionNotice> notices;
  for (NodeId target : outcome.dissenters) {
    auto it = std::find_if(replies.begin(), replies.end(),
                           [&](const FingerprintReply& r) { return r.responder == target; });
    if (it == replies.end()) continue;
    notices.push_back({requester, target, app_id, it->digest, outcome.majority_digest});
  }
  return notices;
}

}  // namespace commtrust
