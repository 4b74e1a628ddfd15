#pragma once

#include <vector>

#include "commtrust/adversary.hpp"
#include "commtrust/artifact.hpp"
#include "commtrust/community.hpp"
#include "commtrust/messages.hpp"

namespace commtrust {

class Rng;

struct VoteOutcome {
  Digest majority_digest;
  std::vector<NodeId> supporters;  // ascending
  std::vector<NodeId> dissenters;  // ascending
  bool unanimous = false;
};

struct FilteredReplies {
  std::vector<FingerprintReply> kept;
  std::vector<NodeId> removed;
};

/// Members that hold app_id and are within hop_limit of the requester
/// (0 = whole connected component). These are the nodes expected to answer.
std::vector<NodeId> holders_in_scope(NodeId requester, const AppId& app_id,
                                     const CommunityGraph& graph,
                                     const InstallState& installs, int hop_limit = 0);

/// Collects one fingerprint per in-scope holder, filtered through each
/// holder's behavior. Holders lacking the app stay silent.
std::vector<FingerprintReply> broadcast_call_out(const CallOut& call_out,
                                                 const CommunityGraph& graph,
                                                 const InstallState& installs,
                                                 const AdversaryContext& ctx,
                                                 int hop_limit = 0);

/// Drops replies from devices whose key length is below min_key_bits.
FilteredReplies filter_old_devices(std::vector<FingerprintReply> replies, int min_key_bits);

/// Plurality over digests. Throws ErrorKind::kNoSource on no replies and
/// ErrorKind::kNoMajority when the two largest classes tie.
VoteOutcome majority_vote(const std::vector<FingerprintReply>& replies);

NodeId choose_source(const VoteOutcome& outcome, Rng& rng);

std::vector<SuspicionNotice> notify_dissenters(const VoteOutcome& outcome,
                                               const std::vector<FingerprintReply>& replies,
                                               NodeId requester, const AppId& app_id);

}  // namespace commtrust
