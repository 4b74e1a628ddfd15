#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "commtrust/adversary.hpp"
#include "commtrust/community.hpp"
#include "commtrust/messages.hpp"

namespace commtrust {

class Rng;

inline constexpr std::size_t kDefaultMacFanout = 10;

/// Acceptance threshold as an exact fraction of polled verifiers.
struct Quorum {
  std::uint64_t numerator = 1;
  std::uint64_t denominator = 2;

  /// Rounds to the nearest millionth. Throws unless 0 <= value < 1.
  static Quorum from_decimal(double value);
  double value() const {
    return static_cast<double>(numerator) / static_cast<double>(denominator);
  }
};

enum class AcceptReason {
  kFingerprintMismatch,
  kInsufficientVerdicts,
  kQuorumReached,
  kNoVerifiers,
};

std::string_view to_string(AcceptReason reason);

struct AcceptanceDecision {
  bool accepted = false;
  AcceptReason reason = AcceptReason::kNoVerifiers;
  std::size_t positive_verdicts = 0;
  std::size_t total_polled = 0;
};

/// MACs over (app id, payload digest) with up to `fanout` neighbor keys of at
/// least min_key_bits, neighbors drawn by seeded sample. Nodes in `exclude`
/// (typically the requester) are never chosen as verifiers.
/// Throws ErrorKind::kNoVerifiers if no neighbor qualifies.
AuthPackage build_auth_package(NodeId sender, const AppPackage& package,
                               const CommunityGraph& graph, std::size_t fanout, Rng& rng,
                               int width_bits = kDefaultDigestBits,
                               int min_key_bits = kDefaultMinKeyBits,
                               std::span<const NodeId> exclude = {});

/// Binds delivery to discovery: the payload must hash to the claimed digest
/// and the claim must equal the digest chosen by the vote.
bool toc_tou_check(const AuthPackage& auth, const Digest& expected);

/// One request per attached MAC; the digest is the one the requester computed
/// over the payload it received.
std::vector<VerifyRequest> verification_requests(NodeId requester, const AuthPackage& auth);

/// A verifier's honest answer: recompute the MAC with the key it shares with
/// the sender. nullopt if it shares no key with the sender any more.
std::optional<VerifyReply> answer_verification(const VerifyRequest& request,
                                               const KeyStore& verifier_keys,
                                               int min_key_bits = kDefaultMinKeyBits);

/// Runs every verification request through the verifier's behavior.
std::vector<VerifyReply> verify_round(NodeId requester, const AuthPackage& auth,
                                      const CommunityGraph& graph,
                                      const AdversaryContext& ctx,
                                      int min_key_bits = kDefaultMinKeyBits);

/// Accepts iff positive verdicts > quorum * total_polled. Missing replies
/// count against acceptance. Throws ErrorKind::kNoVerifiers if nobody was
/// polled.
AcceptanceDecision decide(std::span<const VerifyReply> replies, std::size_t total_polled,
                          Quorum quorum = {});

}  // namespace commtrust
