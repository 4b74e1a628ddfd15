#include "commtrust/multipath.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "commtrust/error.hpp"
#include "commtrust/rng.hpp"

namespace commtrust {

Quorum Quorum::from_decimal(double value) {
  if (!(value >= 0.0 && value < 1.0)) {
    throw Error(ErrorKind::kConfiguration, "quorum must lie in [0, 1)");
  }
  constexpr std::uint64_t kScale = 1'000'000;
  std::uint64_t num = static_cast<std::uint64_t>(std::llround(value * kScale));
  std::uint64_t den = kScale;
  const std::uint64_t g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Quorum{num, den};
}

std::string_view to_string(AcceptReason reason) {
  switch (reason) {
    case AcceptReason::kFingerprintMismatch: return "fingerprint-mismatch";
    case AcceptReason::kInsufficientVerdicts: return "insufficient-verdicts";
    case AcceptReason::kQuorumReached: return "quorum-reached";
    case AcceptReason::kNoVerifiers: return "no-verifiers";
  }
  return "unknown";
}

AuthPackage build_auth_package(NodeId sender, const AppPackage& package,
                               const CommunityGraph& graph, std::size_t fanout, Rng& rng,
                               int width_bits, int min_key_bits,
                               std::span<const NodeId> exclude) {
  std::vector<NodeId> eligible;
  for (const auto& [peer, key] : graph.keystore(sender)) {
    if (key.length_bits < min_key_bits) continue;
    if (std::find(exclude.begin(), exclude.end(), peer) != exclude.end()) continue;
    eligible.push_back(peer);
  }
  if (eligible.empty() || fanout == 0) {
    throw Error(ErrorKind::kNoVerifiers,
                "node " + to_string(sender) + " has no neighbor that can vouch for it");
  }
  const std::size_t count = std::min(fanout, eligible.size());
  std::vector<NodeId> chosen;
  for (std::size_t idx : rng.sample_indices(eligible.size(), count)) {
    chosen.push_back(eligible[idx]);
  }
  std::sort(chosen.begin(), chosen.end());

  AuthPackage auth;
  auth.sender = sender;
  auth.package = package;
  auth.claimed_digest = fingerprint(package.payload, width_bits);
  const Bytes message = mac_message(package.app_id, auth.claimed_digest);
  const KeyStore& keys = graph.keystore(sender);
  for (NodeId verifier : chosen) {
    auth.macs.emplace_back(verifier, mac(*keys.find(verifier), message, width_bits, min_key_bits));
  }
  return auth;
}

bool toc_tou_check(const AuthPackage& auth, const Digest& expected) {
  if (auth.claimed_digest != expected) return false;
  return fingerprint(auth.package.payload, expected.width_bits()) == auth.claimed_digest;
}

std::vector<VerifyRequest> verification_requests(NodeId requester, const AuthPackage& auth) {
  const Digest received = fingerprint(auth.package.payload, auth.claimed_digest.width_bits());
  std::vector<VerifyRequest> out;
  out.reserve(auth.macs.size());
  for (const auto& [verifier, tag] : auth.macs) {
    out.push_back({requester, auth.sender, verifier, auth.package.app_id, received, tag});
  }
  return out;
}

std::optional<VerifyReply> answer_verification(const VerifyRequest& request,
                                               const KeyStore& verifier_keys,
                                               int min_key_bits) {
  const MacKey* key = verifier_keys.find(request.sender);
  if (key == nullptr) return std::nullopt;
  bool ok = false;
  try {
    ok = verify_mac(*key, mac_message(request.app_id, request.digest), request.tag,
                    request.tag.tag.width_bits(), min_key_bits);
  } catch (const Error& e) {
    // A tag under a foreign key id or a weak key is simply not vouched for.
    if (e.kind() != ErrorKind::kVerification && e.kind() != ErrorKind::kKeyStrength) throw;
    ok = false;
  }
  return VerifyReply{request.verifier, ok};
}

std::vector<VerifyReply> verify_round(NodeId requester, const AuthPackage& auth,
                                      const CommunityGraph& graph,
                                      const AdversaryContext& ctx, int min_key_bits) {
  std::vector<VerifyReply> replies;
  for (const VerifyRequest& req : verification_requests(requester, auth)) {
    if (!graph.contains(req.verifier)) continue;
    auto honest = answer_verification(req, graph.keystore(req.verifier), min_key_bits);
    if (!honest) continue;
    auto out = intercept(graph.profile(req.verifier).behavior, *honest, ctx);
    if (out) replies.push_back(std::get<VerifyReply>(*out));
  }
  return replies;
}

AcceptanceDecision decide(std::span<const VerifyReply> replies, std::size_t total_polled,
                          Quorum quorum) {
  if (total_polled == 0) {
    throw Error(ErrorKind::kNoVerifiers, "no verifiers were polled");
  }
  AcceptanceDecision d;
  d.total_polled = total_polled;
  d.positive_verdicts = static_cast<std::size_t>(
      std::count_if(replies.begin(), replies.end(), [](const VerifyReply& r) { return r.verdict; }));
  // positive / total > num / den, in integers.
  d.accepted = static_cast<std::uint64_t>(d.positive_verdicts) * quorum.denominator >
               quorum.numerator * static_cast<std::uint64_t>(total_polled);
  d.reason = d.accepted ? AcceptReason::kQuorumReached : AcceptReason::kInsufficientVerdicts;
  return d;
}

}  // namespace commtrust
