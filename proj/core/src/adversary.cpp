#include "commtrust/adversary.hpp"

#include <algorithm>
#include <cmath>

#include "commtrust/error.hpp"
#include "commtrust/rng.hpp"

namespace commtrust {

std::string_view to_string(Behavior b) {
  switch (b) {
    case Behavior::kHonest: return "Honest";
    case Behavior::kTamperedServer: return "TamperedServer";
    case Behavior::kTocTouSwapper: return "TocTouSwapper";
    case Behavior::kLyingVerifier: return "LyingVerifier";
    case Behavior::kFreeRider: return "FreeRider";
  }
  return "Unknown";
}

std::optional<Behavior> parse_behavior(std::string_view name) {
  for (Behavior b : {Behavior::kHonest, Behavior::kTamperedServer, Behavior::kTocTouSwapper,
                     Behavior::kLyingVerifier, Behavior::kFreeRider}) {
    if (to_string(b) == name) return b;
  }
  return std::nullopt;
}

void CompromisePlan::validate() const {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw Error(ErrorKind::kConfiguration, "compromise fraction must lie in [0, 1]");
  }
  if (fraction == 0.0 && strategy_mix.empty()) return;
  double total = 0.0;
  for (const auto& [b, w] : strategy_mix) {
    if (b == Behavior::kHonest) {
      throw Error(ErrorKind::kConfiguration, "strategy mix may not contain Honest");
    }
    if (!(w >= 0.0)) {
      throw Error(ErrorKind::kConfiguration, "strategy weights must be nonnegative");
    }
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error(ErrorKind::kConfiguration, "strategy weights must sum to 1");
  }
}

std::vector<std::size_t> apportion(const std::vector<double>& weights, std::size_t total) {
  double sum = 0.0;
  for (double w : weights) sum += w;
  std::vector<std::size_t> counts(weights.size(), 0);
  if (weights.empty() || sum <= 0.0) return counts;
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double exact = weights[i] / sum * static_cast<double>(total);
    counts[i] = static_cast<std::size_t>(std::floor(exact + 1e-9));
    assigned += counts[i];
    remainders.emplace_back(exact - static_cast<double>(counts[i]), i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t r = 0; assigned < total && r < remainders.size(); ++r, ++assigned) {
    ++counts[remainders[r].second];
  }
  return counts;
}

BehaviorMap assign_behaviors(const std::vector<NodeId>& nodes, const CompromisePlan& plan) {
  plan.validate();
  BehaviorMap out;
  for (NodeId id : nodes) out[id] = Behavior::kHonest;

  const auto n = nodes.size();
  // The epsilon keeps e.g. 0.29 * 100 from flooring to 28.
  const auto chosen = static_cast<std::size_t>(
      std::floor(plan.fraction * static_cast<double>(n) + 1e-9));
  if (chosen == 0 || plan.strategy_mix.empty()) return out;

  std::vector<double> weights;
  for (const auto& [b, w] : plan.strategy_mix) weights.push_back(w);
  const auto counts = apportion(weights, chosen);

  Rng rng(plan.seed);
  const auto picks = rng.sample_indices(n, chosen);
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    for (std::size_t c = 0; c < counts[i]; ++c) {
      out[nodes[picks[cursor++]]] = plan.strategy_mix[i].first;
    }
  }
  return out;
}

namespace {

struct Rewriter {
  Behavior behavior;
  const AdversaryContext& ctx;

  std::optional<OutboundMessage> operator()(FingerprintReply reply) const {
    switch (behavior) {
      case Behavior::kFreeRider:
        return std::nullopt;
      case Behavior::kTocTouSwapper:
        if (ctx.catalog && ctx.catalog->contains(reply.app_id)) {
          reply.digest = ctx.catalog->clean_fingerprint(reply.app_id, reply.digest.width_bits());
        }
        return reply;
      case Behavior::kTamperedServer:
        if (ctx.catalog) {
          if (const AppPackage* bad = ctx.catalog->tampered_variant(reply.app_id)) {
            reply.digest = bad->digest(reply.digest.width_bits());
          }
        }
        return reply;
      default:
        return reply;
    }
  }

  std::optional<OutboundMessage> operator()(AuthPackage auth) const {
    if (ctx.catalog == nullptr) return auth;
    const AppPackage* bad = ctx.catalog->tampered_variant(auth.package.app_id);
    if (bad == nullptr) return auth;
    switch (behavior) {
      case Behavior::kTocTouSwapper:
        // Bytes swapped after the MACs were computed; the claim stays clean.
        auth.package = *bad;
        auth.claimed_digest =
            ctx.catalog->clean_fingerprint(auth.package.app_id, auth.claimed_digest.width_bits());
        return auth;
      case Behavior::kTamperedServer:
        if (auth.package.payload != bad->payload) {
          auth.package = *bad;
          auth.claimed_digest = bad->digest(auth.claimed_digest.width_bits());
        }
        return auth;
      default:
        return auth;
    }
  }

  std::optional<OutboundMessage> operator()(VerifyReply reply) const {
    switch (behavior) {
      case Behavior::kFreeRider:
        return std::nullopt;
      case Behavior::kLyingVerifier:
        reply.verdict = !reply.verdict;
        return reply;
      default:
        return reply;
    }
  }
};

}  // namespace

std::optional<OutboundMessage> intercept(Behavior behavior, OutboundMessage message,
                                         const AdversaryContext& ctx) {
  if (behavior == Behavior::kHonest) return message;
  return std::visit(Rewriter{behavior, ctx}, std::move(message));
}

}  // namespace commtrust
