#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "commtrust/artifact.hpp"
#include "commtrust/behavior.hpp"
#include "commtrust/messages.hpp"
#include "commtrust/node_id.hpp"

namespace commtrust {

struct CompromisePlan {
  double fraction = 0.0;
  std::vector<std::pair<Behavior, double>> strategy_mix;
  std::uint64_t seed = 0;

  /// fraction in [0,1]; weights nonnegative, non-honest, summing to 1.
  void validate() const;
};

/// Largest-remainder split of `total` items by weight; leftovers go to the
/// largest fractional parts, earlier weights first on ties.
std::vector<std::size_t> apportion(const std::vector<double>& weights, std::size_t total);

using BehaviorMap = std::map<NodeId, Behavior>;

/// floor(fraction * N) nodes are sampled with the plan's seed and given
/// strategies in proportion to the mix (largest-remainder apportionment);
/// everyone else is honest.
BehaviorMap assign_behaviors(const std::vector<NodeId>& nodes, const CompromisePlan& plan);

/// What an adversary knows when rewriting its outbound traffic.
struct AdversaryContext {
  const AppCatalog* catalog = nullptr;
  int width_bits = kDefaultDigestBits;
};

using OutboundMessage = std::variant<FingerprintReply, AuthPackage, VerifyReply>;

/// Applies a node's strategy to one outbound message. nullopt means the node
/// stays silent.
std::optional<OutboundMessage> intercept(Behavior behavior, OutboundMessage message,
                                         const AdversaryContext& ctx);

}  // namespace commtrust
