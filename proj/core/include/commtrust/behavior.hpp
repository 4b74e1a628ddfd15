#pragma once

#include <optional>
#include <string_view>

namespace commtrust {

/// Static per-node strategy. Blocking the app store is a scenario-level
/// flag, not a node behavior.
enum class Behavior {
  kHonest,
  kTamperedServer,  // holds and serves the shared tampered variant
  kTocTouSwapper,   // advertises the clean digest, delivers tampered bytes
  kLyingVerifier,   // inverts MAC verdicts
  kFreeRider,       // never answers call-outs or verification requests
};

std::string_view to_string(Behavior b);
std::optional<Behavior> parse_behavior(std::string_view name);

}  // namespace commtrust
