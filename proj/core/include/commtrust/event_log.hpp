#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "commtrust/crypto.hpp"
#include "commtrust/node_id.hpp"

namespace commtrust {

enum class EventKind : std::uint8_t {
  // protocol messages (each costs one tick)
  kCallOut = 1,
  kFingerprintReply,
  kSuspicionNotice,
  kDownloadRequest,
  kAppDelivery,
  kVerifyRequest,
  kVerifyReply,
  // local outcomes
  kFiltered = 32,
  kVote,
  kVoteFailed,
  kTocTouFailed,
  kInstall,
  kRejected,
  kStoreFetch,
  kStoreRefresh,
  kAuthTrial,
  // community dynamics
  kJoin = 64,
  kLeave,
  kLink,
  kSever,
  kSupernode,
};

std::string_view to_string(EventKind kind);
bool is_message(EventKind kind);

struct Event {
  std::uint64_t tick = 0;
  EventKind kind = EventKind::kCallOut;
  std::vector<NodeId> participants;  // sender first for messages
  std::uint64_t wire_bytes = 0;      // canonical encoding size, messages only
  std::uint64_t overhead_bits = 0;   // priced digest/tag bits
  std::uint64_t payload_bytes = 0;   // app bytes carried, reported separately
  std::string detail;
};

/// Ordered simulation trace with a digest over its canonical serialization.
class EventLog {
 public:
  /// Throws ErrorKind::kValidation if ticks would decrease.
  void append(Event event);

  const std::vector<Event>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  Bytes canonical_bytes() const;
  /// SHA3-256 over canonical_bytes().
  Digest digest() const;

  /// One JSON object per line.
  std::string to_jsonl() const;

 private:
  std::vector<Event> entries_;
};

}  // namespace commtrust
