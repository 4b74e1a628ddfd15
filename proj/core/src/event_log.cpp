#include "commtrust/event_log.hpp"

#include <json.hpp>

#include "commtrust/error.hpp"
#include "commtrust/messages.hpp"

namespace commtrust {

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kCallOut: return "call_out";
    case EventKind::kFingerprintReply: return "fingerprint_reply";
    case EventKind::kSuspicionNotice: return "suspicion_notice";
    case EventKind::kDownloadRequest: return "download_request";
    case EventKind::kAppDelivery: return "app_delivery";
    case EventKind::kVerifyRequest: return "verify_request";
    case EventKind::kVerifyReply: return "verify_reply";
    case EventKind::kFiltered: return "filtered";
    case EventKind::kVote: return "vote";
    case EventKind::kVoteFailed: return "vote_failed";
    case EventKind::kTocTouFailed: return "toctou_failed";
    case EventKind::kInstall: return "install";
    case EventKind::kRejected: return "rejected";
    case EventKind::kStoreFetch: return "store_fetch";
    case EventKind::kStoreRefresh: return "store_refresh";
    case EventKind::kAuthTrial: return "auth_trial";
    case EventKind::kJoin: return "join";
    case EventKind::kLeave: return "leave";
    case EventKind::kLink: return "link";
    case EventKind::kSever: return "sever";
    case EventKind::kSupernode: return "supernode";
  }
  return "unknown";
}

bool is_message(EventKind kind) {
  return static_cast<std::uint8_t>(kind) < static_cast<std::uint8_t>(EventKind::kFiltered);
}

void EventLog::append(Event event) {
  if (!entries_.empty() && event.tick < entries_.back().tick) {
    throw Error(ErrorKind::kValidation, "event ticks must be non-decreasing");
  }
  entries_.push_back(std::move(event));
}

Bytes EventLog::canonical_bytes() const {
  WireWriter w;
  w.str("commtrust.eventlog/1").u64(entries_.size());
  for (const Event& e : entries_) {
    w.u64(e.tick).u8(static_cast<std::uint8_t>(e.kind));
    w.u32(static_cast<std::uint32_t>(e.participants.size()));
    for (NodeId id : e.participants) w.node(id);
    w.u64(e.wire_bytes).u64(e.overhead_bits).u64(e.payload_bytes).str(e.detail);
  }
  return std::move(w).data();
}

Digest EventLog::digest() const { return fingerprint(canonical_bytes(), 256); }

std::string EventLog::to_jsonl() const {
  std::string out;
  for (const Event& e : entries_) {
    nlohmann::ordered_json j;
    j["tick"] = e.tick;
    j["kind"] = std::string(to_string(e.kind));
    auto& ids = j["participants"] = nlohmann::ordered_json::array();
    for (NodeId id : e.participants) ids.push_back(id.value);
    if (is_message(e.kind)) {
      j["wire_bytes"] = e.wire_bytes;
      j["overhead_bits"] = e.overhead_bits;
    }
    if (e.payload_bytes) j["payload_bytes"] = e.payload_bytes;
    if (!e.detail.empty()) j["detail"] = e.detail;
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace commtrust
