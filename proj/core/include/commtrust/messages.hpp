#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "commtrust/artifact.hpp"
#include "commtrust/crypto.hpp"
#include "commtrust/node_id.hpp"

namespace commtrust {

// Protocol messages exchanged during one retrieval. Each has a canonical
// serialized form: a one-byte type tag followed by fields in declaration
// order. Integers are big-endian; byte fields and strings carry a u32 length
// prefix; digests and tags carry a u16 width in bits before their bytes.

struct CallOut {
  NodeId requester;
  AppId app_id;
  std::uint64_t round = 0;
};

struct FingerprintReply {
  NodeId responder;
  AppId app_id;
  Digest digest;
  int key_length_bits = 0;
};

struct SuspicionNotice {
  NodeId sender;
  NodeId target;
  AppId app_id;
  Digest suspected_digest;
  Digest majority_digest;
};

struct DownloadRequest {
  NodeId requester;
  NodeId source;
  AppId app_id;
  Digest expected_digest;
};

/// The app delivered in the last step, with one MAC per chosen neighbor of
/// the sender.
struct AuthPackage {
  NodeId sender;
  AppPackage package;
  Digest claimed_digest;
  std::vector<std::pair<NodeId, MacTag>> macs;
};

struct VerifyRequest {
  NodeId requester;
  NodeId sender;
  NodeId verifier;
  AppId app_id;
  Digest digest;
  MacTag tag;
};

struct VerifyReply {
  NodeId verifier;
  bool verdict = false;
};

Bytes encode(const CallOut& m);
Bytes encode(const FingerprintReply& m);
Bytes encode(const SuspicionNotice& m);
Bytes encode(const DownloadRequest& m);
Bytes encode(const AuthPackage& m);
Bytes encode(const VerifyRequest& m);
Bytes encode(const VerifyReply& m);

// Overhead under the fingerprint-unit cost model: only digest and tag bits
// the receiver needs for the check are priced.
std::uint64_t overhead_bits(const CallOut&);
std::uint64_t overhead_bits(const FingerprintReply& m);
std::uint64_t overhead_bits(const SuspicionNotice&);
std::uint64_t overhead_bits(const DownloadRequest&);
std::uint64_t overhead_bits(const AuthPackage& m);
std::uint64_t overhead_bits(const VerifyRequest& m);
std::uint64_t overhead_bits(const VerifyReply&);

/// Append-only canonical encoder shared by messages and the event log.
class WireWriter {
 public:
  WireWriter& u8(std::uint8_t v);
  WireWriter& u16(std::uint16_t v);
  WireWriter& u32(std::uint32_t v);
  WireWriter& u64(std::uint64_t v);
  WireWriter& node(NodeId id) { return u32(id.value); }
  WireWriter& bytes(ByteView data);
  WireWriter& str(std::string_view text);
  WireWriter& digest(const Digest& d);
  WireWriter& app(const AppId& id);
  WireWriter& tag(const MacTag& t);

  const Bytes& data() const& noexcept { return out_; }
  Bytes data() && noexcept { return std::move(out_); }

 private:
  Bytes out_;
};

/// The bytes a MAC is computed over: the app identity and payload digest.
Bytes mac_message(const AppId& app_id, const Digest& payload_digest);

}  // namespace commtrust
