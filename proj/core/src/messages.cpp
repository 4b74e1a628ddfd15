#include "commtrust/messages.hpp"

#include "commtrust/error.hpp"

namespace commtrust {
namespace {

enum class Tag : std::uint8_t {
  kCallOut = 1,
  kFingerprintReply = 2,
  kSuspicionNotice = 3,
  kDownloadRequest = 4,
  kAuthPackage = 5,
  kVerifyRequest = 6,
  kVerifyReply = 7,
  kMacMessage = 0x40,
};

WireWriter start(Tag t) {
  WireWriter w;
  w.u8(static_cast<std::uint8_t>(t));
  return w;
}

}  // namespace

WireWriter& WireWriter::u8(std::uint8_t v) {
  out_.push_back(v);
  return *this;
}

WireWriter& WireWriter::u16(std::uint16_t v) {
  out_.push_back(static_cast<std::uint8_t>(v >> 8));
  out_.push_back(static_cast<std::uint8_t>(v));
  return *this;
}

WireWriter& WireWriter::u32(std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) {
    out_.push_back(static_cast<std::uint8_t>(v >> shift));
  }
  return *this;
}

WireWriter& WireWriter::u64(std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) {
    out_.push_back(static_cast<std::uint8_t>(v >> shift));
  }
  return *this;
}

WireWriter& WireWriter::bytes(ByteView data) {
  if (data.size() > 0xffffffffu) {
    throw Error(ErrorKind::kInvalidArgument, "byte field too long to encode");
  }
  u32(static_cast<std::uint32_t>(data.size()));
  out_.insert(out_.end(), data.begin(), data.end());
  return *this;
}

WireWriter& WireWriter::str(std::string_view text) {
  return bytes(ByteView(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

WireWriter& WireWriter::digest(const Digest& d) {
  u16(static_cast<std::uint16_t>(d.width_bits()));
  out_.insert(out_.end(), d.bytes().begin(), d.bytes().end());
  return *this;
}

WireWriter& WireWriter::app(const AppId& id) { return str(id.name).str(id.version); }

WireWriter& WireWriter::tag(const MacTag& t) { return u64(t.key_id.value).digest(t.tag); }

Bytes encode(const CallOut& m) {
  return start(Tag::kCallOut).node(m.requester).app(m.app_id).u64(m.round).data();
}

Bytes encode(const FingerprintReply& m) {
  return start(Tag::kFingerprintReply)
      .node(m.responder)
      .app(m.app_id)
      .digest(m.digest)
      .u32(static_cast<std::uint32_t>(m.key_length_bits))
      .data();
}

Bytes encode(const SuspicionNotice& m) {
  return start(Tag::kSuspicionNotice)
      .node(m.sender)
      .node(m.target)
      .app(m.app_id)
      .digest(m.suspected_digest)
      .digest(m.majority_digest)
      .data();
}

Bytes encode(const DownloadRequest& m) {
  return start(Tag::kDownloadRequest)
      .node(m.requester)
      .node(m.source)
      .app(m.app_id)
      .digest(m.expected_digest)
      .data();
}

Bytes encode(const AuthPackage& m) {
  WireWriter w = start(Tag::kAuthPackage);
  w.node(m.sender).app(m.package.app_id).bytes(m.package.payload).digest(m.claimed_digest);
  w.u32(static_cast<std::uint32_t>(m.macs.size()));
  for (const auto& [verifier, tag] : m.macs) w.node(verifier).tag(tag);
  return std::move(w).data();
}

Bytes encode(const VerifyRequest& m) {
  return start(Tag::kVerifyRequest)
      .node(m.requester)
      .node(m.sender)
      .node(m.verifier)
      .app(m.app_id)
      .digest(m.digest)
      .tag(m.tag)
      .data();
}

Bytes encode(const VerifyReply& m) {
  return start(Tag::kVerifyReply).node(m.verifier).u8(m.verdict ? 1 : 0).data();
}

std::uint64_t overhead_bits(const CallOut&) { return 0; }
std::uint64_t overhead_bits(const FingerprintReply& m) {
  return static_cast<std::uint64_t>(m.digest.width_bits());
}
std::uint64_t overhead_bits(const SuspicionNotice&) { return 0; }
std::uint64_t overhead_bits(const DownloadRequest&) { return 0; }
std::uint64_t overhead_bits(const AuthPackage& m) {
  std::uint64_t bits = 0;
  for (const auto& [verifier, tag] : m.macs) bits += static_cast<std::uint64_t>(tag.tag.width_bits());
  return bits;
}
std::uint64_t overhead_bits(const VerifyRequest& m) {
  return static_cast<std::uint64_t>(m.digest.width_bits()) +
         static_cast<std::uint64_t>(m.tag.tag.width_bits());
}
std::uint64_t overhead_bits(const VerifyReply&) { return 0; }

Bytes mac_message(const AppId& app_id, const Digest& payload_digest) {
  return start(Tag::kMacMessage).app(app_id).digest(payload_digest).data();
}

}  // namespace commtrust
