#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "commtrust/node_id.hpp"

namespace commtrust {

class Rng;

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

inline constexpr int kDefaultDigestBits = 224;
inline constexpr int kDefaultMinKeyBits = 128;

/// Fixed-width hash or tag value. Equality is bitwise.
class Digest {
 public:
  Digest() = default;
  /// Throws ErrorKind::kConfiguration when bytes.size() * 8 != width_bits.
  Digest(Bytes bytes, int width_bits);

  const Bytes& bytes() const noexcept { return bytes_; }
  int width_bits() const noexcept { return width_bits_; }
  bool empty() const noexcept { return bytes_.empty(); }

  /// Lowercase hex, the rendering used in metrics output.
  std::string hex() const;

  friend bool operator==(const Digest&, const Digest&) = default;
  friend std::strong_ordering operator<=>(const Digest& a, const Digest& b);

 private:
  Bytes bytes_;
  int width_bits_ = 0;
};

struct KeyId {
  std::uint64_t value = 0;
  friend constexpr auto operator<=>(KeyId, KeyId) = default;
};

/// Shared symmetric key. Key material is never rendered by any output path.
struct MacKey {
  KeyId key_id;
  Bytes material;
  int length_bits = 0;

  friend bool operator==(const MacKey&, const MacKey&) = default;
};

struct MacTag {
  KeyId key_id;
  Digest tag;

  friend bool operator==(const MacTag&, const MacTag&) = default;
};

bool is_supported_width(int width_bits) noexcept;

/// SHA3 at the requested width (224 or 256).
Digest fingerprint(ByteView payload, int width_bits = kDefaultDigestBits);

/// HMAC over SHA3 at the digest width.
MacTag mac(const MacKey& key, ByteView message,
           int width_bits = kDefaultDigestBits,
           int min_key_bits = kDefaultMinKeyBits);

/// Constant-time tag comparison. A tag produced under a different key id is a
/// verification error, not a plain mismatch.
bool verify_mac(const MacKey& key, ByteView message, const MacTag& tag,
                int width_bits = kDefaultDigestBits,
                int min_key_bits = kDefaultMinKeyBits);

/// Per-node neighbor key table. At most one key per neighbor.
class KeyStore {
 public:
  using Map = std::map<NodeId, MacKey>;

  const MacKey* find(NodeId peer) const;
  bool contains(NodeId peer) const { return keys_.contains(peer); }
  /// Throws ErrorKind::kAlreadyPaired if a key for peer exists.
  void install(NodeId peer, MacKey key);
  /// Overwrites unconditionally. Used for fault injection.
  void replace(NodeId peer, MacKey key);
  bool erase(NodeId peer) { return keys_.erase(peer) > 0; }

  std::size_t size() const noexcept { return keys_.size(); }
  bool empty() const noexcept { return keys_.empty(); }
  Map::const_iterator begin() const { return keys_.begin(); }
  Map::const_iterator end() const { return keys_.end(); }

 private:
  Map keys_;
};

/// Draws a fresh key from rng and installs it in both stores.
MacKey pair(NodeId a, NodeId b, KeyStore& store_a, KeyStore& store_b, Rng& rng,
            int length_bits = kDefaultMinKeyBits);

std::string to_hex(ByteView bytes);

}  // namespace commtrust
