#include "commtrust/crypto.hpp"

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/core_names.h>
#include <openssl/params.h>

#include <algorithm>

#include "commtrust/error.hpp"
#include "commtrust/rng.hpp"

namespace commtrust {
namespace {

const EVP_MD* digest_for(int width_bits) {
  switch (width_bits) {
    case 224:
      return EVP_sha3_224();
    case 256:
      return EVP_sha3_256();
    default:
      throw Error(ErrorKind::kConfiguration,
                  "unsupported digest width " + std::to_string(width_bits) +
                      " (expected 224 or 256)");
  }
}

// One HMAC context per thread and width, with the digest bound once so each
// call only rekeys.
struct MacContext {
  EVP_MAC* mac = nullptr;
  EVP_MAC_CTX* ctx = nullptr;

  explicit MacContext(int width_bits) {
    mac = EVP_MAC_fetch(nullptr, OSSL_MAC_NAME_HMAC, nullptr);
    if (mac) ctx = EVP_MAC_CTX_new(mac);
    char name[16] = "SHA3-224";
    if (width_bits == 256) std::copy_n("SHA3-256", 9, name);
    const OSSL_PARAM params[] = {
        OSSL_PARAM_construct_utf8_string(OSSL_MAC_PARAM_DIGEST, name, 0),
        OSSL_PARAM_construct_end()};
    if (ctx == nullptr || EVP_MAC_CTX_set_params(ctx, params) != 1) {
      throw Error(ErrorKind::kConfiguration, "HMAC initialization failed");
    }
  }
  ~MacContext() {
    EVP_MAC_CTX_free(ctx);
    EVP_MAC_free(mac);
  }
  MacContext(const MacContext&) = delete;
  MacContext& operator=(const MacContext&) = delete;
};

EVP_MAC_CTX* mac_context(int width_bits) {
  thread_local MacContext c224(224);
  thread_local MacContext c256(256);
  return width_bits == 256 ? c256.ctx : c224.ctx;
}

void check_key(const MacKey& key, int min_key_bits) {
  if (key.length_bits < min_key_bits ||
      key.material.size() * 8 < static_cast<std::size_t>(min_key_bits)) {
    throw Error(ErrorKind::kKeyStrength,
                "key of " + std::to_string(key.length_bits) +
                    " bits is below the minimum of " +
                    std::to_string(min_key_bits));
  }
}

}  // namespace

Digest::Digest(Bytes bytes, int width_bits)
    : bytes_(std::move(bytes)), width_bits_(width_bits) {
  if (width_bits <= 0 || bytes_.size() * 8 != static_cast<std::size_t>(width_bits)) {
    throw Error(ErrorKind::kConfiguration, "digest length does not match width");
  }
}

std::string Digest::hex() const { return to_hex(bytes_); }

std::strong_ordering operator<=>(const Digest& a, const Digest& b) {
  if (auto c = a.width_bits_ <=> b.width_bits_; c != 0) return c;
  return std::lexicographical_compare_three_way(
      a.bytes_.begin(), a.bytes_.end(), b.bytes_.begin(), b.bytes_.end());
}

bool is_supported_width(int width_bits) noexcept {
  return width_bits == 224 || width_bits == 256;
}

Digest fingerprint(ByteView payload, int width_bits) {
  const EVP_MD* md = digest_for(width_bits);
  Bytes out(static_cast<std::size_t>(width_bits / 8));
  unsigned int len = 0;
  if (EVP_Digest(payload.data(), payload.size(), out.data(), &len, md,
                 nullptr) != 1 ||
      len != out.size()) {
    throw Error(ErrorKind::kConfiguration, "SHA3 digest computation failed");
  }
  return Digest(std::move(out), width_bits);
}

MacTag mac(const MacKey& key, ByteView message, int width_bits,
           int min_key_bits) {
  check_key(key, min_key_bits);
  if (message.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "mac over an empty message");
  }
  digest_for(width_bits);
  EVP_MAC_CTX* ctx = mac_context(width_bits);
  Bytes out(EVP_MAX_MD_SIZE);
  std::size_t len = 0;
  if (EVP_MAC_init(ctx, key.material.data(), key.material.size(), nullptr) != 1 ||
      EVP_MAC_update(ctx, message.data(), message.size()) != 1 ||
      EVP_MAC_final(ctx, out.data(), &len, out.size()) != 1) {
    throw Error(ErrorKind::kConfiguration, "HMAC computation failed");
  }
  out.resize(static_cast<std::size_t>(width_bits / 8));
  return MacTag{key.key_id, Digest(std::move(out), width_bits)};
}

bool verify_mac(const MacKey& key, ByteView message, const MacTag& tag,
                int width_bits, int min_key_bits) {
  if (tag.key_id != key.key_id) {
    throw Error(ErrorKind::kVerification, "tag was issued under another key");
  }
  if (tag.tag.width_bits() != width_bits) {
    throw Error(ErrorKind::kVerification, "tag width does not match configuration");
  }
  const MacTag expected = mac(key, message, width_bits, min_key_bits);
  return CRYPTO_memcmp(expected.tag.bytes().data(), tag.tag.bytes().data(),
                       expected.tag.bytes().size()) == 0;
}

const MacKey* KeyStore::find(NodeId peer) const {
  auto it = keys_.find(peer);
  return it == keys_.end() ? nullptr : &it->second;
}

void KeyStore::install(NodeId peer, MacKey key) {
  if (!keys_.emplace(peer, std::move(key)).second) {
    throw Error(ErrorKind::kAlreadyPaired,
                "a key for node " + to_string(peer) + " already exists");
  }
}

void KeyStore::replace(NodeId peer, MacKey key) { keys_[peer] = std::move(key); }

MacKey pair(NodeId a, NodeId b, KeyStore& store_a, KeyStore& store_b, Rng& rng,
            int length_bits) {
  if (a == b) {
    throw Error(ErrorKind::kInvalidArgument, "a node cannot pair with itself");
  }
  if (length_bits <= 0) {
    throw Error(ErrorKind::kInvalidArgument, "key length must be positive");
  }
  if (store_a.contains(b) || store_b.contains(a)) {
    throw Error(ErrorKind::kAlreadyPaired,
                "nodes " + to_string(a) + " and " + to_string(b) +
                    " already share a key");
  }
  MacKey key;
  key.key_id = KeyId{rng.next()};
  key.length_bits = length_bits;
  key.material.resize(static_cast<std::size_t>((length_bits + 7) / 8));
  rng.fill(key.material);
  store_a.install(b, key);
  store_b.install(a, key);
  return key;
}

std::string to_hex(ByteView bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0f]);
  }
  return out;
}

}  // namespace commtrust
