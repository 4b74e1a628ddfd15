#include "commtrust/artifact.hpp"

#include "commtrust/error.hpp"
#include "commtrust/rng.hpp"

namespace commtrust {

AppId AppId::parse(const std::string& label) {
  const auto at = label.rfind('@');
  if (at == std::string::npos || at == 0 || at + 1 == label.size()) {
    throw Error(ErrorKind::kInvalidArgument,
                "app label '" + label + "' is not of the form name@version");
  }
  return AppId{label.substr(0, at), label.substr(at + 1)};
}

AppPackage tamper(const AppPackage& original, NodeId adversary, Rng& rng) {
  AppPackage out = original;
  out.provenance = Provenance::tampered(adversary);
  for (;;) {
    if (out.payload.empty()) {
      out.payload.push_back(static_cast<std::uint8_t>(rng.next()));
    } else {
      // Flip a handful of bytes; the xor mask is never zero so at least one
      // byte changes.
      const std::size_t flips = 1 + static_cast<std::size_t>(rng.below(8));
      for (std::size_t i = 0; i < flips; ++i) {
        const auto pos = static_cast<std::size_t>(rng.below(out.payload.size()));
        out.payload[pos] ^= static_cast<std::uint8_t>(1 + rng.below(255));
      }
    }
    if (fingerprint(out.payload, 224) != fingerprint(original.payload, 224) &&
        fingerprint(out.payload, 256) != fingerprint(original.payload, 256)) {
      return out;
    }
  }
}

const AppPackage& AppCatalog::publish_clean(AppId app_id, Bytes payload) {
  if (clean_.contains(app_id)) {
    throw Error(ErrorKind::kDuplicatePublication,
                "app " + app_id.label() + " is already published");
  }
  AppPackage pkg{app_id, std::move(payload), Provenance::store()};
  return clean_.emplace(std::move(app_id), std::move(pkg)).first->second;
}

const AppPackage& AppCatalog::set_tampered_variant(AppPackage tampered) {
  if (!clean_.contains(tampered.app_id)) {
    throw Error(ErrorKind::kUnknownApp,
                "no clean package for " + tampered.app_id.label());
  }
  if (!tampered.provenance.is_tampered()) {
    throw Error(ErrorKind::kInvalidArgument, "variant must carry tampered provenance");
  }
  auto key = tampered.app_id;
  return tampered_.insert_or_assign(std::move(key), std::move(tampered)).first->second;
}

const AppPackage& AppCatalog::clean(const AppId& app_id) const {
  auto it = clean_.find(app_id);
  if (it == clean_.end()) {
    throw Error(ErrorKind::kUnknownApp, "unknown app " + app_id.label());
  }
  return it->second;
}

const AppPackage* AppCatalog::tampered_variant(const AppId& app_id) const {
  auto it = tampered_.find(app_id);
  return it == tampered_.end() ? nullptr : &it->second;
}

Digest AppCatalog::clean_fingerprint(const AppId& app_id, int width_bits) const {
  return clean(app_id).digest(width_bits);
}

std::vector<AppId> AppCatalog::apps() const {
  std::vector<AppId> out;
  out.reserve(clean_.size());
  for (const auto& [id, pkg] : clean_) out.push_back(id);
  return out;
}

void InstallState::install(NodeId node, AppPackage pkg) {
  auto& slot = packages_[node];
  auto key = pkg.app_id;
  slot.insert_or_assign(std::move(key), std::move(pkg));
}

const AppPackage* InstallState::find(NodeId node, const AppId& app_id) const {
  auto it = packages_.find(node);
  if (it == packages_.end()) return nullptr;
  auto jt = it->second.find(app_id);
  return jt == it->second.end() ? nullptr : &jt->second;
}

std::vector<NodeId> InstallState::holders(const AppId& app_id) const {
  std::vector<NodeId> out;
  for (const auto& [node, apps] : packages_) {
    if (apps.contains(app_id)) out.push_back(node);
  }
  return out;
}

std::size_t InstallState::infection_count() const {
  std::size_t n = 0;
  for (const auto& [node, apps] : packages_) {
    for (const auto& [id, pkg] : apps) {
      if (pkg.provenance.is_tampered()) ++n;
    }
  }
  return n;
}

std::size_t InstallState::installed_count() const {
  std::size_t n = 0;
  for (const auto& [node, apps] : packages_) n += apps.size();
  return n;
}

}  // namespace commtrust
