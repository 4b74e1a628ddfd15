#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "commtrust/crypto.hpp"
#include "commtrust/node_id.hpp"

namespace commtrust {

class Rng;

struct AppId {
  std::string name;
  std::string version;

  friend auto operator<=>(const AppId&, const AppId&) = default;

  /// "name@version"
  std::string label() const { return name + "@" + version; }
  /// Inverse of label(); throws ErrorKind::kInvalidArgument on malformed text.
  static AppId parse(const std::string& label);
};

struct Provenance {
  enum class Kind { kStore, kTampered };

  Kind kind = Kind::kStore;
  NodeId adversary;  // meaningful only when kind == kTampered

  static Provenance store() { return {}; }
  static Provenance tampered(NodeId by) { return {Kind::kTampered, by}; }
  bool is_tampered() const { return kind == Kind::kTampered; }

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct AppPackage {
  AppId app_id;
  Bytes payload;
  Provenance provenance;

  Digest digest(int width_bits = kDefaultDigestBits) const {
    return fingerprint(payload, width_bits);
  }

  friend bool operator==(const AppPackage&, const AppPackage&) = default;
};

/// Seeded byte perturbation. The result always fingerprints differently
/// from the input at both supported widths.
AppPackage tamper(const AppPackage& original, NodeId adversary, Rng& rng);

/// The trusted-store origin: one canonical clean package per app, plus the
/// single tampered variant the adversaries of a scenario share.
class AppCatalog {
 public:
  /// Throws ErrorKind::kDuplicatePublication if app_id is already published.
  const AppPackage& publish_clean(AppId app_id, Bytes payload);
  const AppPackage& set_tampered_variant(AppPackage tampered);

  bool contains(const AppId& app_id) const { return clean_.contains(app_id); }
  /// Throws ErrorKind::kUnknownApp.
  const AppPackage& clean(const AppId& app_id) const;
  const AppPackage* tampered_variant(const AppId& app_id) const;
  Digest clean_fingerprint(const AppId& app_id, int width_bits) const;

  std::vector<AppId> apps() const;

 private:
  std::map<AppId, AppPackage> clean_;
  std::map<AppId, AppPackage> tampered_;
};

inline AppPackage publish_clean(AppCatalog& catalog, AppId app_id, Bytes payload) {
  return catalog.publish_clean(std::move(app_id), std::move(payload));
}

/// Installed packages per node; at most one package per (node, app).
class InstallState {
 public:
  /// Replaces any package the node holds for pkg.app_id.
  void install(NodeId node, AppPackage pkg);
  const AppPackage* find(NodeId node, const AppId& app_id) const;
  bool holds(NodeId node, const AppId& app_id) const {
    return find(node, app_id) != nullptr;
  }
  void remove_node(NodeId node) { packages_.erase(node); }

  std::vector<NodeId> holders(const AppId& app_id) const;
  /// Number of (node, app) entries whose package is tampered.
  std::size_t infection_count() const;
  std::size_t installed_count() const;

  const std::map<NodeId, std::map<AppId, AppPackage>>& entries() const {
    return packages_;
  }

 private:
  std::map<NodeId, std::map<AppId, AppPackage>> packages_;
};

inline InstallState install(NodeId node, AppPackage pkg, InstallState state) {
  state.install(node, std::move(pkg));
  return state;
}

}  // namespace commtrust
