#pragma once

#include "commtrust/artifact.hpp"
#include "commtrust/community.hpp"
#include "commtrust/rng.hpp"

namespace fixtures {

using namespace commtrust;

inline NodeProfile profile(std::uint32_t id, Behavior b = Behavior::kHonest, int key_bits = 128) {
  NodeProfile p;
  p.id = NodeId{id};
  p.node_type = "device";
  p.behavior = b;
  p.key_length_bits = key_bits;
  p.max_degree = 16;
  return p;
}

// X asks; A holds a tampered copy, B and C clean ones, D nothing. Every pair
// of the five shares a key.
struct Fig2 {
  static constexpr NodeId X{0}, A{1}, B{2}, C{3}, D{4};
  AppId app{"maps", "1.0"};
  CommunityGraph graph;
  InstallState installs;
  AppCatalog catalog;
  AppPackage clean;
  AppPackage bad;

  explicit Fig2(std::uint64_t seed = 1) {
    Rng rng(seed);
    Bytes payload(1024);
    rng.fill(payload);
    clean = catalog.publish_clean(app, payload);
    bad = catalog.set_tampered_variant(tamper(clean, NodeId{99}, rng));
    for (std::uint32_t i = 0; i < 5; ++i) graph.add_node(profile(i));
    for (std::uint32_t i = 0; i < 5; ++i) {
      for (std::uint32_t j = i + 1; j < 5; ++j) graph.connect(NodeId{i}, NodeId{j}, rng);
    }
    installs.install(A, bad);
    installs.install(B, clean);
    installs.install(C, clean);
  }
};

}  // namespace fixtures
