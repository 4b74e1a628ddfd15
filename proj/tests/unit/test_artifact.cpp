#include <gtest/gtest.h>

#include "commtrust/artifact.hpp"
#include "commtrust/error.hpp"
#include "commtrust/rng.hpp"

using namespace commtrust;

namespace {

const AppId kMaps{"maps", "1.0"};

Bytes payload(std::uint64_t seed, std::size_t n = 1024) {
  Rng r(seed);
  Bytes b(n);
  r.fill(b);
  return b;
}

}  // namespace

TEST(AppId, LabelRoundTrip) {
  EXPECT_EQ(kMaps.label(), "maps@1.0");
  EXPECT_EQ(AppId::parse("maps@1.0"), kMaps);
  EXPECT_EQ(AppId::parse("a@b@2"), (AppId{"a@b", "2"}));
  EXPECT_THROW(AppId::parse("noversion"), Error);
}

TEST(Catalog, PublishedFingerprintMatchesPayload) {
  AppCatalog c;
  const Bytes p = payload(1);
  const auto& pkg = c.publish_clean(kMaps, p);
  EXPECT_EQ(pkg.digest(), fingerprint(p));
  EXPECT_EQ(c.clean_fingerprint(kMaps, 224), fingerprint(p));
  EXPECT_FALSE(pkg.provenance.is_tampered());
}

TEST(Catalog, DuplicatePublicationFails) {
  AppCatalog c;
  c.publish_clean(kMaps, payload(1));
  try {
    c.publish_clean(kMaps, payload(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDuplicatePublication);
  }
}

TEST(Catalog, IdenticalPayloadsDistinctIds) {
  AppCatalog c;
  const Bytes p = payload(1);
  const auto a = publish_clean(c, kMaps, p);
  const auto b = publish_clean(c, AppId{"maps", "1.1"}, p);
  EXPECT_EQ(a.digest(), b.digest());
}

TEST(Catalog, UnknownApp) {
  AppCatalog c;
  try {
    c.clean(kMaps);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUnknownApp);
  }
  EXPECT_EQ(c.tampered_variant(kMaps), nullptr);
}

TEST(Tamper, DeterministicPerSeed) {
  AppCatalog c;
  const auto clean = c.publish_clean(kMaps, payload(3));
  Rng r1(10);
  Rng r2(10);
  EXPECT_EQ(tamper(clean, NodeId{5}, r1), tamper(clean, NodeId{5}, r2));
}

TEST(Tamper, AlwaysChangesDigestAndMarksProvenance) {
  AppCatalog c;
  const auto clean = c.publish_clean(kMaps, payload(3, 64));
  for (std::uint64_t s = 0; s < 200; ++s) {
    Rng r(s);
    const auto bad = tamper(clean, NodeId{9}, r);
    EXPECT_TRUE(bad.provenance.is_tampered());
    EXPECT_EQ(bad.provenance.adversary, NodeId{9});
    EXPECT_EQ(bad.app_id, kMaps);
    EXPECT_NE(bad.digest(224), clean.digest(224));
    EXPECT_NE(bad.digest(256), clean.digest(256));
  }
}

TEST(Tamper, EmptyPayload) {
  const AppPackage empty{kMaps, {}, Provenance::store()};
  Rng r(1);
  const auto bad = tamper(empty, NodeId{1}, r);
  EXPECT_FALSE(bad.payload.empty());
}

TEST(Tamper, ProvenanceMatchesRegisteredFingerprint) {
  AppCatalog c;
  const auto clean = c.publish_clean(kMaps, payload(4));
  Rng r(2);
  const auto& bad = c.set_tampered_variant(tamper(clean, NodeId{1}, r));
  for (const AppPackage* pkg : {&clean, &bad}) {
    EXPECT_EQ(!pkg->provenance.is_tampered(),
              pkg->digest() == c.clean_fingerprint(kMaps, 224));
  }
}

TEST(Install, QueryAndReplace) {
  AppCatalog c;
  const auto clean = c.publish_clean(kMaps, payload(5));
  Rng r(1);
  const auto bad = tamper(clean, NodeId{7}, r);
  InstallState s;
  EXPECT_FALSE(s.holds(NodeId{1}, kMaps));
  s = install(NodeId{1}, clean, s);
  ASSERT_NE(s.find(NodeId{1}, kMaps), nullptr);
  EXPECT_EQ(*s.find(NodeId{1}, kMaps), clean);
  EXPECT_EQ(s.holders(kMaps), std::vector<NodeId>{NodeId{1}});
  s.install(NodeId{1}, bad);
  EXPECT_EQ(*s.find(NodeId{1}, kMaps), bad);
  EXPECT_EQ(s.installed_count(), 1u);
}

TEST(Install, InfectionCountIsTamperedEntries) {
  AppCatalog c;
  const auto a = c.publish_clean(kMaps, payload(5));
  const auto b = c.publish_clean(AppId{"chat", "2"}, payload(6));
  Rng r(1);
  InstallState s;
  s.install(NodeId{1}, tamper(a, NodeId{9}, r));
  s.install(NodeId{1}, tamper(b, NodeId{9}, r));
  s.install(NodeId{2}, a);
  s.install(NodeId{3}, tamper(a, NodeId{9}, r));
  EXPECT_EQ(s.infection_count(), 3u);
  s.remove_node(NodeId{1});
  EXPECT_EQ(s.infection_count(), 1u);
}
