#include <gtest/gtest.h>

#include <algorithm>

#include "commtrust/credibility.hpp"
#include "commtrust/error.hpp"
#include "fixtures.hpp"

using namespace commtrust;
using fixtures::Fig2;

namespace {

FingerprintReply reply(std::uint32_t id, const Digest& d, int key_bits = 128) {
  return FingerprintReply{NodeId{id}, AppId{"maps", "1.0"}, d, key_bits};
}

Digest digest_of(std::uint8_t tag) { return fingerprint(Bytes{tag}); }

}  // namespace

TEST(CallOut, Fig2ThreeReplies) {
  Fig2 f;
  const AdversaryContext ctx{&f.catalog};
  const auto replies =
      broadcast_call_out(CallOut{Fig2::X, f.app, 1}, f.graph, f.installs, ctx);
  ASSERT_EQ(replies.size(), 3u);
  for (const auto& r : replies) EXPECT_NE(r.responder, Fig2::D);
  EXPECT_EQ(replies[0].digest, f.bad.digest());
  EXPECT_EQ(replies[1].digest, f.clean.digest());
}

TEST(CallOut, NobodyHoldsApp) {
  Fig2 f;
  const AdversaryContext ctx{&f.catalog};
  const auto replies = broadcast_call_out(CallOut{Fig2::X, AppId{"other", "1"}, 1}, f.graph,
                                          f.installs, ctx);
  EXPECT_TRUE(replies.empty());
}

TEST(CallOut, FreeRiderSilent) {
  Fig2 f;
  f.graph.set_behavior(Fig2::B, Behavior::kFreeRider);
  const AdversaryContext ctx{&f.catalog};
  const auto replies = broadcast_call_out(CallOut{Fig2::X, f.app, 1}, f.graph, f.installs, ctx);
  EXPECT_EQ(replies.size(), 2u);
  for (const auto& r : replies) EXPECT_NE(r.responder, Fig2::B);
  EXPECT_EQ(holders_in_scope(Fig2::X, f.app, f.graph, f.installs).size(), 3u);
}

TEST(CallOut, HopLimitRestrictsScope) {
  CommunityGraph g;
  InstallState s;
  Rng rng(1);
  for (std::uint32_t i = 0; i < 4; ++i) g.add_node(fixtures::profile(i));
  for (std::uint32_t i = 0; i + 1 < 4; ++i) g.connect(NodeId{i}, NodeId{i + 1}, rng);
  const AppPackage pkg{AppId{"maps", "1.0"}, Bytes{1, 2, 3}, Provenance::store()};
  for (std::uint32_t i = 1; i < 4; ++i) s.install(NodeId{i}, pkg);
  EXPECT_EQ(holders_in_scope(NodeId{0}, pkg.app_id, g, s, 1).size(), 1u);
  EXPECT_EQ(holders_in_scope(NodeId{0}, pkg.app_id, g, s, 0).size(), 3u);
}

TEST(FilterOld, Boundaries) {
  const Digest d = digest_of(1);
  auto out = filter_old_devices({reply(1, d, 64), reply(2, d, 128)}, 128);
  ASSERT_EQ(out.kept.size(), 1u);
  EXPECT_EQ(out.kept[0].responder, NodeId{2});
  EXPECT_EQ(out.removed, std::vector<NodeId>{NodeId{1}});
  EXPECT_EQ(filter_old_devices({reply(1, d), reply(2, d)}, 128).kept.size(), 2u);
  EXPECT_TRUE(filter_old_devices({}, 128).kept.empty());
}

TEST(Vote, Fig2Outcome) {
  const Digest h = digest_of(1);
  const Digest ha = digest_of(2);
  const auto out = majority_vote({reply(1, ha), reply(2, h), reply(3, h)});
  EXPECT_EQ(out.majority_digest, h);
  EXPECT_EQ(out.supporters, (std::vector<NodeId>{NodeId{2}, NodeId{3}}));
  EXPECT_EQ(out.dissenters, std::vector<NodeId>{NodeId{1}});
  EXPECT_FALSE(out.unanimous);
}

TEST(Vote, SingleReplyUnanimous) {
  const auto out = majority_vote({reply(4, digest_of(3))});
  EXPECT_TRUE(out.unanimous);
  EXPECT_EQ(out.majority_digest, digest_of(3));
}

TEST(Vote, TieAndEmpty) {
  try {
    majority_vote({reply(1, digest_of(1)), reply(2, digest_of(1)), reply(3, digest_of(2)),
                   reply(4, digest_of(2))});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNoMajority);
  }
  try {
    majority_vote({});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNoSource);
  }
}

TEST(Vote, PluralityAmongThreeClasses) {
  const auto out = majority_vote({reply(1, digest_of(1)), reply(2, digest_of(1)),
                                  reply(3, digest_of(2)), reply(4, digest_of(3))});
  EXPECT_EQ(out.majority_digest, digest_of(1));
  EXPECT_EQ(out.dissenters.size(), 2u);
}

TEST(Vote, PermutationInvariantAndSupportersDominate) {
  Rng rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<FingerprintReply> replies;
    const auto n = 1 + rng.below(9);
    for (std::uint32_t i = 0; i < n; ++i) {
      replies.push_back(reply(i, digest_of(static_cast<std::uint8_t>(rng.below(3)))));
    }
    std::optional<VoteOutcome> base;
    try {
      base = majority_vote(replies);
    } catch (const Error& e) {
      ASSERT_EQ(e.kind(), ErrorKind::kNoMajority);
    }
    for (int k = 0; k < 5; ++k) {
      rng.shuffle(replies);
      if (base) {
        const auto again = majority_vote(replies);
        EXPECT_EQ(again.majority_digest, base->majority_digest);
        EXPECT_EQ(again.supporters, base->supporters);
        EXPECT_EQ(again.dissenters, base->dissenters);
      } else {
        EXPECT_THROW(majority_vote(replies), Error);
      }
    }
    if (base) EXPECT_GT(base->supporters.size(), base->dissenters.size() / 2);
  }
}

TEST(ChooseSource, SingleSupporterAndDeterminism) {
  VoteOutcome one{digest_of(1), {NodeId{7}}, {}, true};
  Rng rng(1);
  EXPECT_EQ(choose_source(one, rng), NodeId{7});
  VoteOutcome two{digest_of(1), {NodeId{2}, NodeId{3}}, {NodeId{1}}, false};
  Rng a(5);
  Rng b(5);
  EXPECT_EQ(choose_source(two, a), choose_source(two, b));
}

TEST(ChooseSource, FairOverSeeds) {
  VoteOutcome two{digest_of(1), {NodeId{2}, NodeId{3}}, {NodeId{1}}, false};
  int picked_b = 0;
  const int seeds = 10000;
  for (int s = 0; s < seeds; ++s) {
    Rng rng(static_cast<std::uint64_t>(s));
    if (choose_source(two, rng) == NodeId{2}) ++picked_b;
  }
  EXPECT_NEAR(static_cast<double>(picked_b) / seeds, 0.5, 0.02);
}

TEST(Notices, Fig2OneNoticeToA) {
  const Digest h = digest_of(1);
  const Digest ha = digest_of(2);
  const std::vector<FingerprintReply> replies{reply(1, ha), reply(2, h), reply(3, h)};
  const auto out = majority_vote(replies);
  const auto notices = notify_dissenters(out, replies, NodeId{0}, AppId{"maps", "1.0"});
  ASSERT_EQ(notices.size(), 1u);
  EXPECT_EQ(notices[0].target, NodeId{1});
  EXPECT_EQ(notices[0].sender, NodeId{0});
  EXPECT_EQ(notices[0].suspected_digest, ha);
  EXPECT_EQ(notices[0].majority_digest, h);
}

TEST(Notices, UnanimousSendsNone) {
  const std::vector<FingerprintReply> replies{reply(1, digest_of(1)), reply(2, digest_of(1))};
  EXPECT_TRUE(notify_dissenters(majority_vote(replies), replies, NodeId{0}, AppId{"maps", "1.0"})
                  .empty());
}

TEST(Notices, PandemicCaseStillNotifiesCleanDissenter) {
  // Majority holds the tampered digest; the lone clean holder is accused.
  Fig2 f;
  f.installs.install(Fig2::B, f.bad);
  const AdversaryContext ctx{&f.catalog};
  const auto replies = broadcast_call_out(CallOut{Fig2::X, f.app, 1}, f.graph, f.installs, ctx);
  const auto out = majority_vote(replies);
  EXPECT_EQ(out.majority_digest, f.bad.digest());
  const auto notices = notify_dissenters(out, replies, Fig2::X, f.app);
  ASSERT_EQ(notices.size(), 1u);
  EXPECT_EQ(notices[0].target, Fig2::C);
}

TEST(Vote, AllHonestCleanIsUnanimous) {
  Fig2 f;
  f.installs.install(Fig2::A, f.clean);
  const AdversaryContext ctx{&f.catalog};
  const auto replies = broadcast_call_out(CallOut{Fig2::X, f.app, 1}, f.graph, f.installs, ctx);
  const auto out = majority_vote(replies);
  EXPECT_TRUE(out.unanimous);
  EXPECT_TRUE(notify_dissenters(out, replies, Fig2::X, f.app).empty());
}
