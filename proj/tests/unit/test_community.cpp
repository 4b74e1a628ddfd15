#include <gtest/gtest.h>

#include "commtrust/community.hpp"
#include "commtrust/error.hpp"
#include "commtrust/rng.hpp"
#include "commtrust/trust.hpp"

using namespace commtrust;

namespace {

NodeProfile node(std::uint32_t id, std::string type = "a", int max_degree = 8) {
  NodeProfile p;
  p.id = NodeId{id};
  p.node_type = std::move(type);
  p.max_degree = max_degree;
  return p;
}

FormationParams no_trust() {
  FormationParams f;
  f.trust_weight = 0.0;
  return f;
}

}  // namespace

TEST(MarginalUtility, SpecArithmetic) {
  TrustBook trust;
  EXPECT_DOUBLE_EQ(marginal_utility(node(1, "a"), node(2, "a"), no_trust(), trust), 0.5);
  EXPECT_DOUBLE_EQ(marginal_utility(node(1, "a"), node(2, "b"), no_trust(), trust), -0.3);
  FormationParams f;
  f.trust_weight = 1.0;
  EXPECT_DOUBLE_EQ(marginal_utility(node(1, "a"), node(2, "a"), f, trust), 1.0);
}

TEST(Graph, ConnectSharesOneKey) {
  CommunityGraph g;
  g.add_node(node(1));
  g.add_node(node(2));
  Rng rng(1);
  const MacKey k = g.connect(NodeId{1}, NodeId{2}, rng);
  EXPECT_TRUE(g.adjacent(NodeId{1}, NodeId{2}));
  EXPECT_EQ(*g.keystore(NodeId{1}).find(NodeId{2}), k);
  EXPECT_EQ(*g.keystore(NodeId{2}).find(NodeId{1}), k);
  EXPECT_EQ(g.edges(), (std::vector<Edge>{{NodeId{1}, NodeId{2}}}));
  EXPECT_TRUE(g.disconnect(NodeId{2}, NodeId{1}));
  EXPECT_FALSE(g.keystore(NodeId{1}).contains(NodeId{2}));
  EXPECT_FALSE(g.keystore(NodeId{2}).contains(NodeId{1}));
}

TEST(Graph, KeyLengthIsWeakerEndpoint) {
  CommunityGraph g;
  auto old = node(1);
  old.key_length_bits = 64;
  g.add_node(old);
  g.add_node(node(2));
  Rng rng(1);
  EXPECT_EQ(g.connect(NodeId{1}, NodeId{2}, rng).length_bits, 64);
}

TEST(Graph, ConnectRejectsSelfDuplicateAndFullNodes) {
  CommunityGraph g;
  g.add_node(node(1, "a", 1));
  g.add_node(node(2));
  g.add_node(node(3));
  Rng rng(1);
  EXPECT_THROW(g.connect(NodeId{1}, NodeId{1}, rng), Error);
  g.connect(NodeId{1}, NodeId{2}, rng);
  EXPECT_THROW(g.connect(NodeId{1}, NodeId{2}, rng), Error);
  EXPECT_THROW(g.connect(NodeId{3}, NodeId{1}, rng), Error);
  EXPECT_THROW(g.connect(NodeId{3}, NodeId{4}, rng), Error);
}

TEST(Graph, RemoveNodeDropsKeys) {
  CommunityGraph g;
  for (std::uint32_t i = 0; i < 4; ++i) g.add_node(node(i));
  Rng rng(2);
  g.connect(NodeId{0}, NodeId{1}, rng);
  g.connect(NodeId{0}, NodeId{2}, rng);
  g.connect(NodeId{1}, NodeId{2}, rng);
  g.remove_node(NodeId{0});
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_FALSE(g.keystore(NodeId{1}).contains(NodeId{0}));
  g.check_invariants();
}

TEST(Graph, ReachableRespectsHopLimit) {
  CommunityGraph g;
  for (std::uint32_t i = 0; i < 5; ++i) g.add_node(node(i));
  Rng rng(3);
  for (std::uint32_t i = 0; i + 1 < 4; ++i) g.connect(NodeId{i}, NodeId{i + 1}, rng);
  EXPECT_EQ(g.reachable(NodeId{0}, 1), std::vector<NodeId>{NodeId{1}});
  EXPECT_EQ(g.reachable(NodeId{0}, 2), (std::vector<NodeId>{NodeId{1}, NodeId{2}}));
  EXPECT_EQ(g.reachable(NodeId{0}).size(), 3u);  // node 4 is isolated
}

TEST(Graph, InvariantsUnderRandomOperations) {
  CommunityGraph g;
  Rng rng(99);
  for (std::uint32_t i = 0; i < 12; ++i) g.add_node(node(i, i % 2 ? "a" : "b", 4));
  for (int step = 0; step < 400; ++step) {
    const NodeId a{static_cast<std::uint32_t>(rng.below(14))};
    const NodeId b{static_cast<std::uint32_t>(rng.below(14))};
    switch (rng.below(4)) {
      case 0:
      case 1:
        try {
          g.connect(a, b, rng);
        } catch (const Error&) {
        }
        break;
      case 2:
        g.disconnect(a, b);
        break;
      default:
        if (rng.bernoulli(0.1)) {
          g.remove_node(a);
          g.add_node(node(a.value, "a", 4));
        }
    }
    ASSERT_NO_THROW(g.check_invariants());
    for (NodeId id : g.node_ids()) {
      EXPECT_LE(g.degree(id), 4u);
      EXPECT_FALSE(g.adjacent(id, id));
      EXPECT_EQ(g.keystore(id).size(), g.degree(id));
    }
  }
}

TEST(Formation, TwoSameTypeNodesLink) {
  CommunityGraph g;
  g.add_node(node(1));
  g.add_node(node(2));
  TrustBook trust;
  Rng rng(1);
  const auto round = propose_and_approve(g, FormationParams{}, trust, rng);
  EXPECT_EQ(round.formed.size(), 1u);
  EXPECT_TRUE(g.adjacent(NodeId{1}, NodeId{2}));
}

TEST(Formation, TargetAtMaxDegreeRejects) {
  CommunityGraph g;
  g.add_node(node(1, "a", 1));
  g.add_node(node(2, "a", 1));
  g.add_node(node(3));
  Rng rng(1);
  g.connect(NodeId{1}, NodeId{2}, rng);
  TrustBook trust;
  propose_and_approve(g, FormationParams{}, trust, rng);
  EXPECT_EQ(g.degree(NodeId{3}), 0u);
}

TEST(Formation, TargetMustApprove) {
  CommunityGraph g;
  g.add_node(node(1));
  g.add_node(node(2));
  FormationParams f;
  f.trust_weight = 1.0;
  f.link_cost = 1.2;
  TrustBook trust;
  trust.ledger(NodeId{2}).set_record(NodeId{1}, TrustRecord{0.0, 0.0, 5});
  EXPECT_GT(marginal_utility(node(1), node(2), f, trust), 0.0);
  EXPECT_LT(marginal_utility(node(2), node(1), f, trust), 0.0);
  Rng rng(4);
  const auto round = propose_and_approve(g, f, trust, rng);
  EXPECT_TRUE(round.formed.empty());
  EXPECT_EQ(round.rejected, 1u);
}

TEST(Formation, NoEdgeWithNonPositiveUtility) {
  FormationParams f;
  f.trust_weight = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    CommunityGraph g;
    Rng rng(seed);
    for (std::uint32_t i = 0; i < 20; ++i) g.add_node(node(i, rng.bernoulli(0.5) ? "a" : "b"));
    TrustBook trust;
    const auto round = propose_and_approve(g, f, trust, rng);
    for (const auto& [a, b] : round.formed) {
      EXPECT_GT(marginal_utility(g.profile(a), g.profile(b), f, trust), 0.0);
      EXPECT_GT(marginal_utility(g.profile(b), g.profile(a), f, trust), 0.0);
    }
    g.check_invariants();
  }
}

TEST(Churn, LeaveRateOneEmptiesGraph) {
  CommunityGraph g;
  for (std::uint32_t i = 0; i < 10; ++i) g.add_node(node(i));
  FormationParams f;
  f.leave_rate = 1.0;
  TrustBook trust;
  Rng rng(1);
  const NodeFactory factory = [](NodeId id, Rng&) { return node(id.value); };
  const auto r = churn(g, f, trust, factory, rng);
  EXPECT_EQ(g.node_count(), 0u);
  EXPECT_EQ(r.departed.size(), 10u);
}

TEST(Churn, ZeroRatesKeepNodeSet) {
  CommunityGraph g;
  for (std::uint32_t i = 0; i < 10; ++i) g.add_node(node(i));
  const auto before = g.node_ids();
  TrustBook trust;
  Rng rng(1);
  const NodeFactory factory = [](NodeId id, Rng&) { return node(id.value); };
  churn(g, FormationParams{}, trust, factory, rng);
  EXPECT_EQ(g.node_ids(), before);
  EXPECT_EQ(g.profile(NodeId{0}).age, 1u);
}

TEST(Churn, JoinRateOneAddsNewcomer) {
  CommunityGraph g;
  g.add_node(node(0));
  FormationParams f;
  f.join_rate = 1.0;
  TrustBook trust;
  Rng rng(1);
  const NodeFactory factory = [](NodeId id, Rng&) { return node(id.value, "b"); };
  const auto r = churn(g, f, trust, factory, rng);
  ASSERT_EQ(r.joined.size(), 1u);
  EXPECT_EQ(g.node_count(), 2u);
  EXPECT_EQ(g.profile(r.joined.front()).node_type, "b");
}

TEST(Churn, DistrustedNeighborSevered) {
  CommunityGraph g;
  for (std::uint32_t i = 0; i < 3; ++i) g.add_node(node(i));
  Rng rng(1);
  g.connect(NodeId{0}, NodeId{1}, rng);
  g.connect(NodeId{0}, NodeId{2}, rng);
  TrustBook trust;
  trust.ledger(NodeId{0}).set_record(NodeId{1}, TrustRecord{0.0, 0.5, 10});
  const NodeFactory factory = [](NodeId id, Rng&) { return node(id.value); };
  const auto r = churn(g, FormationParams{}, trust, factory, rng);
  EXPECT_EQ(r.severed, (std::vector<Edge>{{NodeId{0}, NodeId{1}}}));
  EXPECT_FALSE(g.adjacent(NodeId{0}, NodeId{1}));
  EXPECT_TRUE(g.adjacent(NodeId{0}, NodeId{2}));
}

TEST(Homophily, SameTypeEdgesPositive) {
  CommunityGraph g;
  Rng rng(1);
  for (std::uint32_t i = 0; i < 10; ++i) g.add_node(node(i, i < 5 ? "a" : "b"));
  for (std::uint32_t i = 0; i < 4; ++i) {
    g.connect(NodeId{i}, NodeId{i + 1}, rng);
    g.connect(NodeId{i + 5}, NodeId{i + 6}, rng);
  }
  // 1 - 2 * 5 * 4 / (10 * 9)
  EXPECT_NEAR(homophily_index(g), 1.0 - 40.0 / 90.0, 1e-12);
}

TEST(Homophily, CompleteBalancedGraphNearZero) {
  CommunityGraph g;
  Rng rng(1);
  const std::uint32_t n = 20;
  for (std::uint32_t i = 0; i < n; ++i) g.add_node(node(i, i % 2 ? "a" : "b", 64));
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = i + 1; j < n; ++j) g.connect(NodeId{i}, NodeId{j}, rng);
  }
  EXPECT_LT(std::abs(homophily_index(g)), 0.05);
}

TEST(Homophily, EdgelessIsUndefined) {
  CommunityGraph g;
  g.add_node(node(1));
  try {
    homophily_index(g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUndefinedIndex);
  }
}

TEST(Supernodes, CountZeroLeavesGraph) {
  CommunityGraph g;
  g.add_node(node(1));
  EXPECT_TRUE(designate_supernodes(g, 0).empty());
  EXPECT_FALSE(g.profile(NodeId{1}).supernode);
}

TEST(Supernodes, StarCenter) {
  CommunityGraph g;
  Rng rng(1);
  for (std::uint32_t i = 0; i < 6; ++i) g.add_node(node(i));
  for (std::uint32_t i = 1; i < 6; ++i) g.connect(NodeId{0}, NodeId{i}, rng);
  EXPECT_EQ(designate_supernodes(g, 1), std::vector<NodeId>{NodeId{0}});
  EXPECT_TRUE(g.profile(NodeId{0}).supernode);
  EXPECT_EQ(g.profile(NodeId{0}).max_degree, 32);
  designate_supernodes(g, 1);
  EXPECT_EQ(g.profile(NodeId{0}).max_degree, 32);
}

TEST(Supernodes, TieGoesToSmallerId) {
  CommunityGraph g;
  Rng rng(1);
  for (std::uint32_t i = 0; i < 10; ++i) g.add_node(node(i));
  g.connect(NodeId{7}, NodeId{1}, rng);
  g.connect(NodeId{7}, NodeId{2}, rng);
  g.connect(NodeId{3}, NodeId{4}, rng);
  g.connect(NodeId{3}, NodeId{5}, rng);
  EXPECT_EQ(designate_supernodes(g, 1), std::vector<NodeId>{NodeId{3}});
}

TEST(Formation, ParamsValidate) {
  FormationParams f;
  f.leave_rate = 1.5;
  EXPECT_THROW(f.validate(), Error);
}
