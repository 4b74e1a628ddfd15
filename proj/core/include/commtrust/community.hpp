#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "commtrust/behavior.hpp"
#include "commtrust/crypto.hpp"
#include "commtrust/node_id.hpp"

namespace commtrust {

class Rng;
class TrustBook;

struct NodeProfile {
  NodeId id;
  std::string node_type;
  std::uint32_t age = 0;  // epochs since joining; recorded, not used by utilities
  int key_length_bits = kDefaultMinKeyBits;
  Behavior behavior = Behavior::kHonest;
  int max_degree = 8;
  bool supernode = false;
};

struct FormationParams {
  double beta_same = 1.0;
  double beta_diff = 0.2;
  double link_cost = 0.5;
  double trust_weight = 0.5;
  double join_rate = 0.0;
  double leave_rate = 0.0;
  int proposals_per_node = 3;
  double severance_threshold = 0.2;
  int supernode_degree_multiplier = 4;

  /// Throws ErrorKind::kConfiguration naming the first offending field.
  void validate() const;
};

using Edge = std::pair<NodeId, NodeId>;  // always (smaller, larger)

/// Nodes plus shared-key links. The key tables are the adjacency: an edge
/// exists exactly when both endpoints hold the same key for each other.
class CommunityGraph {
 public:
  void add_node(NodeProfile profile);
  /// Removes the node with all its edges and keys. No-op if absent.
  void remove_node(NodeId id);

  bool contains(NodeId id) const { return nodes_.contains(id); }
  const NodeProfile& profile(NodeId id) const;
  void set_behavior(NodeId id, Behavior behavior);
  void set_max_degree(NodeId id, int max_degree);
  /// Idempotent: the degree multiplier applies once.
  void mark_supernode(NodeId id, int degree_multiplier);
  void increment_ages();

  std::vector<NodeId> node_ids() const;
  std::size_t node_count() const noexcept { return nodes_.size(); }
  NodeId next_id() const;

  /// Pairs the two nodes with a fresh key of min(key lengths) bits.
  /// Throws if either node is missing, a == b, they are already linked, or
  /// either endpoint is at its max degree.
  const MacKey& connect(NodeId a, NodeId b, Rng& rng);
  bool disconnect(NodeId a, NodeId b);
  bool adjacent(NodeId a, NodeId b) const;

  std::vector<NodeId> neighbors(NodeId id) const;
  std::size_t degree(NodeId id) const;
  std::vector<Edge> edges() const;
  std::size_t edge_count() const;

  const KeyStore& keystore(NodeId id) const;
  /// Mutable key table for fault-injection experiments.
  KeyStore& keystore_for_fault_injection(NodeId id);

  /// Nodes within hop_limit hops of origin (0 = whole component), sorted,
  /// origin excluded.
  std::vector<NodeId> reachable(NodeId origin, int hop_limit = 0) const;

  /// One "id,id,type,type" line per edge.
  std::string to_edge_list() const;

  /// Throws ErrorKind::kValidation if a structural invariant is broken.
  void check_invariants() const;

 private:
  struct Entry {
    NodeProfile profile;
    KeyStore keys;
  };
  Entry& entry(NodeId id);
  const Entry& entry(NodeId id) const;

  std::map<NodeId, Entry> nodes_;
};

/// Benefit of the link to i (type affinity plus weighted trust in j) minus
/// the link cost.
double marginal_utility(const NodeProfile& i, const NodeProfile& j,
                        const FormationParams& params, const TrustBook& trust);

struct FormationRound {
  std::vector<Edge> formed;
  std::size_t proposals = 0;
  std::size_t rejected = 0;
};

/// One request-and-approval stage over all nodes in seeded order.
FormationRound propose_and_approve(CommunityGraph& graph, const FormationParams& params,
                                   const TrustBook& trust, Rng& rng);

using NodeFactory = std::function<NodeProfile(NodeId, Rng&)>;

struct ChurnResult {
  std::vector<Edge> severed;
  std::vector<NodeId> departed;
  std::vector<NodeId> joined;
};

/// Severs links to neighbors whose combined trust fell below the threshold,
/// then lets nodes depart with leave_rate, then admits at most one newcomer
/// with join_rate. Survivors age by one epoch.
ChurnResult churn(CommunityGraph& graph, const FormationParams& params,
                  const TrustBook& trust, const NodeFactory& make_node, Rng& rng);

/// Same-type edge fraction minus its expectation under random mixing.
/// Throws ErrorKind::kUndefinedIndex for an edgeless graph.
double homophily_index(const CommunityGraph& graph);

/// Marks the `count` highest-degree nodes (ties to the smaller id) as hubs
/// and multiplies their max degree.
std::vector<NodeId> designate_supernodes(CommunityGraph& graph, std::size_t count,
                                         int degree_multiplier = 4);

}  // namespace commtrust
