#include "commtrust/community.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "commtrust/error.hpp"
#include "commtrust/rng.hpp"
#include "commtrust/trust.hpp"

namespace commtrust {
namespace {

Edge ordered(NodeId a, NodeId b) { return a < b ? Edge{a, b} : Edge{b, a}; }

void require(bool ok, const char* field) {
  if (!ok) {
    throw Error(ErrorKind::kConfiguration,
                std::string("formation parameter out of range: ") + field);
  }
}

}  // namespace

void FormationParams::validate() const {
  require(beta_same >= 0.0, "beta_same");
  require(beta_diff >= 0.0, "beta_diff");
  require(link_cost >= 0.0, "link_cost");
  require(trust_weight >= 0.0, "trust_weight");
  require(join_rate >= 0.0 && join_rate <= 1.0, "join_rate");
  require(leave_rate >= 0.0 && leave_rate <= 1.0, "leave_rate");
  require(proposals_per_node >= 0, "proposals_per_node");
  require(severance_threshold >= 0.0 && severance_threshold <= 1.0,
          "severance_threshold");
  require(supernode_degree_multiplier >= 1, "supernode_degree_multiplier");
}

void CommunityGraph::add_node(NodeProfile profile) {
  if (profile.key_length_bits <= 0) {
    throw Error(ErrorKind::kInvalidArgument, "key length must be positive");
  }
  if (profile.max_degree <= 0) {
    throw Error(ErrorKind::kInvalidArgument, "max degree must be positive");
  }
  const NodeId id = profile.id;
  if (!nodes_.emplace(id, Entry{std::move(profile), {}}).second) {
    throw Error(ErrorKind::kInvalidArgument, "duplicate node id " + to_string(id));
  }
}

void CommunityGraph::remove_node(NodeId id) {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) return;
  for (const auto& [peer, key] : it->second.keys) {
    auto jt = nodes_.find(peer);
    if (jt != nodes_.end()) jt->second.keys.erase(id);
  }
  nodes_.erase(it);
}

CommunityGraph::Entry& CommunityGraph::entry(NodeId id) {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) {
    throw Error(ErrorKind::kInvalidArgument, "unknown node " + to_string(id));
  }
  return it->second;
}

const CommunityGraph::Entry& CommunityGraph::entry(NodeId id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) {
    throw Error(ErrorKind::kInvalidArgument, "unknown node " + to_string(id));
  }
  return it->second;
}

const NodeProfile& CommunityGraph::profile(NodeId id) const { return entry(id).profile; }

void CommunityGraph::set_behavior(NodeId id, Behavior behavior) {
  entry(id).profile.behavior = behavior;
}

void CommunityGraph::set_max_degree(NodeId id, int max_degree) {
  if (max_degree <= 0) {
    throw Error(ErrorKind::kInvalidArgument, "max degree must be positive");
  }
  entry(id).profile.max_degree = max_degree;
}

void CommunityGraph::mark_supernode(NodeId id, int degree_multiplier) {
  NodeProfile& p = entry(id).profile;
  if (p.supernode) return;
  p.supernode = true;
  p.max_degree *= degree_multiplier;
}

void CommunityGraph::increment_ages() {
  for (auto& [id, e] : nodes_) ++e.profile.age;
}

std::vector<NodeId> CommunityGraph::node_ids() const {
  std::vector<NodeId> out;
  out.reserve(nodes_.size());
  for (const auto& [id, e] : nodes_) out.push_back(id);
  return out;
}

NodeId CommunityGraph::next_id() const {
  return nodes_.empty() ? NodeId{0} : NodeId{nodes_.rbegin()->first.value + 1};
}

const MacKey& CommunityGraph::connect(NodeId a, NodeId b, Rng& rng) {
  if (a == b) throw Error(ErrorKind::kInvalidArgument, "self-loops are not allowed");
  Entry& ea = entry(a);
  Entry& eb = entry(b);
  if (ea.keys.size() >= static_cast<std::size_t>(ea.profile.max_degree) ||
      eb.keys.size() >= static_cast<std::size_t>(eb.profile.max_degree)) {
    throw Error(ErrorKind::kInvalidArgument,
                "endpoint at max degree linking " + to_string(a) + "-" + to_string(b));
  }
  const int bits = std::min(ea.profile.key_length_bits, eb.profile.key_length_bits);
  pair(a, b, ea.keys, eb.keys, rng, bits);
  return *ea.keys.find(b);
}

bool CommunityGraph::disconnect(NodeId a, NodeId b) {
  auto ia = nodes_.find(a);
  auto ib = nodes_.find(b);
  if (ia == nodes_.end() || ib == nodes_.end()) return false;
  const bool removed = ia->second.keys.erase(b);
  ib->second.keys.erase(a);
  return removed;
}

bool CommunityGraph::adjacent(NodeId a, NodeId b) const {
  auto it = nodes_.find(a);
  return it != nodes_.end() && it->second.keys.contains(b);
}

std::vector<NodeId> CommunityGraph::neighbors(NodeId id) const {
  std::vector<NodeId> out;
  for (const auto& [peer, key] : entry(id).keys) out.push_back(peer);
  return out;
}

std::size_t CommunityGraph::degree(NodeId id) const { return entry(id).keys.size(); }

std::vector<Edge> CommunityGraph::edges() const {
  std::vector<Edge> out;
  for (const auto& [id, e] : nodes_) {
    for (const auto& [peer, key] : e.keys) {
      if (id < peer) out.emplace_back(id, peer);
    }
  }
  return out;
}

std::size_t CommunityGraph::edge_count() const {
  std::size_t total = 0;
  for (const auto& [id, e] : nodes_) total += e.keys.size();
  return total / 2;
}

const KeyStore& CommunityGraph::keystore(NodeId id) const { return entry(id).keys; }

KeyStore& CommunityGraph::keystore_for_fault_injection(NodeId id) {
  return entry(id).keys;
}

std::vector<NodeId> CommunityGraph::reachable(NodeId origin, int hop_limit) const {
  entry(origin);
  std::map<NodeId, int> dist{{origin, 0}};
  std::deque<NodeId> queue{origin};
  while (!queue.empty()) {
    const NodeId cur = queue.front();
    queue.pop_front();
    const int d = dist[cur];
    if (hop_limit > 0 && d >= hop_limit) continue;
    for (const auto& [peer, key] : entry(cur).keys) {
      if (dist.emplace(peer, d + 1).second) queue.push_back(peer);
    }
  }
  std::vector<NodeId> out;
  for (const auto& [id, d] : dist) {
    if (id != origin) out.push_back(id);
  }
  return out;
}

std::string CommunityGraph::to_edge_list() const {
  std::ostringstream os;
  for (const auto& [a, b] : edges()) {
    os << a << ',' << b << ',' << profile(a).node_type << ','
       << profile(b).node_type << '\n';
  }
  return os.str();
}

void CommunityGraph::check_invariants() const {
  for (const auto& [id, e] : nodes_) {
    if (e.keys.contains(id)) {
      throw Error(ErrorKind::kValidation, "self-loop at " + to_string(id));
    }
    if (e.keys.size() > static_cast<std::size_t>(e.profile.max_degree)) {
      throw Error(ErrorKind::kValidation, "degree above max at " + to_string(id));
    }
    for (const auto& [peer, key] : e.keys) {
      auto it = nodes_.find(peer);
      if (it == nodes_.end()) {
        throw Error(ErrorKind::kValidation, "edge to missing node " + to_string(peer));
      }
      const MacKey* back = it->second.keys.find(id);
      if (back == nullptr || !(*back == key)) {
        throw Error(ErrorKind::kValidation,
                    "asymmetric key between " + to_string(id) + " and " + to_string(peer));
      }
    }
  }
}

double marginal_utility(const NodeProfile& i, const NodeProfile& j,
                        const FormationParams& params, const TrustBook& trust) {
  if (i.id == j.id) {
    throw Error(ErrorKind::kInvalidArgument, "utility of a link to oneself");
  }
  const double benefit = i.node_type == j.node_type ? params.beta_same : params.beta_diff;
  return benefit + params.trust_weight * trust.combined(i.id, j.id) - params.link_cost;
}

FormationRound propose_and_approve(CommunityGraph& graph, const FormationParams& params,
                                   const TrustBook& trust, Rng& rng) {
  FormationRound round;
  if (params.proposals_per_node <= 0) return round;

  std::vector<NodeId> order = graph.node_ids();
  rng.shuffle(order);

  for (NodeId proposer : order) {
    const NodeProfile& me = graph.profile(proposer);
    struct Candidate {
      NodeId id;
      double utility;
    };
    std::vector<Candidate> candidates;
    for (NodeId other : graph.node_ids()) {
      if (other == proposer || graph.adjacent(proposer, other)) continue;
      const double u = marginal_utility(me, graph.profile(other), params, trust);
      if (u > 0.0) candidates.push_back({other, u});
    }
    // Seeded tie-break: shuffle, then stable sort by utility.
    rng.shuffle(candidates);
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& a, const Candidate& b) {
                       return a.utility > b.utility;
                     });
    const auto k = std::min<std::size_t>(candidates.size(),
                                         static_cast<std::size_t>(params.proposals_per_node));
    for (std::size_t c = 0; c < k; ++c) {
      if (graph.degree(proposer) >= static_cast<std::size_t>(me.max_degree)) break;
      const NodeProfile& target = graph.profile(candidates[c].id);
      ++round.proposals;
      const bool approve =
          marginal_utility(target, me, params, trust) > 0.0 &&
          graph.degree(target.id) < static_cast<std::size_t>(target.max_degree);
      if (!approve) {
        ++round.rejected;
        continue;
      }
      graph.connect(proposer, target.id, rng);
      round.formed.push_back(ordered(proposer, target.id));
    }
  }
  return round;
}

ChurnResult churn(CommunityGraph& graph, const FormationParams& params,
                  const TrustBook& trust, const NodeFactory& make_node, Rng& rng) {
  ChurnResult result;

  for (const auto& [a, b] : graph.edges()) {
    if (trust.combined(a, b) < params.severance_threshold ||
        trust.combined(b, a) < params.severance_threshold) {
      graph.disconnect(a, b);
      result.severed.emplace_back(a, b);
    }
  }

  for (NodeId id : graph.node_ids()) {
    if (rng.bernoulli(params.leave_rate)) {
      graph.remove_node(id);
      result.departed.push_back(id);
    }
  }

  graph.increment_ages();

  if (rng.bernoulli(params.join_rate) && make_node) {
    const NodeId id = graph.next_id();
    NodeProfile profile = make_node(id, rng);
    profile.id = id;
    profile.age = 0;
    graph.add_node(std::move(profile));
    result.joined.push_back(id);
  }
  return result;
}

double homophily_index(const CommunityGraph& graph) {
  const auto edges = graph.edges();
  if (edges.empty()) {
    throw Error(ErrorKind::kUndefinedIndex, "homophily index of an edgeless graph");
  }
  std::size_t same = 0;
  for (const auto& [a, b] : edges) {
    if (graph.profile(a).node_type == graph.profile(b).node_type) ++same;
  }
  std::map<std::string, std::size_t> counts;
  for (NodeId id : graph.node_ids()) ++counts[graph.profile(id).node_type];
  const double n = static_cast<double>(graph.node_count());
  double same_pairs = 0.0;
  for (const auto& [type, c] : counts) {
    same_pairs += static_cast<double>(c) * static_cast<double>(c - 1);
  }
  const double expected = same_pairs / (n * (n - 1.0));
  return static_cast<double>(same) / static_cast<double>(edges.size()) - expected;
}

std::vector<NodeId> designate_supernodes(CommunityGraph& graph, std::size_t count,
                                         int degree_multiplier) {
  if (count > graph.node_count()) {
    throw Error(ErrorKind::kInvalidArgument, "more supernodes requested than nodes");
  }
  if (degree_multiplier < 1) {
    throw Error(ErrorKind::kInvalidArgument, "degree multiplier must be at least 1");
  }
  std::vector<NodeId> ids = graph.node_ids();  // ascending, so stable sort keeps id order on ties
  std::stable_sort(ids.begin(), ids.end(), [&](NodeId a, NodeId b) {
    return graph.degree(a) > graph.degree(b);
  });
  ids.resize(count);
  for (NodeId id : ids) graph.mark_supernode(id, degree_multiplier);
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace commtrust
