#include "commtrust/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <type_traits>

#include "commtrust/adversary.hpp"
#include "commtrust/credibility.hpp"
#include "commtrust/error.hpp"
#include "commtrust/messages.hpp"
#include "commtrust/multipath.hpp"

namespace commtrust {

namespace {

bool is_adversarial_server(Behavior b) {
  return b == Behavior::kTamperedServer || b == Behavior::kTocTouSwapper;
}

Scenario validated(Scenario s) {
  s.validate();
  return s;
}

std::size_t floor_share(double fraction, std::size_t n) {
  return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 1e-9));
}

std::string nodes_detail(const std::vector<NodeId>& ids) {
  std::string out;
  for (NodeId id : ids) {
    if (!out.empty()) out += ' ';
    out += to_string(id);
  }
  return out;
}

}  // namespace

Simulation::Simulation(Scenario scenario)
    : scenario_(validated(std::move(scenario))), root_(scenario_.seed) {
  setup();
}

std::vector<std::string> Simulation::assumptions() {
  return {
      "single-peer trust is sqrt(resp_prob * cond_trust)",
      "holders in call-out scope and polled verifiers are scored for responding",
      "verifiers are scored for correctness against the final decision",
      "a failed delivery binding counts as an incorrect reply from the source",
      "with the store reachable, requesters vote and notify, then install from the store",
      "flagged nodes refresh from the store at the next epoch when it is reachable",
      "tampering servers and swappers never refresh",
      "the requester is never one of the sender's verifiers",
      "only digest and tag bits are priced; notices and requests carry no overhead",
      "newcomers are honest with default key length and degree cap",
  };
}

void Simulation::setup() {
  state_.trust = TrustBook(scenario_.trust_alpha);
  if (scenario_.experiment == Experiment::kAuthBound) return;

  for (const auto& spec : scenario_.apps) {
    Rng rng = root_.split("app/" + spec.id.label());
    Bytes payload(spec.payload_bytes);
    rng.fill(payload);
    state_.catalog.publish_clean(spec.id, std::move(payload));
  }

  Rng types_rng = root_.split("setup/types");
  setup_nodes(types_rng);

  NodeId origin = kExternalAdversary;
  for (NodeId id : state_.graph.node_ids()) {
    if (is_adversarial_server(state_.graph.profile(id).behavior)) {
      origin = id;
      break;
    }
  }
  for (const auto& spec : scenario_.apps) {
    Rng rng = root_.split("tamper/" + spec.id.label());
    state_.catalog.set_tampered_variant(tamper(state_.catalog.clean(spec.id), origin, rng));
  }

  Rng installs_rng = root_.split("setup/installs");
  setup_installs(installs_rng);

  Rng keys = root_.split("setup/keys");
  for (const auto& [a, b] : scenario_.edges) state_.graph.connect(a, b, keys);
  state_.graph.check_invariants();
}

void Simulation::setup_nodes(Rng& rng) {
  const auto& d = scenario_.node_defaults;
  if (!scenario_.nodes.empty()) {
    for (const auto& spec : scenario_.nodes) {
      NodeProfile p;
      p.id = spec.id;
      p.node_type = spec.node_type;
      p.behavior = spec.behavior;
      p.key_length_bits = spec.key_length_bits.value_or(d.key_length_bits);
      p.max_degree = spec.max_degree.value_or(d.max_degree);
      state_.graph.add_node(std::move(p));
    }
    return;
  }

  const std::size_t n = scenario_.node_count;
  std::vector<double> weights;
  for (const auto& [t, w] : scenario_.type_distribution) weights.push_back(w);
  const auto counts = apportion(weights, n);
  std::vector<std::string> types;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    types.insert(types.end(), counts[i], scenario_.type_distribution[i].first);
  }
  rng.shuffle(types);

  std::vector<NodeId> ids;
  for (std::size_t i = 0; i < n; ++i) ids.emplace_back(static_cast<std::uint32_t>(i));

  Rng old_rng = root_.split("setup/old");
  std::vector<bool> old(n, false);
  for (auto i : old_rng.sample_indices(n, floor_share(d.old_device_fraction, n))) old[i] = true;

  CompromisePlan plan{scenario_.compromise_fraction, scenario_.strategy_mix,
                      Rng::derive_seed(scenario_.seed, "behaviors")};
  const BehaviorMap behaviors = assign_behaviors(ids, plan);

  for (std::size_t i = 0; i < n; ++i) {
    NodeProfile p;
    p.id = ids[i];
    p.node_type = types[i];
    p.behavior = behaviors.at(ids[i]);
    p.key_length_bits = old[i] ? d.old_key_length_bits : d.key_length_bits;
    p.max_degree = d.max_degree;
    state_.graph.add_node(std::move(p));
  }
}

void Simulation::setup_installs(Rng& rng) {
  auto& catalog = state_.catalog;
  if (!scenario_.nodes.empty()) {
    for (const auto& spec : scenario_.nodes) {
      for (const auto& [app, copy] : spec.apps) {
        if (copy == InitialCopy::kClean) {
          state_.installs.install(spec.id, catalog.clean(app));
        } else {
          state_.installs.install(spec.id, *catalog.tampered_variant(app));
        }
      }
    }
    return;
  }

  const auto ids = state_.graph.node_ids();
  const std::size_t n = ids.size();
  for (const auto& spec : scenario_.apps) {
    Rng app_rng = rng.split(spec.id.label());
    const std::size_t clean = floor_share(spec.initial_holders, n);
    const std::size_t infected = std::min(floor_share(spec.initial_infected, n), n - clean);
    const auto picks = app_rng.sample_indices(n, clean + infected);
    for (std::size_t i = 0; i < picks.size(); ++i) {
      const NodeId node = ids[picks[i]];
      if (i < clean) {
        state_.installs.install(node, catalog.clean(spec.id));
      } else {
        state_.installs.install(node, *catalog.tampered_variant(spec.id));
      }
    }
  }
  for (NodeId id : ids) {
    const Behavior b = state_.graph.profile(id).behavior;
    for (const auto& spec : scenario_.apps) {
      if (b == Behavior::kTamperedServer) {
        state_.installs.install(id, *catalog.tampered_variant(spec.id));
      } else if (b == Behavior::kTocTouSwapper) {
        state_.installs.install(id, catalog.clean(spec.id));
      }
    }
  }
}

void Simulation::log_event(EventKind kind, std::vector<NodeId> participants,
                           std::string detail) {
  Event e;
  e.tick = tick_;
  e.kind = kind;
  e.participants = std::move(participants);
  e.detail = std::move(detail);
  log_.append(std::move(e));
}

template <typename Msg>
void Simulation::log_message(EventKind kind, const Msg& msg, NodeId from, NodeId to,
                             std::string detail) {
  Event e;
  e.tick = message_tick();
  e.kind = kind;
  e.participants = from == to ? std::vector<NodeId>{from} : std::vector<NodeId>{from, to};
  e.wire_bytes = encode(msg).size();
  e.overhead_bits = overhead_bits(msg);
  if constexpr (std::is_same_v<Msg, AuthPackage>) e.payload_bytes = msg.package.payload.size();
  e.detail = std::move(detail);
  log_.append(std::move(e));
}

bool Simulation::fallback_to_store(NodeId requester, const AppId& app, RetrievalRecord& record) {
  if (scenario_.protocol.store_blocked) return false;
  state_.installs.install(requester, state_.catalog.clean(app));
  state_.suspects.erase({requester, app});
  log_event(EventKind::kStoreFetch, {requester}, app.label());
  record.installed_from = InstallSource::kStore;
  record.installed_tampered = false;
  if (current_epoch_) ++current_epoch_->store_fetches;
  return true;
}

RetrievalRecord Simulation::retrieve(NodeId requester, const AppId& app, std::uint32_t epoch) {
  if (!state_.graph.contains(requester)) {
    throw Error(ErrorKind::kInvalidArgument, "requester " + to_string(requester) + " is not a member");
  }
  state_.catalog.clean(app);  // throws for unknown apps

  const auto& proto = scenario_.protocol;
  const int width = proto.digest_width;
  const Quorum quorum = Quorum::from_decimal(proto.quorum);
  Rng rng = root_.split("retrieval/" + std::to_string(epoch) + "/" +
                        std::to_string(retrieval_counter_++));
  const AdversaryContext ctx{&state_.catalog, width};
  const auto& graph = state_.graph;

  RetrievalRecord rec;
  rec.epoch = epoch;
  rec.requester = requester;
  rec.app = app;
  rec.first_event = log_.size();

  Ledger& ledger = state_.trust.ledger(requester);
  ledger.begin_round();

  auto finish = [&]() -> RetrievalRecord {
    rec.last_event = log_.size();
    const auto& entries = log_.entries();
    rec.overhead = account_overhead(std::span<const Event>(
        entries.data() + rec.first_event, rec.last_event - rec.first_event));
    if (current_epoch_) {
      auto& m = *current_epoch_;
      ++m.retrievals;
      if (rec.decision) {
        if (rec.decision->accepted) {
          ++m.accepted;
        } else {
          ++m.rejected;
        }
      }
      if (rec.installed_from == InstallSource::kCommunity && rec.installed_tampered) {
        ++m.tampered_accepted;
      }
      m.notices += rec.notices;
      m.false_accusations += rec.false_accusations;
    }
    metrics_.retrievals.push_back(rec);
    return rec;
  };

  // 1. call-out and replies
  const CallOut call{requester, app, ++rounds_[requester]};
  log_message(EventKind::kCallOut, call, requester, requester, app.label());
  const auto expected = holders_in_scope(requester, app, graph, state_.installs, proto.hop_limit);
  const auto replies = broadcast_call_out(call, graph, state_.installs, ctx, proto.hop_limit);
  std::set<NodeId> responded;
  for (const auto& r : replies) {
    responded.insert(r.responder);
    log_message(EventKind::kFingerprintReply, r, r.responder, requester, r.digest.hex());
  }
  for (NodeId h : expected) ledger.update_response(h, responded.contains(h));
  rec.replies = replies.size();

  auto filtered = filter_old_devices(replies, proto.min_key_bits);
  rec.filtered_old = filtered.removed.size();
  if (!filtered.removed.empty()) {
    log_event(EventKind::kFiltered, filtered.removed, "key below minimum");
  }

  // 2. majority vote
  VoteOutcome outcome;
  try {
    outcome = majority_vote(filtered.kept);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kNoSource) {
      rec.vote = VoteResult::kNoSource;
      ++metrics_.votes.no_source;
    } else if (e.kind() == ErrorKind::kNoMajority) {
      rec.vote = VoteResult::kNoMajority;
      ++metrics_.votes.no_majority;
    } else {
      throw;
    }
    log_event(EventKind::kVoteFailed, {requester}, std::string(to_string(rec.vote)));
    fallback_to_store(requester, app, rec);
    return finish();
  }
  if (outcome.unanimous) {
    rec.vote = VoteResult::kUnanimous;
    ++metrics_.votes.unanimous;
  } else {
    rec.vote = VoteResult::kMajority;
    ++metrics_.votes.majority;
  }
  std::vector<NodeId> kept_ids;
  for (const auto& r : filtered.kept) kept_ids.push_back(r.responder);
  rec.subjective_trust = subjective_trust(ledger, kept_ids);
  {
    std::vector<NodeId> participants{requester};
    participants.insert(participants.end(), outcome.supporters.begin(), outcome.supporters.end());
    log_event(EventKind::kVote, std::move(participants),
              outcome.majority_digest.hex() + " " + std::to_string(outcome.supporters.size()) +
                  "-" + std::to_string(outcome.dissenters.size()));
  }
  for (NodeId id : kept_ids) {
    ledger.update_correctness(id, std::binary_search(outcome.supporters.begin(),
                                                     outcome.supporters.end(), id));
  }

  // 3. suspicion notices
  for (const auto& notice : notify_dissenters(outcome, filtered.kept, requester, app)) {
    log_message(EventKind::kSuspicionNotice, notice, requester, notice.target,
                notice.suspected_digest.hex());
    ++rec.notices;
    state_.suspects.insert({notice.target, app});
    const AppPackage* held = state_.installs.find(notice.target, app);
    if (held && !held->provenance.is_tampered()) ++rec.false_accusations;
  }

  if (!proto.store_blocked) {
    fallback_to_store(requester, app, rec);
    return finish();
  }

  // 4. download from a supporter
  const NodeId source = choose_source(outcome, rng);
  rec.source = source;
  const DownloadRequest request{requester, source, app, outcome.majority_digest};
  log_message(EventKind::kDownloadRequest, request, requester, source);
  const AppPackage* held = state_.installs.find(source, app);
  if (held == nullptr) {
    throw Error(ErrorKind::kValidation, "source " + to_string(source) + " holds no copy");
  }

  AuthPackage auth;
  const std::vector<NodeId> exclude{requester};
  try {
    auth = build_auth_package(source, *held, graph, proto.mac_fanout, rng, width,
                              proto.min_key_bits, exclude);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kNoVerifiers) throw;
    rec.decision = AcceptanceDecision{false, AcceptReason::kNoVerifiers, 0, 0};
    log_event(EventKind::kRejected, {requester, source}, "no-verifiers");
    fallback_to_store(requester, app, rec);
    return finish();
  }
  auth = std::get<AuthPackage>(*intercept(graph.profile(source).behavior, auth, ctx));
  log_message(EventKind::kAppDelivery, auth, source, requester, auth.claimed_digest.hex());

  // 5. multipath authentication
  if (!toc_tou_check(auth, outcome.majority_digest)) {
    rec.decision = AcceptanceDecision{false, AcceptReason::kFingerprintMismatch, 0, 0};
    log_event(EventKind::kTocTouFailed, {requester, source}, fingerprint(auth.package.payload, width).hex());
    ledger.update_correctness(source, false);
    fallback_to_store(requester, app, rec);
    return finish();
  }
  const auto requests = verification_requests(requester, auth);
  for (const auto& req : requests) {
    log_message(EventKind::kVerifyRequest, req, requester, req.verifier);
  }
  const auto verdicts = verify_round(requester, auth, graph, ctx, proto.min_key_bits);
  std::map<NodeId, bool> answered;
  for (const auto& v : verdicts) {
    answered[v.verifier] = v.verdict;
    log_message(EventKind::kVerifyReply, v, v.verifier, requester, v.verdict ? "valid" : "invalid");
  }
  const AcceptanceDecision decision = decide(verdicts, requests.size(), quorum);
  rec.decision = decision;
  for (const auto& req : requests) {
    const auto it = answered.find(req.verifier);
    ledger.update_response(req.verifier, it != answered.end());
    if (it != answered.end()) ledger.update_correctness(req.verifier, it->second == decision.accepted);
  }

  if (decision.accepted) {
    const bool tampered = auth.package.provenance.is_tampered();
    state_.installs.install(requester, auth.package);
    log_event(EventKind::kInstall, {requester, source}, tampered ? "tampered" : "clean");
    rec.installed_from = InstallSource::kCommunity;
    rec.installed_tampered = tampered;
  } else {
    log_event(EventKind::kRejected, {requester, source}, std::string(to_string(decision.reason)));
    fallback_to_store(requester, app, rec);
  }
  return finish();
}

void Simulation::refresh_suspects(EpochMetrics& metrics) {
  for (auto it = state_.suspects.begin(); it != state_.suspects.end();) {
    const auto& [node, app] = *it;
    if (!state_.graph.contains(node)) {
      it = state_.suspects.erase(it);
      continue;
    }
    if (scenario_.protocol.store_blocked) {
      ++it;
      continue;
    }
    if (!is_adversarial_server(state_.graph.profile(node).behavior)) {
      state_.installs.install(node, state_.catalog.clean(app));
      log_event(EventKind::kStoreRefresh, {node}, app.label());
      ++metrics.store_refreshes;
    }
    it = state_.suspects.erase(it);
  }
}

NodeProfile Simulation::make_newcomer(NodeId id, Rng& rng) const {
  NodeProfile p;
  p.id = id;
  const auto& dist = scenario_.type_distribution;
  double total = 0.0;
  for (const auto& [t, w] : dist) total += w;
  const double u = rng.unit() * total;
  double acc = 0.0;
  p.node_type = dist.back().first;
  for (const auto& [t, w] : dist) {
    acc += w;
    if (u < acc) {
      p.node_type = t;
      break;
    }
  }
  p.key_length_bits = scenario_.node_defaults.key_length_bits;
  p.max_degree = scenario_.node_defaults.max_degree;
  return p;
}

void Simulation::snapshot(EpochMetrics& metrics) {
  const auto& graph = state_.graph;
  metrics.nodes = graph.node_count();
  metrics.edges = graph.edge_count();
  metrics.infections = state_.installs.infection_count();
  try {
    metrics.homophily = homophily_index(graph);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kUndefinedIndex) throw;
  }
  for (const auto& [owner, ledger] : state_.trust.ledgers()) {
    for (const auto& [peer, r] : ledger.records()) {
      metrics_.trust.push_back(
          TrustSample{metrics.epoch, owner, peer, r.resp_prob, r.cond_trust, combined_trust(r)});
    }
  }
}

void Simulation::run_epoch(std::uint32_t epoch) {
  EpochMetrics m;
  m.epoch = epoch;
  current_epoch_ = &m;
  const std::string prefix = "epoch/" + std::to_string(epoch) + "/";

  refresh_suspects(m);

  Rng churn_rng = root_.split(prefix + "churn");
  const NodeFactory factory = [this](NodeId id, Rng& r) { return make_newcomer(id, r); };
  const auto churned = churn(state_.graph, scenario_.formation, state_.trust, factory, churn_rng);
  for (const auto& [a, b] : churned.severed) log_event(EventKind::kSever, {a, b});
  for (NodeId id : churned.departed) {
    state_.installs.remove_node(id);
    state_.trust.remove_node(id);
    rounds_.erase(id);
    log_event(EventKind::kLeave, {id});
  }
  for (NodeId id : churned.joined) {
    log_event(EventKind::kJoin, {id}, state_.graph.profile(id).node_type);
  }

  Rng formation_rng = root_.split(prefix + "formation");
  const auto formed =
      propose_and_approve(state_.graph, scenario_.formation, state_.trust, formation_rng);
  for (const auto& [a, b] : formed.formed) log_event(EventKind::kLink, {a, b});

  if (epoch == 0 && scenario_.supernodes > 0) {
    const auto hubs = designate_supernodes(
        state_.graph, std::min(scenario_.supernodes, state_.graph.node_count()),
        scenario_.formation.supernode_degree_multiplier);
    log_event(EventKind::kSupernode, hubs, nodes_detail(hubs));
  }

  for (const auto& req : scenario_.workload.requests) {
    if (req.epoch != epoch || !state_.graph.contains(req.node)) continue;
    retrieve(req.node, req.app, epoch);
  }
  if (scenario_.workload.requests_per_epoch > 0) {
    Rng work_rng = root_.split(prefix + "workload");
    // Nodes lacking an app ask first; once those run out, holders re-fetch.
    std::vector<std::pair<NodeId, AppId>> candidates;
    std::vector<std::pair<NodeId, AppId>> refetch;
    for (NodeId id : state_.graph.node_ids()) {
      for (const auto& spec : scenario_.apps) {
        auto& list = state_.installs.holds(id, spec.id) ? refetch : candidates;
        list.emplace_back(id, spec.id);
      }
    }
    work_rng.shuffle(candidates);
    work_rng.shuffle(refetch);
    candidates.insert(candidates.end(), refetch.begin(), refetch.end());
    const auto count = std::min(candidates.size(), scenario_.workload.requests_per_epoch);
    for (std::size_t i = 0; i < count; ++i) {
      retrieve(candidates[i].first, candidates[i].second, epoch);
    }
  }

  snapshot(m);
  metrics_.epochs.push_back(m);
  current_epoch_ = nullptr;
}

void Simulation::run_auth_bound() {
  const auto& ab = scenario_.auth_bound;
  const auto& proto = scenario_.protocol;
  const int width = proto.digest_width;
  const Quorum quorum = Quorum::from_decimal(proto.quorum);
  const auto k = static_cast<std::uint32_t>(ab.verifiers);

  auto& graph = state_.graph;
  const NodeId sender{0};
  const NodeId requester{k + 1};
  for (std::uint32_t i = 0; i <= k + 1; ++i) {
    NodeProfile p;
    p.id = NodeId{i};
    p.node_type = "device";
    p.key_length_bits = scenario_.node_defaults.key_length_bits;
    p.max_degree = static_cast<int>(k) + 1;
    graph.add_node(std::move(p));
  }
  Rng keys = root_.split("setup/keys");
  for (std::uint32_t i = 1; i <= k; ++i) graph.connect(sender, NodeId{i}, keys);

  const AppId app{"forged", "1"};
  Rng app_rng = root_.split("app/" + app.label());
  Bytes payload(scenario_.apps.empty() ? 64 : scenario_.apps.front().payload_bytes);
  app_rng.fill(payload);
  const AppPackage forged{app, std::move(payload), Provenance::tampered(sender)};
  const Digest claimed = forged.digest(width);
  const AdversaryContext ctx{&state_.catalog, width};

  AuthBoundSummary summary{ab.verifiers, ab.compromise_p, ab.trials, 0};
  for (std::size_t t = 0; t < ab.trials; ++t) {
    Rng rng = root_.split("trial/" + std::to_string(t));
    AuthPackage auth{sender, forged, claimed, {}};
    for (std::uint32_t i = 1; i <= k; ++i) {
      const NodeId v{i};
      graph.set_behavior(v, rng.bernoulli(ab.compromise_p) ? Behavior::kLyingVerifier
                                                           : Behavior::kHonest);
      Bytes junk(static_cast<std::size_t>(width / 8));
      rng.fill(junk);
      auth.macs.emplace_back(v, MacTag{graph.keystore(sender).find(v)->key_id,
                                       Digest(std::move(junk), width)});
    }
    const auto verdicts = verify_round(requester, auth, graph, ctx, proto.min_key_bits);
    const auto decision = decide(verdicts, auth.macs.size(), quorum);
    if (decision.accepted) ++summary.accepted;
    log_event(EventKind::kAuthTrial, {requester, sender},
              std::to_string(decision.positive_verdicts) + "/" +
                  std::to_string(decision.total_polled) + (decision.accepted ? " accepted" : " rejected"));
  }
  metrics_.auth_bound = summary;
}

RunResult Simulation::run() && {
  if (scenario_.experiment == Experiment::kAuthBound) {
    run_auth_bound();
  } else {
    for (std::uint32_t e = 0; e < scenario_.epochs; ++e) run_epoch(e);
  }
  metrics_.assumptions = assumptions();
  metrics_.parameters_json = to_json_text(scenario_);
  metrics_.event_log_digest = log_.digest().hex();
  return RunResult{std::move(log_), std::move(metrics_), std::move(state_)};
}

Scenario bandwidth_scenario(std::size_t peers, int width_bits) {
  if (peers == 0) throw Error(ErrorKind::kInvalidArgument, "need at least one peer");
  Scenario s;
  s.name = "bandwidth";
  s.seed = 11;
  s.protocol.digest_width = width_bits;
  s.protocol.mac_fanout = peers;
  s.node_defaults.max_degree = static_cast<int>(peers) + 2;
  const AppId app{"maps", "1.0"};
  s.apps.push_back(AppSpec{app, 4096, 0.0, 0.0});
  const auto n = static_cast<std::uint32_t>(peers);
  for (std::uint32_t i = 0; i <= n + 1; ++i) {
    NodeSpec spec;
    spec.id = NodeId{i};
    spec.node_type = "device";
    if (i >= 1 && i <= n) spec.apps[app] = InitialCopy::kClean;
    s.nodes.push_back(std::move(spec));
  }
  s.node_count = s.nodes.size();
  for (std::uint32_t a = 0; a <= n; ++a) {
    for (std::uint32_t b = a + 1; b <= n; ++b) s.edges.emplace_back(NodeId{a}, NodeId{b});
  }
  for (std::uint32_t h = 1; h <= n; ++h) s.edges.emplace_back(NodeId{h}, NodeId{n + 1});
  s.workload.requests.push_back(Request{0, NodeId{0}, app});
  return s;
}

RunResult run(const Scenario& scenario) { return Simulation(scenario).run(); }

}  // namespace commtrust
