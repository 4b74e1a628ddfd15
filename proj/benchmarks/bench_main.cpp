#include <benchmark/benchmark.h>

#include <vector>

#include "commtrust/credibility.hpp"
#include "commtrust/crypto.hpp"
#include "commtrust/rng.hpp"
#include "commtrust/scenario.hpp"
#include "commtrust/simulation.hpp"
#include "commtrust/trust.hpp"

using namespace commtrust;

namespace {

Bytes payload(std::size_t n) {
  Bytes b(n);
  Rng(1).fill(b);
  return b;
}

void BM_Fingerprint(benchmark::State& state) {
  const Bytes data = payload(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fingerprint(data, 224));
  state.SetBytesProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Fingerprint)->Arg(64)->Arg(4096)->Arg(1 << 20);

void BM_Mac(benchmark::State& state) {
  KeyStore a, b;
  Rng rng(2);
  const MacKey key = pair(NodeId{0}, NodeId{1}, a, b, rng, 128);
  const Bytes msg = payload(64);
  for (auto _ : state) benchmark::DoNotOptimize(mac(key, msg, 224, 128));
}
BENCHMARK(BM_Mac);

void BM_MajorityVote(benchmark::State& state) {
  const AppId app{"maps", "1.0"};
  const Digest clean = fingerprint(payload(32));
  const Digest bad = fingerprint(payload(33));
  std::vector<FingerprintReply> replies;
  for (std::int64_t i = 0; i < state.range(0); ++i) {
    replies.push_back({NodeId{static_cast<std::uint32_t>(i)}, app, i % 4 == 0 ? bad : clean, 128});
  }
  for (auto _ : state) benchmark::DoNotOptimize(majority_vote(replies));
}
BENCHMARK(BM_MajorityVote)->Arg(10)->Arg(100)->Arg(1000);

void BM_SubjectiveTrust(benchmark::State& state) {
  Ledger ledger(NodeId{0});
  std::vector<NodeId> ids;
  Rng rng(3);
  for (std::int64_t i = 1; i <= state.range(0); ++i) {
    const NodeId id{static_cast<std::uint32_t>(i)};
    ledger.set_record(id, TrustRecord{rng.unit(), rng.unit(), 1});
    ids.push_back(id);
  }
  for (auto _ : state) benchmark::DoNotOptimize(subjective_trust(ledger, ids));
}
BENCHMARK(BM_SubjectiveTrust)->Arg(10)->Arg(100);

void BM_Retrieval(benchmark::State& state) {
  const Scenario s = bandwidth_scenario(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run(s));
}
BENCHMARK(BM_Retrieval)->Arg(10)->Arg(50);

void BM_ScenarioRun(benchmark::State& state) {
  const Scenario s = load_scenario(std::string(COMMTRUST_SCENARIO_DIR) + "/outbreak.json");
  for (auto _ : state) benchmark::DoNotOptimize(run(s));
}
BENCHMARK(BM_ScenarioRun)->Unit(benchmark::kMillisecond);

}  // namespace
