#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "commtrust/metrics.hpp"
#include "commtrust/simulation.hpp"

using namespace commtrust;

namespace {

Event message(EventKind kind, std::uint64_t bits) {
  Event e;
  e.kind = kind;
  e.overhead_bits = bits;
  e.wire_bytes = 1;
  return e;
}

}  // namespace

TEST(Bandwidth, TenPeers) {
  const auto o = bandwidth_estimate(10, 10, 224);
  EXPECT_EQ(o.call_out_bits, 2240u);
  EXPECT_EQ(o.mac_block_bits, 2240u);
  EXPECT_EQ(o.verification_bits, 4480u);
  EXPECT_EQ(o.total_bits, 8960u);
  EXPECT_LT(o.total_bits, 10000u);
}

TEST(Bandwidth, FivePeersIsHalf) {
  const auto ten = bandwidth_estimate(10, 10, 224);
  const auto five = bandwidth_estimate(5, 5, 224);
  EXPECT_EQ(2 * five.call_out_bits, ten.call_out_bits);
  EXPECT_EQ(2 * five.mac_block_bits, ten.mac_block_bits);
  EXPECT_EQ(2 * five.verification_bits, ten.verification_bits);
  EXPECT_EQ(2 * five.total_bits, ten.total_bits);
}

TEST(AccountOverhead, SumsParts) {
  std::vector<Event> trace{message(EventKind::kCallOut, 0),
                           message(EventKind::kFingerprintReply, 224),
                           message(EventKind::kFingerprintReply, 224),
                           message(EventKind::kSuspicionNotice, 0),
                           message(EventKind::kAppDelivery, 448),
                           message(EventKind::kVerifyRequest, 448),
                           message(EventKind::kVerifyReply, 0)};
  Event vote;
  vote.kind = EventKind::kVote;
  trace.push_back(vote);
  trace[4].payload_bytes = 1000;
  const auto o = account_overhead(trace);
  EXPECT_EQ(o.call_out_bits, 448u);
  EXPECT_EQ(o.mac_block_bits, 448u);
  EXPECT_EQ(o.verification_bits, 448u);
  EXPECT_EQ(o.total_bits, o.call_out_bits + o.mac_block_bits + o.verification_bits);
  EXPECT_EQ(o.payload_bytes, 1000u);
  EXPECT_EQ(o.messages, 7u);
  EXPECT_EQ(o.wire_bytes, 7u);
}

TEST(RunDirectory, WritesAndSummarizes) {
  const auto dir = std::filesystem::temp_directory_path() / "commtrust_metrics_test";
  std::filesystem::remove_all(dir);
  const auto result = run(bandwidth_scenario(10));
  write_run_directory(dir.string(), result.log, result.metrics);
  for (const char* f : {"events.jsonl", "metrics.jsonl", "epochs.csv", "retrievals.csv", "summary.json"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
  std::ifstream in(dir / "summary.json");
  const auto summary = nlohmann::json::parse(in);
  EXPECT_EQ(summary["event_log_digest"], result.metrics.event_log_digest);
  const std::string text = summarize_run_directory(dir.string());
  EXPECT_NE(text.find("8960"), std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST(Csv, HeaderAndRows) {
  const auto result = run(bandwidth_scenario(3));
  const std::string epochs = epochs_csv(result.metrics);
  EXPECT_EQ(std::count(epochs.begin(), epochs.end(), '\n'), 2);
  const std::string retrievals = retrievals_csv(result.metrics);
  EXPECT_EQ(std::count(retrievals.begin(), retrievals.end(), '\n'), 2);
}
