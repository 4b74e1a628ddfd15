#include <gtest/gtest.h>

#include <sstream>

#include <json.hpp>

#include "commtrust/error.hpp"
#include "commtrust/event_log.hpp"

using namespace commtrust;

namespace {

Event ev(std::uint64_t tick, EventKind kind, std::string detail = {}) {
  Event e;
  e.tick = tick;
  e.kind = kind;
  e.participants = {NodeId{1}, NodeId{2}};
  e.wire_bytes = 10;
  e.overhead_bits = 224;
  e.detail = std::move(detail);
  return e;
}

}  // namespace

TEST(EventLog, TicksMustNotDecrease) {
  EventLog log;
  log.append(ev(1, EventKind::kCallOut));
  log.append(ev(1, EventKind::kVote));
  EXPECT_THROW(log.append(ev(0, EventKind::kCallOut)), Error);
  EXPECT_EQ(log.size(), 2u);
}

TEST(EventLog, DigestRecomputableAndSensitive) {
  EventLog a;
  EventLog b;
  for (auto* log : {&a, &b}) {
    log->append(ev(1, EventKind::kCallOut));
    log->append(ev(2, EventKind::kFingerprintReply, "abc"));
  }
  EXPECT_EQ(a.digest(), b.digest());
  EXPECT_EQ(a.digest(), fingerprint(a.canonical_bytes(), 256));
  EXPECT_EQ(a.digest().width_bits(), 256);
  b.append(ev(3, EventKind::kInstall));
  EXPECT_NE(a.digest(), b.digest());

  EventLog c;
  c.append(ev(1, EventKind::kCallOut));
  c.append(ev(2, EventKind::kFingerprintReply, "abd"));
  EXPECT_NE(a.digest(), c.digest());
}

TEST(EventLog, EmptyLogHasDigest) {
  EventLog log;
  EXPECT_TRUE(log.empty());
  EXPECT_EQ(log.digest().width_bits(), 256);
}

TEST(EventLog, JsonLines) {
  EventLog log;
  log.append(ev(1, EventKind::kCallOut));
  log.append(ev(2, EventKind::kSuspicionNotice, "x"));
  std::istringstream in(log.to_jsonl());
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_TRUE(j.contains("tick"));
    EXPECT_TRUE(j.contains("kind"));
    ++n;
  }
  EXPECT_EQ(n, 2);
}

TEST(EventKind, MessageClassification) {
  EXPECT_TRUE(is_message(EventKind::kVerifyReply));
  EXPECT_FALSE(is_message(EventKind::kVote));
  EXPECT_FALSE(is_message(EventKind::kJoin));
  EXPECT_FALSE(to_string(EventKind::kAppDelivery).empty());
}
