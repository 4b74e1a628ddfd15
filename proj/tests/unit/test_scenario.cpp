#include <gtest/gtest.h>

#include <string>

#include "commtrust/error.hpp"
#include "commtrust/scenario.hpp"

using namespace commtrust;

namespace {

std::string path(const char* name) { return std::string(COMMTRUST_SCENARIO_DIR) + "/" + name; }

}  // namespace

TEST(Scenario, ShippedFilesLoad) {
  for (const char* f : {"fig2.json", "bandwidth.json", "homophily.json", "freerider.json",
                        "outbreak.json", "auth_bound.json"}) {
    EXPECT_NO_THROW(load_scenario(path(f))) << f;
  }
}

TEST(Scenario, Fig2Contents) {
  const Scenario s = load_scenario(path("fig2.json"));
  EXPECT_EQ(s.nodes.size(), 5u);
  EXPECT_EQ(s.node_count, 5u);
  EXPECT_EQ(s.edges.size(), 10u);
  ASSERT_EQ(s.workload.requests.size(), 1u);
  EXPECT_EQ(s.workload.requests[0].app, (AppId{"maps", "1.0"}));
  EXPECT_EQ(s.nodes[1].apps.at(AppId{"maps", "1.0"}), InitialCopy::kTampered);
}

TEST(Scenario, JsonRoundTrip) {
  const Scenario s = load_scenario(path("outbreak.json"));
  const Scenario t = parse_scenario(to_json_text(s));
  EXPECT_EQ(to_json_text(t), to_json_text(s));
}

TEST(Scenario, ErrorListsEveryOffendingField) {
  const std::string text = R"({
    "schema": "commtrust.scenario/1",
    "node_count": 10,
    "bogus": 1,
    "protocol": {"quorum": 1.5, "digest_width": 160},
    "trust": {"alpha": 0}
  })";
  try {
    parse_scenario(text);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kValidation);
    const std::string msg = e.what();
    EXPECT_NE(msg.find("bogus"), std::string::npos);
    EXPECT_NE(msg.find("protocol.quorum"), std::string::npos);
    EXPECT_NE(msg.find("protocol.digest_width"), std::string::npos);
    EXPECT_NE(msg.find("trust.alpha"), std::string::npos);
  }
}

TEST(Scenario, SchemaRequired) {
  EXPECT_THROW(parse_scenario(R"({"schema": "other/2", "node_count": 3})"), Error);
  EXPECT_THROW(parse_scenario("not json"), Error);
}

TEST(Scenario, WrongTypeReported) {
  try {
    parse_scenario(R"({"schema": "commtrust.scenario/1", "node_count": "ten"})");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("node_count"), std::string::npos);
  }
}

TEST(Scenario, WithParameter) {
  const Scenario s = load_scenario(path("outbreak.json"));
  const Scenario t = with_parameter(s, "protocol.quorum", "0.7");
  EXPECT_DOUBLE_EQ(t.protocol.quorum, 0.7);
  EXPECT_DOUBLE_EQ(with_parameter(s, "compromise.fraction", "0.3").compromise_fraction, 0.3);
  try {
    with_parameter(s, "protocol.nonsense", "1");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUnknownParameter);
  }
  EXPECT_THROW(with_parameter(s, "protocol.quorum", "2.0"), Error);
}

TEST(Scenario, DefaultsValid) {
  Scenario s;
  s.node_count = 4;
  EXPECT_NO_THROW(s.validate());
  EXPECT_TRUE(s.problems().empty());
}
