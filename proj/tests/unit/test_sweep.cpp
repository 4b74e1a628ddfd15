#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "commtrust/error.hpp"
#include "commtrust/sweep.hpp"

using namespace commtrust;

namespace {

Scenario base() {
  return load_scenario(std::string(COMMTRUST_SCENARIO_DIR) + "/outbreak.json");
}

}  // namespace

TEST(Sweep, EmptyGridOneRow) {
  const auto rows = sweep(base(), parse_grid("{}"));
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_TRUE(rows[0].assignment.empty());
  EXPECT_EQ(rows[0].replicates, 1u);
}

TEST(Sweep, UnknownParameter) {
  try {
    parse_grid(R"({"axes": {"protocol.magic": [1]}})");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUnknownParameter);
  }
  EXPECT_THROW(parse_grid(R"({"axes": {"protocol.quorum": []}})"), Error);
  EXPECT_THROW(parse_grid(R"({"replicates": 0})"), Error);
}

TEST(Sweep, CartesianProduct) {
  const auto grid = parse_grid(
      R"({"axes": {"compromise.fraction": [0, 0.1, 0.3], "protocol.quorum": [0.5, 0.7]}})");
  Scenario s = base();
  s.epochs = 2;
  const auto rows = sweep(s, grid);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0].assignment.size(), 2u);
  const std::string csv = sweep_csv(rows);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7);
}

TEST(Sweep, WorkerCountDoesNotChangeTable) {
  const auto grid = parse_grid(R"({"axes": {"compromise.fraction": [0, 0.1, 0.3]}, "replicates": 2})");
  Scenario s = base();
  s.epochs = 3;
  EXPECT_EQ(sweep_csv(sweep(s, grid, 1)), sweep_csv(sweep(s, grid, 3)));
}

TEST(Sweep, CompromiseFractionRaisesTamperedAcceptance) {
  auto grid = load_grid(std::string(COMMTRUST_SCENARIO_DIR) + "/grid_compromise.json");
  grid.replicates = 100;
  const auto rows = sweep(base(), grid, 4);
  ASSERT_EQ(rows.size(), 3u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_GE(rows[i].mean_tampered_acceptance, rows[i - 1].mean_tampered_acceptance) << i;
  }
}

TEST(Sweep, QuorumGridMatchesBinomialTail) {
  Scenario s = load_scenario(std::string(COMMTRUST_SCENARIO_DIR) + "/auth_bound.json");
  s.auth_bound = AuthBoundParams{10, 0.3, 20000};
  const auto rows =
      sweep(s, load_grid(std::string(COMMTRUST_SCENARIO_DIR) + "/grid_quorum.json"), 2);
  ASSERT_EQ(rows.size(), 2u);
  // Pr[Bin(10, 0.3) > 5] and Pr[Bin(10, 0.3) > 7].
  const double expected[] = {0.0473489874, 0.0015903864};
  for (std::size_t i = 0; i < 2; ++i) {
    const double se = std::sqrt(expected[i] * (1 - expected[i]) / 20000.0);
    EXPECT_NEAR(rows[i].mean_acceptance, expected[i], 3 * se) << i;
  }
}
