#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "commtrust/scenario.hpp"

namespace commtrust {

/// Parameter grid: the cartesian product of every axis, each point run
/// `replicates` times.
struct SweepGrid {
  std::vector<std::pair<std::string, std::vector<std::string>>> axes;  // name -> JSON values
  std::size_t replicates = 1;
};

/// {"axes": {"protocol.quorum": [0.5, 0.7]}, "replicates": 10}
/// Throws ErrorKind::kUnknownParameter for axis names that cannot be swept and
/// ErrorKind::kValidation for malformed grids.
SweepGrid parse_grid(std::string_view json_text);
SweepGrid load_grid(const std::string& path);

struct SweepRow {
  std::vector<std::pair<std::string, std::string>> assignment;
  std::size_t replicates = 0;
  double mean_final_infections = 0.0;
  double mean_tampered_acceptance = 0.0;
  double mean_acceptance = 0.0;
  std::optional<double> mean_homophily;  // over replicates where it is defined
};

/// Replicate r of every point runs with the seed derived from (base seed, r),
/// so points share random streams. Workers > 1 run points on threads; the
/// table does not depend on the worker count.
std::vector<SweepRow> sweep(const Scenario& base, const SweepGrid& grid, std::size_t workers = 1);

std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace commtrust
