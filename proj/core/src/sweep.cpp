#include "commtrust/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "commtrust/error.hpp"
#include "commtrust/metrics.hpp"
#include "commtrust/rng.hpp"
#include "commtrust/simulation.hpp"

namespace commtrust {

using json = nlohmann::json;

SweepGrid parse_grid(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kValidation, std::string("grid: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::kValidation, "grid: expected an object");
  SweepGrid grid;
  for (const auto& [key, value] : doc.items()) {
    if (key == "replicates") {
      if (!value.is_number_unsigned() || value.get<std::size_t>() == 0) {
        throw Error(ErrorKind::kValidation, "grid.replicates: expected a positive integer");
      }
      grid.replicates = value.get<std::size_t>();
    } else if (key == "axes") {
      if (!value.is_object()) throw Error(ErrorKind::kValidation, "grid.axes: expected an object");
      const auto& known = sweepable_parameters();
      for (const auto& [name, values] : value.items()) {
        if (std::find(known.begin(), known.end(), name) == known.end()) {
          throw Error(ErrorKind::kUnknownParameter, "unknown sweep parameter: " + name);
        }
        if (!values.is_array() || values.empty()) {
          throw Error(ErrorKind::kValidation, "grid.axes." + name + ": expected a nonempty array");
        }
        std::vector<std::string> dumped;
        for (const auto& v : values) dumped.push_back(v.dump());
        grid.axes.emplace_back(name, std::move(dumped));
      }
    } else {
      throw Error(ErrorKind::kValidation, "grid: unknown field " + key);
    }
  }
  return grid;
}

SweepGrid load_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_grid(buf.str());
}

namespace {

std::vector<std::vector<std::pair<std::string, std::string>>> grid_points(const SweepGrid& grid) {
  std::vector<std::vector<std::pair<std::string, std::string>>> points{{}};
  for (const auto& [name, values] : grid.axes) {
    std::vector<std::vector<std::pair<std::string, std::string>>> next;
    for (const auto& p : points) {
      for (const auto& v : values) {
        auto q = p;
        q.emplace_back(name, v);
        next.push_back(std::move(q));
      }
    }
    points = std::move(next);
  }
  return points;
}

SweepRow run_point(const Scenario& base, std::vector<std::pair<std::string, std::string>> assignment,
                   std::size_t replicates) {
  Scenario point = base;
  for (const auto& [name, value] : assignment) point = with_parameter(point, name, value);
  SweepRow row;
  row.assignment = std::move(assignment);
  row.replicates = replicates;
  double homophily = 0.0;
  std::size_t defined = 0;
  for (std::size_t r = 0; r < replicates; ++r) {
    Scenario s = point;
    s.seed = Rng::derive_seed(base.seed, "sweep/" + std::to_string(r));
    const auto result = run(s);
    const auto& m = result.metrics;
    row.mean_final_infections += static_cast<double>(m.final_infections());
    row.mean_tampered_acceptance += m.tampered_acceptance_rate();
    row.mean_acceptance += m.acceptance_rate();
    if (auto h = m.final_homophily()) {
      homophily += *h;
      ++defined;
    }
  }
  const auto n = static_cast<double>(replicates);
  row.mean_final_infections /= n;
  row.mean_tampered_acceptance /= n;
  row.mean_acceptance /= n;
  if (defined) row.mean_homophily = homophily / static_cast<double>(defined);
  return row;
}

}  // namespace

std::vector<SweepRow> sweep(const Scenario& base, const SweepGrid& grid, std::size_t workers) {
  base.validate();
  const auto points = grid_points(grid);
  std::vector<SweepRow> rows(points.size());
  std::vector<std::exception_ptr> errors(points.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      try {
        rows[i] = run_point(base, points[i], grid.replicates);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(points.size(), 1));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << std::setprecision(17);
  if (!rows.empty()) {
    for (const auto& [name, v] : rows.front().assignment) os << name << ',';
  }
  os << "replicates,final_infections,tampered_acceptance,acceptance,homophily\n";
  for (const auto& row : rows) {
    for (const auto& [name, v] : row.assignment) os << v << ',';
    os << row.replicates << ',' << row.mean_final_infections << ','
       << row.mean_tampered_acceptance << ',' << row.mean_acceptance << ',';
    if (row.mean_homophily) os << *row.mean_homophily;
    os << '\n';
  }
  return os.str();
}

}  // namespace commtrust
