#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace kochspray {

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed{false};
  std::string detail;
};

struct ValidationOptions {
  double tolerance{0.01};  // relative oracle tolerance
  std::uint64_t seed{1};
  long long budget{200000};
};

// Suites: ifs, volume, zeros, expansion, oracle, all.
std::vector<std::string> validation_suites();

// Runs the invariant checks of one suite (or all). Unknown names throw DomainError.
std::vector<CheckResult> run_validation(const std::string& suite, const ValidationOptions& opt = {});

// Published coefficient bounds for the three reference configurations, one per
// zero of Z_C with Re z < -delta/2, in zero_set order.
struct PublishedBounds {
  int k1;
  int k2;
  std::vector<double> bounds;
};
const std::vector<PublishedBounds>& published_bounds();

nlohmann::ordered_json to_json(const CheckResult& r);

}  // namespace kochspray
